// View state: the last server snapshot plus purely cosmetic UI bits.
// The rendered quiver always equals the snapshot; there is no
// client-side mutation logic anywhere.

import type { OpEquivalenceDoc, SessionState } from "./api.js";

export interface OpBadge {
  label: string;
  sequence: string[] | null;
}

export interface ViewState {
  session: SessionState | null;
  selected: string | null;
  busy: boolean;
  opBadge: OpBadge | null;
  error: string | null;
}

export function initialViewState(): ViewState {
  return { session: null, selected: null, busy: false, opBadge: null, error: null };
}

export function withSnapshot(state: ViewState, snapshot: SessionState): ViewState {
  return { ...state, session: snapshot, error: null, opBadge: state.opBadge };
}

export function withError(state: ViewState, message: string): ViewState {
  return { ...state, error: message };
}

export function opBadgeFrom(doc: OpEquivalenceDoc, depth: number): OpBadge {
  if (!doc.found) {
    return { label: `unknown within depth ${depth}`, sequence: null };
  }
  const seq = doc.sequence ?? [];
  const label =
    seq.length === 0 ? "equivalent, depth 0" : `equivalent via [${seq.join(",")}]`;
  return { label, sequence: seq };
}

export interface VariableRow {
  vertex: string;
  expression: string;
}

export function variableRows(state: ViewState): VariableRow[] {
  if (!state.session) return [];
  return state.session.quiver.vertices.map((v) => ({
    vertex: v,
    expression: state.session!.cluster[v],
  }));
}
