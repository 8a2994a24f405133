// Application wiring: one in-flight mutation at a time, no client-side
// algebra, every panel re-rendered from the latest server snapshot.

import { ApiClient, type EmbeddingDoc, type QuiverDoc, type SigmaDoc } from "./api.js";
import { forceLayout, layeredLayout, type Layout } from "./layout.js";
import {
  renderEmbedding,
  renderError,
  renderHistory,
  renderOpBadge,
  renderQuiver,
  renderSigmaTable,
  renderVariables,
} from "./render.js";
import {
  initialViewState,
  opBadgeFrom,
  withError,
  withSnapshot,
  type ViewState,
} from "./state.js";

export const PRESETS: Record<string, QuiverDoc> = {
  "triangle QT": {
    vertices: ["1", "2", "3"],
    arrows: [
      { id: "a12", source: "1", target: "2" },
      { id: "a23", source: "2", target: "3" },
      { id: "a13", source: "1", target: "3" },
    ],
  },
  "path A3": {
    vertices: ["1", "2", "3"],
    arrows: [
      { id: "a12", source: "1", target: "2" },
      { id: "a23", source: "2", target: "3" },
    ],
  },
  "path A2": {
    vertices: ["1", "2"],
    arrows: [{ id: "a12", source: "1", target: "2" }],
  },
  "out-star": {
    vertices: ["1", "2", "3"],
    arrows: [
      { id: "a12", source: "1", target: "2" },
      { id: "a13", source: "1", target: "3" },
    ],
  },
};

export interface App {
  readonly state: ViewState;
  start(quiver: QuiverDoc): Promise<void>;
  mutate(vertex: string): Promise<void>;
  undo(): Promise<void>;
  checkOpEquivalence(): Promise<void>;
  loadPanels(): Promise<void>;
  idle(): Promise<void>;
}

interface Hosts {
  quiver: Element;
  variables: Element;
  history: Element;
  badge: Element;
  error: Element;
  sigma: Element;
  embedding: Element;
}

export function initApp(doc: Document, apiBase: string): App {
  const api = new ApiClient(apiBase);
  const hosts: Hosts = {
    quiver: doc.getElementById("quiver-panel")!,
    variables: doc.getElementById("variables-panel")!,
    history: doc.getElementById("history-panel")!,
    badge: doc.getElementById("op-badge")!,
    error: doc.getElementById("error-panel")!,
    sigma: doc.getElementById("sigma-panel")!,
    embedding: doc.getElementById("embedding-panel")!,
  };
  let state = initialViewState();
  let embedding: EmbeddingDoc | null = null;
  let sigma: SigmaDoc | null = null;
  let depths: Record<string, number> | null = null;
  let pending: Promise<void> = Promise.resolve();
  const opDepth = 6;

  function layoutNow(quiver: QuiverDoc): Layout {
    if (depths && quiver.vertices.every((v) => v in depths!)) {
      return layeredLayout(quiver, depths, 420, 320);
    }
    return forceLayout(quiver, 420, 320);
  }

  function redraw(): void {
    renderError(doc, hosts.error, state);
    renderOpBadge(doc, hosts.badge, state);
    renderHistory(doc, hosts.history, state);
    renderVariables(doc, hosts.variables, state);
    if (state.session) {
      renderQuiver(
        doc,
        hosts.quiver,
        state.session.quiver,
        layoutNow(state.session.quiver),
        state.selected,
        (v) => app.mutate(v),
      );
    }
    renderSigmaTable(doc, hosts.sigma, sigma);
    renderEmbedding(doc, hosts.embedding, embedding, sigma, 0.5);
  }

  function track(work: () => Promise<void>): Promise<void> {
    // serialize user actions: at most one in-flight request per session
    const run = pending.then(async () => {
      if (state.busy) return;
      state = { ...state, busy: true };
      try {
        await work();
      } catch (e) {
        state = withError(state, e instanceof Error ? e.message : String(e));
      } finally {
        state = { ...state, busy: false };
        redraw();
      }
    });
    pending = run.catch(() => undefined);
    return run;
  }

  const app: App = {
    get state() {
      return state;
    },
    start(quiver: QuiverDoc): Promise<void> {
      return track(async () => {
        embedding = null;
        sigma = null;
        depths = null;
        state = { ...initialViewState(), busy: true };
        const { id } = await api.createSession(quiver);
        state = withSnapshot(state, await api.getState(id));
      });
    },
    mutate(vertex: string): Promise<void> {
      return track(async () => {
        if (!state.session) throw new Error("no active session");
        const snap = await api.mutate(state.session.id, vertex);
        state = { ...withSnapshot(state, snap), selected: vertex };
      });
    },
    undo(): Promise<void> {
      return track(async () => {
        if (!state.session) throw new Error("no active session");
        const snap = await api.undo(state.session.id);
        state = { ...withSnapshot(state, snap), selected: null };
      });
    },
    checkOpEquivalence(): Promise<void> {
      return track(async () => {
        if (!state.session) throw new Error("no active session");
        const doc_ = await api.opEquivalence(state.session.id, opDepth);
        state = { ...state, opBadge: opBadgeFrom(doc_, opDepth) };
      });
    },
    loadPanels(): Promise<void> {
      return track(async () => {
        if (!state.session) throw new Error("no active session");
        const sid = state.session.id;
        try {
          sigma = await api.sigma(sid);
          depths = Object.fromEntries(
            sigma.sigma.rule.map((r) => [r.vertex, r.j]),
          );
        } catch {
          sigma = null;
        }
        try {
          embedding = await api.embedding(sid);
        } catch {
          embedding = null;
        }
      });
    },
    idle(): Promise<void> {
      return pending;
    },
  };
  return app;
}

export function wireControls(doc: Document, app: App): void {
  const presetHost = doc.getElementById("presets")!;
  for (const [name, quiver] of Object.entries(PRESETS)) {
    const button = doc.createElement("button");
    button.textContent = name;
    button.setAttribute("data-preset", name);
    button.addEventListener("click", () => {
      void app.start(quiver).then(() => app.loadPanels());
    });
    presetHost.appendChild(button);
  }
  const custom = doc.getElementById("custom-start");
  const textarea = doc.getElementById("custom-quiver") as HTMLTextAreaElement | null;
  custom?.addEventListener("click", () => {
    if (!textarea) return;
    try {
      const quiver = JSON.parse(textarea.value) as QuiverDoc;
      void app.start(quiver).then(() => app.loadPanels());
    } catch {
      /* surfaced by the error panel on start */
    }
  });
  doc.getElementById("undo-button")?.addEventListener("click", () => {
    void app.undo();
  });
  doc.getElementById("op-check-button")?.addEventListener("click", () => {
    void app.checkOpEquivalence();
  });
}
