// Typed client for the quiverlab session service.  The UI performs no
// algebra of its own: every expression string shown on screen comes
// verbatim from these responses.

export interface ArrowDoc {
  id: string;
  source: string;
  target: string;
}

export interface QuiverDoc {
  vertices: string[];
  arrows: ArrowDoc[];
}

export interface SessionState {
  id: string;
  quiver: QuiverDoc;
  cluster: Record<string, string>;
  history: string[];
}

export interface OpEquivalenceDoc {
  found: boolean;
  complete: boolean;
  sequence: string[] | null;
  iso: { kind: string; vertex_map: Record<string, string> } | null;
}

export interface EmbeddingPointDoc {
  m: number;
  vertex: string;
  xyz: [string, string, string];
}

export interface EmbeddingDoc {
  embedding: {
    points: EmbeddingPointDoc[];
    arrows: [string, string][];
  };
  verification: { ok: boolean; details: string[] };
}

export interface SigmaRuleEntry {
  vertex: string;
  j: number;
  image_vertex: string;
}

export interface SigmaDoc {
  sigma: { rule: SigmaRuleEntry[]; layer_perms: number[][] };
  verification: { ok: boolean };
}

export interface InverseAutoDoc {
  found: boolean;
  complete: boolean;
  witness?: {
    images: Record<string, string>;
    sequence: string[];
    involutive: boolean;
  };
  verification?: { ok: boolean };
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const resp = await fetch(url, init);
  const body = (await resp.json()) as T & {
    error?: { code: string; message: string };
  };
  if (!resp.ok) {
    const err = body.error ?? { code: "http_error", message: `status ${resp.status}` };
    throw new ApiError(resp.status, err.code, err.message);
  }
  return body;
}

export class ApiClient {
  constructor(readonly base: string) {}

  private url(path: string): string {
    return `${this.base}${path}`;
  }

  private post<T>(path: string, body?: unknown): Promise<T> {
    return request<T>(this.url(path), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: body === undefined ? null : JSON.stringify(body),
    });
  }

  createSession(quiver: QuiverDoc): Promise<{ id: string }> {
    return this.post("/api/sessions", { quiver });
  }

  getState(id: string): Promise<SessionState> {
    return request(this.url(`/api/sessions/${id}`));
  }

  mutate(id: string, vertex: string): Promise<SessionState> {
    return this.post(`/api/sessions/${id}/mutate`, { vertex });
  }

  undo(id: string): Promise<SessionState> {
    return this.post(`/api/sessions/${id}/undo`);
  }

  opEquivalence(id: string, depth = 6): Promise<OpEquivalenceDoc> {
    return request(this.url(`/api/sessions/${id}/op-equivalence?depth=${depth}`));
  }

  embedding(id: string): Promise<EmbeddingDoc> {
    return request(this.url(`/api/sessions/${id}/embedding`));
  }

  sigma(id: string): Promise<SigmaDoc> {
    return request(this.url(`/api/sessions/${id}/sigma`));
  }

  inverseAutomorphism(id: string, involutive = true, depth = 8): Promise<InverseAutoDoc> {
    return request(
      this.url(
        `/api/sessions/${id}/inverse-automorphism?involutive=${involutive}&depth=${depth}`,
      ),
    );
  }
}
