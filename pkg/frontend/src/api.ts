/** Typed client for the vsem teaching service (JSON over HTTP). */

export interface SessionSummary {
  session_id: string;
  window: number;
  stride: number;
  iteration: number;
  objects: number;
  theta: number;
}

export interface VisualObjectPreview {
  sequence_id: string;
  start: number;
  end: number;
  centroid: number[];
}

export type QueryKind = 'same_genus' | 'different';

export interface PendingQuery {
  query_id: number;
  kind: QueryKind;
  object_id: number;
  sequence_id: string;
  object_distance: number;
  object_preview: VisualObjectPreview[];
  encounter_preview: VisualObjectPreview[];
}

export type DecisionKind =
  | 'new_object'
  | 'new_object_same_genus'
  | 'merged_into_existing';

export interface Decision {
  kind: DecisionKind;
  matched_object: number | null;
  created_object: number | null;
  predicted_same_genus: boolean;
  predicted_different: boolean;
  supervised: boolean;
  iteration: number;
  theta: number;
}

export interface EncounterOutcome {
  state: 'decided' | 'pending';
  decision: Decision | null;
  query: PendingQuery | null;
}

export interface HierarchyMember {
  object_id: number;
  visual_object_count: number;
}

export interface GenusPreview {
  sequence_id: string;
  start: number;
  end: number;
}

export interface HierarchyGroup {
  members: HierarchyMember[];
  genus_visual_object_count: number;
  genus: GenusPreview[];
}

export interface Hierarchy {
  root: string;
  groups: HierarchyGroup[];
  isolated: HierarchyMember[];
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

async function errorDetail(res: Response): Promise<string> {
  try {
    const body = (await res.json()) as { detail?: unknown };
    if (typeof body.detail === 'string') return body.detail;
    return JSON.stringify(body.detail ?? body);
  } catch {
    return res.statusText || `HTTP ${res.status}`;
  }
}

export class TeachingClient {
  constructor(private readonly baseUrl: string) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let res: Response;
    try {
      res = await fetch(this.baseUrl + path, init);
    } catch (err) {
      throw new ApiError(0, `service unreachable: ${String(err)}`);
    }
    if (!res.ok) {
      throw new ApiError(res.status, await errorDetail(res));
    }
    return (await res.json()) as T;
  }

  private post<T>(path: string, body?: unknown): Promise<T> {
    return this.request<T>(path, {
      method: 'POST',
      ...(body === undefined
        ? {}
        : {
            headers: { 'Content-Type': 'application/json' },
            body: JSON.stringify(body),
          }),
    });
  }

  createSession(window: number, stride: number): Promise<SessionSummary> {
    return this.post('/sessions', { window, stride });
  }

  restoreSession(
    snapshot: Record<string, unknown>,
    window: number,
    stride: number,
  ): Promise<SessionSummary> {
    return this.post('/sessions/from-snapshot', { snapshot, window, stride });
  }

  getSession(sessionId: string): Promise<SessionSummary> {
    return this.request(`/sessions/${sessionId}`);
  }

  submitFrames(
    sessionId: string,
    sequenceId: string,
    frames: number[][],
  ): Promise<EncounterOutcome> {
    return this.post(`/sessions/${sessionId}/encounters`, {
      sequence_id: sequenceId,
      frames,
    });
  }

  submitFromManifest(
    sessionId: string,
    sequenceId: string,
    manifest: string,
  ): Promise<EncounterOutcome> {
    return this.post(`/sessions/${sessionId}/encounters`, {
      sequence_id: sequenceId,
      manifest,
    });
  }

  getQuery(sessionId: string): Promise<{ query: PendingQuery | null }> {
    return this.request(`/sessions/${sessionId}/query`);
  }

  answer(sessionId: string, answer: boolean): Promise<EncounterOutcome> {
    return this.post(`/sessions/${sessionId}/answer`, { answer });
  }

  hierarchy(sessionId: string): Promise<Hierarchy> {
    return this.request(`/sessions/${sessionId}/hierarchy`);
  }

  snapshot(sessionId: string): Promise<{ snapshot: Record<string, unknown> }> {
    return this.post(`/sessions/${sessionId}/snapshot`);
  }
}
