// Thin client over the decision service's HTTP+JSON endpoints.  Fetch is
// injectable so tests can run against a scripted service.

import type {
  AssessmentPayload,
  LoadAndGoPayload,
  PlanPayload,
  ServiceErrorPayload,
} from "./types.js";

export type FetchLike = (
  input: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<{
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}>;

export class ServiceError extends Error {
  readonly status: number;
  readonly code: string;
  readonly path: string;

  constructor(status: number, payload: ServiceErrorPayload) {
    super(payload.message);
    this.status = status;
    this.code = payload.code;
    this.path = payload.path;
  }
}

async function unwrap<T>(response: {
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}): Promise<T> {
  if (response.ok) {
    return (await response.json()) as T;
  }
  // Normalize whatever came back into the documented error shape so the
  // UI always has a code and a human-readable message to surface.
  let raw: Partial<ServiceErrorPayload> = {};
  try {
    raw = (await response.json()) as Partial<ServiceErrorPayload>;
  } catch {
    raw = {};
  }
  throw new ServiceError(response.status, {
    code: typeof raw?.code === "string" ? raw.code : "unknown",
    message:
      typeof raw?.message === "string"
        ? raw.message
        : `HTTP ${response.status}`,
    path: typeof raw?.path === "string" ? raw.path : "",
  });
}

export class TriageApi {
  private readonly base: string;
  private readonly fetchFn: FetchLike;

  constructor(base = "", fetchFn: FetchLike = fetch as unknown as FetchLike) {
    this.base = base.replace(/\/$/, "");
    this.fetchFn = fetchFn;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.fetchFn(`${this.base}${path}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    }).then((r) => unwrap<T>(r));
  }

  async loadModel(doc: unknown): Promise<string> {
    const out = await this.post<{ id: string }>("/models", doc);
    return out.id;
  }

  async createSession(body: {
    model: string;
    onset?: unknown;
    context?: string;
    origin?: number;
  }): Promise<string> {
    const out = await this.post<{ id: string }>("/sessions", body);
    return out.id;
  }

  postFinding(
    session: string,
    finding: { variable: string; state: string; timestamp: number },
  ): Promise<AssessmentPayload> {
    return this.post<AssessmentPayload>(`/sessions/${session}/findings`, finding);
  }

  getAssessment(
    session: string,
    now: number,
    grid?: number[],
  ): Promise<AssessmentPayload> {
    const query = grid && grid.length ? `&grid=${grid.join(",")}` : "";
    return this.fetchFn(
      `${this.base}/sessions/${session}/assessment?now=${now}${query}`,
    ).then((r) => unwrap<AssessmentPayload>(r));
  }

  // What-if for a delay outside the cached grid: fetch a one-point grid.
  async ecdaAt(session: string, now: number, delay: number): Promise<number> {
    const assessment = await this.getAssessment(session, now, [delay]);
    const lead = assessment.hypotheses[0];
    const point = lead?.ecda[0];
    if (!point) throw new ServiceError(502, {
      code: "bad_payload",
      message: "assessment carried no delay-cost samples",
      path: "hypotheses[0].ecda",
    });
    return point[1];
  }

  loadAndGo(
    session: string,
    body: { treatment: unknown; t: number; now?: number },
  ): Promise<LoadAndGoPayload> {
    return this.post<LoadAndGoPayload>(`/sessions/${session}/load-and-go`, body);
  }

  evaluateScenario(doc: unknown): Promise<{ plans: PlanPayload[] }> {
    return this.post<{ plans: PlanPayload[] }>("/scenarios/evaluate", doc);
  }

  exportSession(session: string): Promise<unknown> {
    return this.fetchFn(`${this.base}/sessions/${session}/export`).then((r) =>
      unwrap<unknown>(r),
    );
  }

  async importSession(doc: unknown): Promise<string> {
    const out = await this.post<{ id: string }>("/sessions/import", doc);
    return out.id;
  }
}
