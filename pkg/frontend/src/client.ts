import type { Stroke } from "./buffer.js";

export interface Health {
  schema_version: number;
  status: string;
  model_kind: string;
  n_classes: number;
}

export interface Prediction {
  class_id: number;
  label: string;
  votes: number;
}

export interface PredictResponse {
  schema_version: number;
  predictions: Prediction[];
  feature_dim: number;
}

export class ApiError extends Error {
  status: number;

  constructor(status: number, message: string) {
    super(message);
    this.name = "ApiError";
    this.status = status;
  }
}

/** Thrown to a caller whose queued request was replaced by a newer one. */
export class SupersededError extends Error {
  constructor() {
    super("superseded by a newer request");
    this.name = "SupersededError";
  }
}

export function errorMessage(e: unknown): string {
  if (e instanceof ApiError) return `server says: ${e.message}`;
  if (e instanceof Error) return e.message;
  return String(e);
}

type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

async function readErrorBody(res: Response): Promise<string> {
  try {
    const body = (await res.json()) as { error?: string };
    if (typeof body.error === "string") return body.error;
  } catch {
    // non-JSON error body; fall through to the status line
  }
  return `HTTP ${res.status}`;
}

/**
 * Client for the model server. At most one /predict request is in
 * flight; a submit that arrives while one is running is queued, and a
 * newer submit replaces the queued one (its caller gets SupersededError).
 */
export class PredictClient {
  private inflight: Promise<unknown> | null = null;
  private pending: { run: () => void; cancel: () => void } | null = null;

  constructor(
    private baseUrl: string,
    private fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
  }

  async health(): Promise<Health> {
    const res = await this.fetchFn(`${this.baseUrl}/health`);
    if (!res.ok) throw new ApiError(res.status, await readErrorBody(res));
    return (await res.json()) as Health;
  }

  predict(strokes: Stroke[], topK = 5): Promise<PredictResponse> {
    if (!this.inflight) return this.start(strokes, topK);
    return new Promise((resolve, reject) => {
      this.pending?.cancel();
      this.pending = {
        run: () => this.start(strokes, topK).then(resolve, reject),
        cancel: () => reject(new SupersededError()),
      };
    });
  }

  private start(strokes: Stroke[], topK: number): Promise<PredictResponse> {
    const request = this.post(strokes, topK).finally(() => {
      this.inflight = null;
      const next = this.pending;
      this.pending = null;
      next?.run();
    });
    // track completion without claiming the caller's rejection
    this.inflight = request.catch(() => undefined);
    return request;
  }

  private async post(strokes: Stroke[], topK: number): Promise<PredictResponse> {
    const res = await this.fetchFn(`${this.baseUrl}/predict`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ strokes, top_k: topK }),
    });
    if (!res.ok) throw new ApiError(res.status, await readErrorBody(res));
    return (await res.json()) as PredictResponse;
  }
}
