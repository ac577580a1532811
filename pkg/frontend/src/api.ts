/** Thin typed client for the segmentation session service.
 *
 * All numerics live on the server; this module only moves JSON and
 * base64 PNG payloads. The fetch implementation is injectable so tests
 * can record or replay traffic.
 */

export type Method = "m1" | "m2" | "otsu";
export type Fill = "black" | "white";

export interface SegmentParams {
  method: Method;
  n: number;
  kappa1: number;
  kappa2: number;
}

export interface ThresholdSummary {
  method: Method;
  n: number;
  kappa1: number;
  kappa2: number;
  thresholds: number[];
  segment_means: number[];
  degenerate: boolean;
}

export interface SegmentResponse {
  thresholds: ThresholdSummary;
  mssim: number;
  preview_png: string;
}

export interface ExtractResponse {
  extracted_png: string;
  mask_png: string;
  edges_png: string;
}

export interface HistogramsResponse {
  original: number[];
  segmented?: number[];
}

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function asJson<T>(resp: Response): Promise<T> {
  if (!resp.ok) {
    let detail = resp.statusText;
    try {
      const body = (await resp.json()) as { error?: string; detail?: unknown };
      detail = body.error ?? JSON.stringify(body.detail ?? body);
    } catch {
      /* non-JSON error body; keep the status text */
    }
    throw new ApiError(resp.status, detail);
  }
  return (await resp.json()) as T;
}

export class WorkbenchClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  /** Upload raw image bytes; returns the new session id. */
  async createSession(image: Uint8Array): Promise<string> {
    const resp = await this.fetchImpl(`${this.baseUrl}/sessions`, {
      method: "POST",
      headers: { "content-type": "application/octet-stream" },
      body: image as unknown as BodyInit,
    });
    const body = await asJson<{ id: string }>(resp);
    return body.id;
  }

  async segment(
    sessionId: string,
    params: SegmentParams,
  ): Promise<SegmentResponse> {
    const resp = await this.fetchImpl(
      `${this.baseUrl}/sessions/${sessionId}/segment`,
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(params),
      },
    );
    return asJson<SegmentResponse>(resp);
  }

  async extract(
    sessionId: string,
    segments: number[],
    fill: Fill,
  ): Promise<ExtractResponse> {
    const resp = await this.fetchImpl(
      `${this.baseUrl}/sessions/${sessionId}/extract`,
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ segments, fill }),
      },
    );
    return asJson<ExtractResponse>(resp);
  }

  async histograms(sessionId: string): Promise<HistogramsResponse> {
    const resp = await this.fetchImpl(
      `${this.baseUrl}/sessions/${sessionId}/histograms`,
    );
    return asJson<HistogramsResponse>(resp);
  }

  /** Raw PNG bytes of a stored extraction artifact. */
  async artifact(sessionId: string, name: string): Promise<Uint8Array> {
    const resp = await this.fetchImpl(
      `${this.baseUrl}/sessions/${sessionId}/artifacts/${name}`,
    );
    if (!resp.ok) {
      throw new ApiError(resp.status, resp.statusText);
    }
    return new Uint8Array(await resp.arrayBuffer());
  }
}
