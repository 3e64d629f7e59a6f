import type {
  PatternRequest,
  RasterOptions,
  RasterPayload,
  RuleMetricsEntry,
  SessionPayload,
  SweepQuery,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

/** PUT raced a newer revision; `current` is the server's revision. */
export class StaleRevisionError extends ApiError {
  constructor(public current: number) {
    super(409, `stale revision; server is at ${current}`);
    this.name = "StaleRevisionError";
  }
}

export class TooLargeError extends ApiError {
  constructor(message: string) {
    super(413, message);
    this.name = "TooLargeError";
  }
}

async function errorOf(resp: Response): Promise<ApiError> {
  let message = `${resp.status}`;
  let body: Record<string, unknown> = {};
  try {
    body = (await resp.json()) as Record<string, unknown>;
    if (typeof body.error === "string") message = body.error;
  } catch {
    /* non-JSON error body */
  }
  if (resp.status === 409 && typeof body.revision === "number") {
    return new StaleRevisionError(body.revision);
  }
  if (resp.status === 413) return new TooLargeError(message);
  return new ApiError(resp.status, message);
}

/** Thin typed client over the design-service HTTP API. */
export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchFn: FetchLike = (u, i) => fetch(u, i),
  ) {}

  private async request(url: string, init?: RequestInit): Promise<Response> {
    const resp = await this.fetchFn(this.baseUrl + url, init);
    if (!resp.ok) throw await errorOf(resp);
    return resp;
  }

  async sweep(query: SweepQuery = {}): Promise<RuleMetricsEntry[]> {
    const params = new URLSearchParams();
    for (const [key, value] of Object.entries(query)) {
      if (value !== undefined) params.set(key, String(value));
    }
    const qs = params.toString();
    const resp = await this.request(
      `/api/rules/elementary${qs ? `?${qs}` : ""}`,
    );
    return resp.json();
  }

  async createPattern(body: PatternRequest): Promise<SessionPayload> {
    const resp = await this.request("/api/patterns", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    return resp.json();
  }

  async getPattern(id: string): Promise<SessionPayload> {
    const resp = await this.request(`/api/patterns/${id}`);
    return resp.json();
  }

  async putPattern(
    id: string,
    body: PatternRequest,
    revision: number,
  ): Promise<SessionPayload> {
    const resp = await this.request(`/api/patterns/${id}`, {
      method: "PUT",
      headers: {
        "Content-Type": "application/json",
        "If-Match": String(revision),
      },
      body: JSON.stringify(body),
    });
    return resp.json();
  }

  async metrics(id: string): Promise<RuleMetricsEntry> {
    const resp = await this.request(`/api/patterns/${id}/metrics`);
    return resp.json();
  }

  renderUrl(id: string, cellPx = 8): string {
    return `${this.baseUrl}/api/patterns/${id}/render.png?cellpx=${cellPx}`;
  }

  draftUrl(id: string, capacity = 32): string {
    return `${this.baseUrl}/api/patterns/${id}/draft.wif?capacity=${capacity}`;
  }

  async uploadRaster(
    image: Blob,
    filename: string,
    options: RasterOptions,
  ): Promise<RasterPayload> {
    const form = new FormData();
    form.append("image", image, filename);
    form.append("width", String(options.width));
    form.append("height", String(options.height));
    if (options.method) form.append("method", options.method);
    if (options.threshold !== undefined)
      form.append("threshold", String(options.threshold));
    if (options.polarity) form.append("polarity", options.polarity);
    if (options.repair) form.append("repair", "true");
    const resp = await this.request("/api/raster", {
      method: "POST",
      body: form,
    });
    return resp.json();
  }
}
