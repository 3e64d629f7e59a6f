import type { FetchLike } from "../src/api.js";
import type {
  RasterPayload,
  RuleMetricsEntry,
  SessionPayload,
} from "../src/types.js";

import sweepJson from "./fixtures/sweep.json";
import sessionJson from "./fixtures/session110.json";
import metricsJson from "./fixtures/metrics110.json";
import rasterWhiteJson from "./fixtures/raster_white.json";
import rasterRepairedJson from "./fixtures/raster_white_repaired.json";

export const sweepFixture = sweepJson as RuleMetricsEntry[];
export const sessionFixture = sessionJson as SessionPayload;
export const metricsFixture = metricsJson as RuleMetricsEntry;
export const rasterWhiteFixture = rasterWhiteJson as RasterPayload;
export const rasterRepairedFixture = rasterRepairedJson as RasterPayload;

export interface RecordedCall {
  url: string;
  init?: RequestInit;
}

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

/** A fetch stub that replays canned responses and records every call. */
export function stubFetch(
  handler: (url: string, init?: RequestInit) => Response | Promise<Response>,
): { fetchFn: FetchLike; calls: RecordedCall[] } {
  const calls: RecordedCall[] = [];
  const fetchFn: FetchLike = async (url, init) => {
    calls.push({ url, init });
    return handler(url, init);
  };
  return { fetchFn, calls };
}

/** A minimal in-memory service speaking the fixture documents. */
export function fixtureService(): {
  fetchFn: FetchLike;
  calls: RecordedCall[];
} {
  let revision = sessionFixture.revision;
  return stubFetch((url, init) => {
    const method = init?.method ?? "GET";
    if (url.includes("/api/rules/elementary")) return jsonResponse(sweepFixture);
    if (url.endsWith("/api/patterns") && method === "POST") {
      return jsonResponse(sessionFixture, 201);
    }
    if (url.endsWith("/metrics") && method === "GET") {
      return jsonResponse(metricsFixture);
    }
    if (url.includes("/api/patterns/") && method === "GET") {
      return jsonResponse({ ...sessionFixture, revision });
    }
    if (url.includes("/api/patterns/") && method === "PUT") {
      revision += 1;
      return jsonResponse({ ...sessionFixture, revision });
    }
    if (url.endsWith("/api/raster") && method === "POST") {
      return jsonResponse(rasterWhiteFixture, 201);
    }
    return jsonResponse({ error: "not found" }, 404);
  });
}
