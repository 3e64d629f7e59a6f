import { describe, expect, it } from "vitest";

import { ApiClient, type FetchLike } from "../src/api.js";
import { StudioStore } from "../src/store.js";
import {
  fixtureService,
  jsonResponse,
  metricsFixture,
  sessionFixture,
  stubFetch,
  sweepFixture,
} from "./helpers.js";

function storeWith(fetchFn: FetchLike) {
  return new StudioStore(new ApiClient("", fetchFn));
}

describe("StudioStore", () => {
  it("loads the rule table and clears the offline flag", async () => {
    const { fetchFn } = fixtureService();
    const store = storeWith(fetchFn);
    await store.loadRuleSpace();
    expect(store.state.ruleTable).toHaveLength(256);
    expect(store.state.offline).toBe(false);
  });

  it("marks offline on network failure and recovers on retry", async () => {
    let fail = true;
    const { fetchFn } = stubFetch(() => {
      if (fail) throw new TypeError("fetch failed");
      return jsonResponse(sweepFixture);
    });
    const store = storeWith(fetchFn);
    await store.loadRuleSpace();
    expect(store.state.offline).toBe(true);
    fail = false;
    await store.loadRuleSpace();
    expect(store.state.offline).toBe(false);
    expect(store.state.ruleTable).toHaveLength(256);
  });

  it("openRule creates a session and surfaces server values verbatim", async () => {
    const { fetchFn } = fixtureService();
    const store = storeWith(fetchFn);
    await store.openRule("110");
    expect(store.state.sessionId).toBe(sessionFixture.id);
    expect(store.state.revision).toBe(1);
    expect(store.metrics?.H).toBe(metricsFixture.H);
    expect(store.metrics?.h).toBe(metricsFixture.h);
    expect(store.cells).toHaveLength(sessionFixture.document.grid.rows);
  });

  it("control edits issue a PUT carrying If-Match and adopt the response", async () => {
    const { fetchFn, calls } = fixtureService();
    const store = storeWith(fetchFn);
    await store.openRule("110");
    store.updateControls({ steps: 24 });
    await store.flush();
    const put = calls.find((c) => c.init?.method === "PUT")!;
    const headers = put.init?.headers as Record<string, string>;
    expect(headers["If-Match"]).toBe("1");
    const body = JSON.parse(put.init?.body as string);
    expect(body.config.steps).toBe(24);
    expect(store.state.revision).toBe(2);
  });

  it("coalesces rapid edits into at most one queued PUT", async () => {
    const { fetchFn, calls } = fixtureService();
    const store = storeWith(fetchFn);
    await store.openRule("110");
    store.updateControls({ steps: 20 });
    store.updateControls({ steps: 21 });
    store.updateControls({ steps: 22 });
    await store.flush();
    const puts = calls.filter((c) => c.init?.method === "PUT");
    expect(puts.length).toBeLessThanOrEqual(2);
    const last = JSON.parse(puts[puts.length - 1].init?.body as string);
    expect(last.config.steps).toBe(22);
  });

  it("stale revision triggers refetch and a replay prompt", async () => {
    let first = true;
    const { fetchFn } = stubFetch((url, init) => {
      const method = init?.method ?? "GET";
      if (url.endsWith("/api/patterns") && method === "POST") {
        return jsonResponse(sessionFixture, 201);
      }
      if (method === "PUT" && first) {
        first = false;
        return jsonResponse({ error: "stale", revision: 5 }, 409);
      }
      if (method === "GET") {
        return jsonResponse({ ...sessionFixture, revision: 5 });
      }
      return jsonResponse({ ...sessionFixture, revision: 6 });
    });
    const store = storeWith(fetchFn);
    await store.openRule("110");
    store.updateControls({ steps: 30 });
    await store.flush();
    expect(store.state.replayPrompt).toBe(true);
    expect(store.state.revision).toBeGreaterThanOrEqual(5);
  });

  it("toggling a seed cell PUTs an explicit init with one cell flipped", async () => {
    const { fetchFn, calls } = fixtureService();
    const store = storeWith(fetchFn);
    await store.openRule("110");
    const before = store.cells[0][3];
    store.toggleSeedCell(3);
    await store.flush();
    const put = calls.find((c) => c.init?.method === "PUT")!;
    const body = JSON.parse(put.init?.body as string);
    expect(body.config.init.mode).toBe("explicit");
    expect(body.config.init.rows[0][3]).toBe(before === 0 ? 1 : 0);
  });
});
