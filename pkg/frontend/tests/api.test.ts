import { describe, expect, it } from "vitest";

import {
  ApiClient,
  ApiError,
  StaleRevisionError,
  TooLargeError,
} from "../src/api.js";
import {
  jsonResponse,
  sessionFixture,
  stubFetch,
  sweepFixture,
} from "./helpers.js";

describe("ApiClient", () => {
  it("builds the sweep query string from defined params only", async () => {
    const { fetchFn, calls } = stubFetch(() => jsonResponse(sweepFixture));
    const client = new ApiClient("http://svc", fetchFn);
    await client.sweep({ seed: 1, width: 101, steps: 50 });
    expect(calls[0].url).toBe(
      "http://svc/api/rules/elementary?seed=1&width=101&steps=50",
    );
    await client.sweep();
    expect(calls[1].url).toBe("http://svc/api/rules/elementary");
  });

  it("sends If-Match on PUT", async () => {
    const { fetchFn, calls } = stubFetch(() => jsonResponse(sessionFixture));
    const client = new ApiClient("", fetchFn);
    await client.putPattern(
      "abc",
      { rule: { id: "90", k: 2, r: 1, w: 1 }, config: sessionFixture.document.config! },
      7,
    );
    expect(calls[0].url).toBe("/api/patterns/abc");
    const headers = calls[0].init?.headers as Record<string, string>;
    expect(headers["If-Match"]).toBe("7");
  });

  it("maps 409 with a revision to StaleRevisionError", async () => {
    const { fetchFn } = stubFetch(() =>
      jsonResponse({ error: "stale revision", revision: 4 }, 409),
    );
    const client = new ApiClient("", fetchFn);
    await expect(
      client.putPattern(
        "abc",
        { rule: { id: "90", k: 2, r: 1, w: 1 }, config: sessionFixture.document.config! },
        1,
      ),
    ).rejects.toSatisfy(
      (e: unknown) => e instanceof StaleRevisionError && e.current === 4,
    );
  });

  it("maps 413 to TooLargeError and 404 to ApiError", async () => {
    const { fetchFn } = stubFetch((url) =>
      url.endsWith("/api/raster")
        ? jsonResponse({ error: "image too large" }, 413)
        : jsonResponse({ error: "unknown session" }, 404),
    );
    const client = new ApiClient("", fetchFn);
    await expect(
      client.uploadRaster(new Blob(["x"]), "x.pgm", { width: 4, height: 4 }),
    ).rejects.toBeInstanceOf(TooLargeError);
    await expect(client.getPattern("nope")).rejects.toSatisfy(
      (e: unknown) => e instanceof ApiError && e.status === 404,
    );
  });

  it("posts multipart raster uploads with all options", async () => {
    const { fetchFn, calls } = stubFetch(() =>
      jsonResponse(sessionFixture, 201),
    );
    const client = new ApiClient("", fetchFn);
    await client.uploadRaster(new Blob(["img"]), "a.pgm", {
      width: 32,
      height: 16,
      method: "otsu",
      polarity: "light",
      repair: true,
    });
    const form = calls[0].init?.body as FormData;
    expect(form.get("width")).toBe("32");
    expect(form.get("height")).toBe("16");
    expect(form.get("method")).toBe("otsu");
    expect(form.get("polarity")).toBe("light");
    expect(form.get("repair")).toBe("true");
    expect(form.get("image")).toBeInstanceOf(File);
  });

  it("builds export URLs with parameters", () => {
    const client = new ApiClient("http://svc");
    expect(client.renderUrl("abc", 3)).toBe(
      "http://svc/api/patterns/abc/render.png?cellpx=3",
    );
    expect(client.draftUrl("abc", 16)).toBe(
      "http://svc/api/patterns/abc/draft.wif?capacity=16",
    );
  });
});
