import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { mountStudio } from "../src/app.js";
import { decodeCells, findOverlongRuns } from "../src/grid.js";
import {
  fixtureService,
  metricsFixture,
  rasterRepairedFixture,
  rasterWhiteFixture,
  sessionFixture,
} from "./helpers.js";

async function settle() {
  await new Promise((resolve) => setTimeout(resolve, 0));
}

describe("studio acceptance", () => {
  let root: HTMLElement;

  beforeEach(() => {
    document.body.innerHTML = '<div id="studio"></div>';
    root = document.getElementById("studio")!;
  });

  it("rule-space map renders 256 points with rules 0/255 guttered", async () => {
    const { fetchFn } = fixtureService();
    mountStudio(root, new ApiClient("", fetchFn));
    await settle();
    const circles = root.querySelectorAll(".rule-space circle");
    expect(circles).toHaveLength(256);
    expect(
      root.querySelector('circle[data-rule="0"]')!.getAttribute("class"),
    ).toContain("gutter-zero");
    expect(
      root.querySelector('circle[data-rule="255"]')!.getAttribute("class"),
    ).toContain("gutter-inf");
  });

  it("clicking a point loads a pattern whose displayed H, h equal the service values", async () => {
    const { fetchFn } = fixtureService();
    const store = mountStudio(root, new ApiClient("", fetchFn));
    await settle();
    root
      .querySelector('circle[data-rule="110"]')!
      .dispatchEvent(new MouseEvent("click"));
    await settle();
    await store.flush();

    const serverMetrics = metricsFixture;
    const shownH = root.querySelector(".metric-H")!.textContent;
    const shownRatio = root.querySelector(".metric-h")!.textContent;
    expect(shownH).toBe(String(serverMetrics.H));
    expect(shownRatio).toBe(String(serverMetrics.h));
    expect(root.querySelectorAll(".pattern-grid .pattern-row")).toHaveLength(
      sessionFixture.document.grid.rows,
    );
  });

  it("float overlay appears for an all-white raster import and disappears after repair", async () => {
    const { fetchFn } = fixtureService();
    const store = mountStudio(root, new ApiClient("", fetchFn));
    await settle();

    store.adoptRasterSession(rasterWhiteFixture);
    await settle();
    expect(
      root.querySelectorAll(".pattern-grid .float-violation").length,
    ).toBeGreaterThan(0);
    expect(rasterWhiteFixture.weaveable).toBe(false);
    expect(rasterWhiteFixture.reasons).toContain("weft-float");

    store.adoptRasterSession(rasterRepairedFixture);
    await settle();
    expect(root.querySelectorAll(".pattern-grid .float-violation")).toHaveLength(
      0,
    );
    const repaired = decodeCells(rasterRepairedFixture.document.grid);
    expect(findOverlongRuns(repaired, 5)).toEqual([]);
    expect(rasterRepairedFixture.float_report.max_weft_float).toBeLessThanOrEqual(
      5,
    );
  });
});
