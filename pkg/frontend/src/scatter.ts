import type { RuleMetricsEntry } from "./types.js";

export interface ScatterPoint {
  rule: string;
  x: number;
  y: number;
  weaveable: boolean;
}

export interface ScatterLayout {
  /** Rules with finite nonzero h, positioned on a log-scaled x axis. */
  points: ScatterPoint[];
  /** Rules with h = 0, docked left of the plot area. */
  gutterZero: string[];
  /** Rules with h = "inf", docked right of the plot area. */
  gutterInf: string[];
}

export interface ScatterOptions {
  width?: number;
  height?: number;
  weaveableOnly?: boolean;
}

/**
 * Lay out the 256-rule metrics table as a scatter: x = log10(h) mapped into
 * [0, width], y = H mapped into [height, 0] (SVG-style, origin top-left).
 * Rules with h in {0, inf} cannot sit on a log axis and land in side gutters.
 * Values are placed, never recomputed — H and h come from the service.
 */
export function layoutRuleSpace(
  entries: RuleMetricsEntry[],
  options: ScatterOptions = {},
): ScatterLayout {
  const { width = 640, height = 400, weaveableOnly = false } = options;
  const gutterZero: string[] = [];
  const gutterInf: string[] = [];
  const plottable: RuleMetricsEntry[] = [];
  for (const entry of entries) {
    if (entry.h === 0) gutterZero.push(entry.rule_id);
    else if (entry.h === "inf") gutterInf.push(entry.rule_id);
    else plottable.push(entry);
  }

  const logs = plottable.map((e) => Math.log10(e.h as number));
  const lo = Math.min(...logs);
  const hi = Math.max(...logs);
  const span = hi - lo || 1;
  const maxH = Math.max(...plottable.map((e) => e.H), 1e-12);

  const points: ScatterPoint[] = [];
  plottable.forEach((entry, i) => {
    if (weaveableOnly && !entry.weaveable) return;
    points.push({
      rule: entry.rule_id,
      x: ((logs[i] - lo) / span) * width,
      y: height - (entry.H / maxH) * height,
      weaveable: entry.weaveable,
    });
  });
  return { points, gutterZero, gutterInf };
}

/** Render the layout as an SVG element with one clickable circle per rule. */
export function renderScatter(
  doc: Document,
  entries: RuleMetricsEntry[],
  options: ScatterOptions & { onSelect?: (rule: string) => void } = {},
): SVGSVGElement {
  const { width = 640, height = 400, onSelect } = options;
  const layout = layoutRuleSpace(entries, options);
  const ns = "http://www.w3.org/2000/svg";
  const svg = doc.createElementNS(ns, "svg") as SVGSVGElement;
  svg.setAttribute("class", "rule-space");
  svg.setAttribute("viewBox", `-40 0 ${width + 80} ${height}`);
  svg.setAttribute("role", "img");
  svg.setAttribute("aria-label", "rule space map");

  const addPoint = (
    rule: string,
    x: number,
    y: number,
    weaveable: boolean,
    gutter: string | null,
  ) => {
    const circle = doc.createElementNS(ns, "circle");
    circle.setAttribute("cx", x.toFixed(2));
    circle.setAttribute("cy", y.toFixed(2));
    circle.setAttribute("r", "4");
    circle.setAttribute("data-rule", rule);
    circle.setAttribute(
      "class",
      [weaveable ? "weaveable" : "unweaveable", gutter ? `gutter-${gutter}` : ""]
        .filter(Boolean)
        .join(" "),
    );
    circle.setAttribute("tabindex", "0");
    circle.setAttribute("aria-label", `rule ${rule}`);
    if (onSelect) {
      circle.addEventListener("click", () => onSelect(rule));
      circle.addEventListener("keydown", (event) => {
        if ((event as KeyboardEvent).key === "Enter") onSelect(rule);
      });
    }
    svg.appendChild(circle);
  };

  layout.points.forEach((p) => addPoint(p.rule, p.x, p.y, p.weaveable, null));
  layout.gutterZero.forEach((rule, i) =>
    addPoint(rule, -24, 12 + i * 10, false, "zero"),
  );
  layout.gutterInf.forEach((rule, i) =>
    addPoint(rule, width + 24, 12 + i * 10, false, "inf"),
  );
  return svg;
}
