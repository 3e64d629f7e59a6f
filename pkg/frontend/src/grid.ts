import type { GridRef } from "./types.js";

/** Expand the document's run-length encoded cells into row arrays. */
export function decodeCells(grid: GridRef): number[][] {
  const flat: number[] = [];
  for (let i = 0; i < grid.rle.length; i += 2) {
    const state = grid.rle[i];
    const count = grid.rle[i + 1];
    for (let j = 0; j < count; j += 1) flat.push(state);
  }
  if (flat.length !== grid.rows * grid.width) {
    throw new Error(
      `rle expands to ${flat.length} cells, expected ${grid.rows * grid.width}`,
    );
  }
  const rows: number[][] = [];
  for (let r = 0; r < grid.rows; r += 1) {
    rows.push(flat.slice(r * grid.width, (r + 1) * grid.width));
  }
  return rows;
}

export interface OverlongRun {
  /** "weft" = horizontal run of state 0, "warp" = vertical run of state 1. */
  orientation: "weft" | "warp";
  /** Row index for weft runs, column index for warp runs. */
  index: number;
  start: number;
  length: number;
}

/**
 * Locate float violations for the overlay: horizontal runs of 0 (weft over
 * warp) and vertical runs of 1 (warp over weft) longer than maxFloat. This
 * is highlight geometry only; the verdict and maxima shown in the metrics
 * panel always come from the service.
 */
export function findOverlongRuns(
  cells: number[][],
  maxFloat: number,
): OverlongRun[] {
  const runs: OverlongRun[] = [];
  const rows = cells.length;
  const cols = rows > 0 ? cells[0].length : 0;
  const scan = (
    length: number,
    value: (i: number) => number,
    state: number,
    emit: (start: number, len: number) => void,
  ) => {
    let start = 0;
    while (start < length) {
      if (value(start) !== state) {
        start += 1;
        continue;
      }
      let end = start;
      while (end < length && value(end) === state) end += 1;
      if (end - start > maxFloat) emit(start, end - start);
      start = end;
    }
  };
  for (let r = 0; r < rows; r += 1) {
    scan(cols, (c) => cells[r][c], 0, (start, length) =>
      runs.push({ orientation: "weft", index: r, start, length }),
    );
  }
  for (let c = 0; c < cols; c += 1) {
    scan(rows, (r) => cells[r][c], 1, (start, length) =>
      runs.push({ orientation: "warp", index: c, start, length }),
    );
  }
  return runs;
}

export interface GridRenderOptions {
  /** Called with the column index when an editable seed cell is toggled. */
  onToggleSeed?: (column: number) => void;
  /** Rows 0..initRows-1 are the editable seed rows. */
  initRows?: number;
  /** Float violations to highlight (from findOverlongRuns). */
  overlay?: OverlongRun[];
}

/**
 * Render cells as a DOM grid of buttons. Deterministic: the same cells and
 * options always produce the same markup. Seed cells are focusable buttons
 * so the grid stays keyboard-editable.
 */
export function renderPatternGrid(
  doc: Document,
  cells: number[][],
  options: GridRenderOptions = {},
): HTMLElement {
  const { onToggleSeed, initRows = 0, overlay = [] } = options;
  const flagged = new Set<string>();
  for (const run of overlay) {
    for (let i = 0; i < run.length; i += 1) {
      const key =
        run.orientation === "weft"
          ? `${run.index},${run.start + i}`
          : `${run.start + i},${run.index}`;
      flagged.add(key);
    }
  }

  const container = doc.createElement("div");
  container.className = "pattern-grid";
  container.setAttribute("role", "grid");
  cells.forEach((row, r) => {
    const rowEl = doc.createElement("div");
    rowEl.className = "pattern-row";
    rowEl.setAttribute("role", "row");
    row.forEach((state, c) => {
      const editable = r < initRows;
      const cell = doc.createElement(editable ? "button" : "span");
      const classes = [`cell`, `state-${state}`];
      if (editable) classes.push("seed");
      if (flagged.has(`${r},${c}`)) {
        classes.push("float-violation");
        const run = overlay.find((o) =>
          o.orientation === "weft"
            ? o.index === r && c >= o.start && c < o.start + o.length
            : o.index === c && r >= o.start && r < o.start + o.length,
        );
        if (run) cell.title = `${run.orientation} float, length ${run.length}`;
      }
      cell.className = classes.join(" ");
      cell.setAttribute("role", "gridcell");
      cell.setAttribute("aria-label", `row ${r} column ${c} state ${state}`);
      if (editable && onToggleSeed) {
        cell.addEventListener("click", () => onToggleSeed(c));
      }
      rowEl.appendChild(cell);
    });
    container.appendChild(rowEl);
  });
  return container;
}
