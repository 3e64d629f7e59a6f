"""Cloth interpretation of pattern grids: drawdowns, float analysis, loom drafts.

Convention fixed package-wide: state 1 = warp end passes over the weft pick
(warp-up), state 0 = weft-up.  A warp float is a vertical run of warp-up in a
column; a weft float is a horizontal run of weft-up in a row.  Runs never join
across the grid edge, even for wrap-evolved grids: cloth is cut flat.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .automata import PatternGrid
from .errors import CapacityError, DomainError, ValidationError

DEFAULT_SHAFT_CAPACITY = 32
DEFAULT_PALETTE = ((255, 255, 255), (0, 0, 0))  # weft white, warp black


def running_runs(mask: np.ndarray) -> np.ndarray:
    """Per-cell current run length of True along the last axis."""
    m = np.asarray(mask, dtype=bool)
    x = m.cumsum(axis=-1)
    resets = np.where(~m, x, 0)
    return x - np.maximum.accumulate(resets, axis=-1)


def max_run(mask: np.ndarray, axis: int) -> int:
    """Longest run of True along ``axis`` (0 if no True cell)."""
    m = np.asarray(mask, dtype=bool)
    if m.size == 0:
        return 0
    if axis == 0:
        m = m.T
    return int(running_runs(m).max(initial=0))


def run_length_histogram(mask: np.ndarray, axis: int) -> Dict[int, int]:
    """Counts of maximal True-run lengths along ``axis``."""
    m = np.asarray(mask, dtype=bool)
    if axis == 0:
        m = m.T
    hist: Counter = Counter()
    for line in m:
        run = 0
        for cell in line:
            if cell:
                run += 1
            elif run:
                hist[run] += 1
                run = 0
        if run:
            hist[run] += 1
    return dict(hist)


@dataclass(frozen=True)
class FloatReport:
    max_warp_float: int
    max_weft_float: int
    warp_histogram: Dict[int, int]
    weft_histogram: Dict[int, int]


@dataclass(frozen=True)
class Drawdown:
    """Binary interlacement grid plus its colorway."""

    grid: PatternGrid
    warp_colors: Tuple[int, ...]
    weft_colors: Tuple[int, ...]
    palette: Tuple[Tuple[int, int, int], ...]

    def __post_init__(self):
        if self.grid.k != 2:
            raise ValidationError("drawdown requires a binary grid; color-separate first")
        if len(self.warp_colors) != self.grid.width:
            raise ValidationError(
                f"warp_colors length {len(self.warp_colors)} != width {self.grid.width}"
            )
        if len(self.weft_colors) != self.grid.rows:
            raise ValidationError(
                f"weft_colors length {len(self.weft_colors)} != rows {self.grid.rows}"
            )
        indices = set(self.warp_colors) | set(self.weft_colors)
        if indices and max(indices) >= len(self.palette):
            raise ValidationError("color index out of palette range")
        if min(indices, default=0) < 0:
            raise ValidationError("negative color index")

    @property
    def cells(self) -> np.ndarray:
        return self.grid.cells


def drawdown_from_grid(
    grid: PatternGrid,
    warp_colors: Optional[Sequence[int]] = None,
    weft_colors: Optional[Sequence[int]] = None,
    palette: Optional[Sequence[Tuple[int, int, int]]] = None,
) -> Drawdown:
    """Wrap a binary grid as a drawdown; single-color defaults are expanded."""
    palette = tuple(tuple(c) for c in (palette or DEFAULT_PALETTE))
    if warp_colors is None:
        warp_colors = (1,) * grid.width
    elif len(warp_colors) == 1:
        warp_colors = tuple(warp_colors) * grid.width
    if weft_colors is None:
        weft_colors = (0,) * grid.rows
    elif len(weft_colors) == 1:
        weft_colors = tuple(weft_colors) * grid.rows
    return Drawdown(grid, tuple(warp_colors), tuple(weft_colors), palette)


def color_separate(grid: PatternGrid, mapping: Optional[Dict[int, Tuple[int, int]]] = None):
    """Split a k-state grid into binary interlacement plus per-row weft colors.

    ``mapping`` sends each state to an (interlacement bit, color index) pair;
    default: state 0 -> (weft-up, color 0), state s>0 -> (warp-up, color s).
    Each row's weft color is the mapped color of its most frequent state
    (ties broken toward the smaller state).
    """
    if mapping is None:
        mapping = {s: (0 if s == 0 else 1, s) for s in range(grid.k)}
    present = set(int(s) for s in np.unique(grid.cells))
    missing = present - set(mapping)
    if missing:
        raise ValidationError(f"mapping missing states {sorted(missing)}")
    for s, (bit, _color) in mapping.items():
        if bit not in (0, 1):
            raise ValidationError(f"mapping for state {s} has non-binary interlacement {bit}")

    lut = np.zeros(grid.k, dtype=np.uint8)
    for s, (bit, _color) in mapping.items():
        if s < grid.k:
            lut[s] = bit
    binary = PatternGrid(lut[grid.cells], 2, dict(grid.meta))

    weft_colors = []
    for row in grid.cells:
        counts = np.bincount(row, minlength=grid.k)
        dominant = int(np.argmax(counts))
        weft_colors.append(mapping[dominant][1])
    return binary, tuple(weft_colors)


def float_report(drawdown: Drawdown) -> FloatReport:
    """Exact maximal-run statistics, no wraparound joining."""
    cells = drawdown.cells
    if cells.size == 0:
        raise DomainError("empty drawdown")
    warp_mask = cells == 1
    weft_mask = cells == 0
    return FloatReport(
        max_warp_float=max_run(warp_mask, axis=0),
        max_weft_float=max_run(weft_mask, axis=1),
        warp_histogram=run_length_histogram(warp_mask, axis=0),
        weft_histogram=run_length_histogram(weft_mask, axis=1),
    )


def grid_float_maxima(cells: np.ndarray) -> Tuple[int, int]:
    """(max warp float, max weft float) of a raw binary cell array."""
    return max_run(cells == 1, axis=0), max_run(cells == 0, axis=1)


@dataclass(frozen=True)
class LoomDraft:
    """Threading + liftplan factorization of a drawdown."""

    shaft_count: int
    threading: Tuple[int, ...]  # per warp end, shaft index 0..S-1
    liftplan: Tuple[frozenset, ...]  # per pick, set of lifted shafts
    drawdown: Drawdown

    def reconstruct(self) -> np.ndarray:
        """Drawdown cells implied by threading and liftplan."""
        rows = len(self.liftplan)
        cols = len(self.threading)
        out = np.zeros((rows, cols), dtype=np.uint8)
        for p, lifted in enumerate(self.liftplan):
            for e, shaft in enumerate(self.threading):
                if shaft in lifted:
                    out[p, e] = 1
        return out


def factorize(drawdown: Drawdown, capacity: int = DEFAULT_SHAFT_CAPACITY) -> LoomDraft:
    """Assign shafts as equivalence classes of identical columns.

    Shafts are numbered by first occurrence left to right, so output is
    deterministic.  The reconstruction identity holds exactly: end e is
    warp-up on pick p iff threading[e] is in liftplan[p].
    """
    cells = drawdown.cells
    if cells.size == 0:
        raise DomainError("empty drawdown")
    shaft_of: Dict[bytes, int] = {}
    threading = []
    shaft_columns = []
    for e in range(cells.shape[1]):
        key = cells[:, e].tobytes()
        shaft = shaft_of.get(key)
        if shaft is None:
            shaft = len(shaft_of)
            shaft_of[key] = shaft
            shaft_columns.append(cells[:, e])
        threading.append(shaft)
    shaft_count = len(shaft_of)
    if shaft_count > capacity:
        raise CapacityError(shaft_count, capacity)
    columns = np.stack(shaft_columns, axis=1)  # picks x shafts
    liftplan = tuple(
        frozenset(int(s) for s in np.nonzero(columns[p])[0]) for p in range(cells.shape[0])
    )
    return LoomDraft(shaft_count, tuple(threading), liftplan, drawdown)


def render(drawdown: Drawdown, cell_px: int = 1) -> np.ndarray:
    """RGB raster of the drawdown, one palette color per cell.

    Warp-up cells take their column's warp color, weft-up cells their row's
    weft color.  Returns (rows*cell_px, cols*cell_px, 3) uint8.
    """
    if cell_px < 1:
        raise DomainError(f"cell_px must be >= 1, got {cell_px}")
    palette = np.asarray(drawdown.palette, dtype=np.uint8)
    warp = palette[np.asarray(drawdown.warp_colors)]  # cols x 3
    weft = palette[np.asarray(drawdown.weft_colors)]  # rows x 3
    cells = drawdown.cells
    img = np.where(
        cells[:, :, None] == 1,
        np.broadcast_to(warp[None, :, :], cells.shape + (3,)),
        np.broadcast_to(weft[:, None, :], cells.shape + (3,)),
    ).astype(np.uint8)
    return np.repeat(np.repeat(img, cell_px, axis=0), cell_px, axis=1)
