"""Entropy and state-ratio statistics over pattern grids, and the 256-rule sweep.

The symbol entropy of a binary grid is a deterministic function of the
warp/weft ratio h (H = binary_entropy(h/(1+h))), so a block entropy over
horizontal L-cell windows is computed alongside it to keep a notion of
structural complexity that plain state frequencies cannot see.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .automata import Boundary, EvolutionConfig, PatternGrid, _init_rows, rule_from_wolfram_number
from .draft import grid_float_maxima
from .errors import DomainError

DEFAULT_BLOCK_LEN = 2

GENERATED = "generated"
ALL_ROWS = "all"


@dataclass(frozen=True)
class WeavabilityConfig:
    """Acceptance band for the ratio plus the float limit."""

    h_min: float = 0.25
    h_max: float = 4.0
    max_float: int = 5

    def __post_init__(self):
        if not (self.h_min > 0 and self.h_min <= 1.0 <= self.h_max):
            raise DomainError(f"need 0 < h_min <= 1 <= h_max, got [{self.h_min}, {self.h_max}]")
        if self.max_float < 1:
            raise DomainError(f"max_float must be >= 1, got {self.max_float}")

    @classmethod
    def symmetric(cls, h_max: float = 4.0, max_float: int = 5) -> "WeavabilityConfig":
        return cls(h_min=1.0 / h_max, h_max=h_max, max_float=max_float)


@dataclass(frozen=True)
class RuleMetrics:
    rule_id: str
    p: Tuple[float, ...]
    H: float
    h: float  # math.inf when no weft-up cells exist
    H_block: float
    block_len: int
    max_warp_float: int
    max_weft_float: int
    weaveable: bool
    reasons: Tuple[str, ...]


def binary_entropy(p: float) -> float:
    """Entropy in bits of a Bernoulli(p) symbol."""
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p)


def _scope_cells(grid: PatternGrid, scope: str) -> np.ndarray:
    if scope == ALL_ROWS:
        cells = grid.cells
    elif scope == GENERATED:
        cells = grid.generated()
    else:
        raise DomainError(f"unknown scope {scope!r}")
    if cells.size == 0:
        raise DomainError(f"scope {scope!r} selects no cells")
    return cells


def symbol_entropy(grid: PatternGrid, scope: str = GENERATED):
    """Empirical per-state frequencies and their Shannon entropy in bits."""
    cells = _scope_cells(grid, scope)
    counts = np.bincount(cells.ravel(), minlength=grid.k).astype(float)
    freqs = counts / counts.sum()
    nz = freqs[freqs > 0]
    entropy = float(-(nz * np.log2(nz)).sum()) + 0.0  # avoid -0.0
    return freqs, entropy


def state_ratio(grid: PatternGrid, scope: str = GENERATED) -> float:
    """Ratio count(state 1) / count(state 0); math.inf when state 0 is absent."""
    if grid.k != 2:
        raise DomainError("state ratio is defined for binary grids only")
    cells = _scope_cells(grid, scope)
    ones = int(np.count_nonzero(cells))
    zeros = cells.size - ones
    if zeros == 0:
        return math.inf
    return ones / zeros


def block_entropy(grid: PatternGrid, block_len: int, scope: str = GENERATED) -> float:
    """Shannon entropy of horizontal ``block_len``-cell windows (wrapping within rows)."""
    if block_len < 1:
        raise DomainError(f"block length must be >= 1, got {block_len}")
    if block_len > grid.width:
        raise DomainError(f"block length {block_len} exceeds width {grid.width}")
    cells = _scope_cells(grid, scope)
    codes = np.zeros(cells.shape, dtype=np.int64)
    for j in range(block_len):
        codes = codes * grid.k + np.roll(cells, -j, axis=1)
    counts = np.bincount(codes.ravel())
    counts = counts[counts > 0].astype(float)
    probs = counts / counts.sum()
    return float(-(probs * np.log2(probs)).sum()) + 0.0


def evaluate_gate(
    h: float, max_warp_float: int, max_weft_float: int, cfg: WeavabilityConfig
) -> Tuple[bool, Tuple[str, ...]]:
    """Apply the ratio band and float limit; reasons name every violated clause."""
    reasons = []
    if not (cfg.h_min <= h <= cfg.h_max):
        reasons.append("ratio")
    if max_warp_float > cfg.max_float:
        reasons.append("warp-float")
    if max_weft_float > cfg.max_float:
        reasons.append("weft-float")
    return not reasons, tuple(reasons)


def weaveability(metrics: RuleMetrics, cfg: WeavabilityConfig) -> Tuple[bool, Tuple[str, ...]]:
    return evaluate_gate(metrics.h, metrics.max_warp_float, metrics.max_weft_float, cfg)


def compute_metrics(
    grid: PatternGrid,
    cfg: WeavabilityConfig = WeavabilityConfig(),
    block_len: int = DEFAULT_BLOCK_LEN,
    scope: str = GENERATED,
) -> RuleMetrics:
    """Full metric bundle for one binary grid."""
    freqs, entropy = symbol_entropy(grid, scope)
    ratio = state_ratio(grid, scope)
    blocks = block_entropy(grid, min(block_len, grid.width), scope)
    cells = _scope_cells(grid, scope)
    warp_f, weft_f = grid_float_maxima(cells)
    ok, reasons = evaluate_gate(ratio, warp_f, weft_f, cfg)
    return RuleMetrics(
        rule_id=str(grid.meta.get("rule_id", "")),
        p=tuple(float(x) for x in freqs),
        H=entropy,
        h=ratio,
        H_block=blocks,
        block_len=min(block_len, grid.width),
        max_warp_float=warp_f,
        max_weft_float=weft_f,
        weaveable=ok,
        reasons=reasons,
    )


def _sweep_evolve_all(init_row: np.ndarray, steps: int, boundary: Boundary) -> np.ndarray:
    """Evolve all 256 elementary rules at once; returns (256, steps, width)."""
    width = init_row.shape[0]
    tables = np.array(
        [[(n >> v) & 1 for v in range(8)] for n in range(256)], dtype=np.uint8
    )
    state = np.tile(init_row.astype(np.uint8), (256, 1))
    rule_index = np.arange(256)[:, None]
    out = np.empty((256, steps, width), dtype=np.uint8)
    for t in range(steps):
        if boundary.mode == "wrap":
            left = np.roll(state, 1, axis=1)
            right = np.roll(state, -1, axis=1)
        else:
            fill = np.uint8(boundary.state)
            left = np.empty_like(state)
            left[:, 0] = fill
            left[:, 1:] = state[:, :-1]
            right = np.empty_like(state)
            right[:, -1] = fill
            right[:, :-1] = state[:, 1:]
        idx = 4 * left.astype(np.int16) + 2 * state + right
        state = tables[rule_index, idx]
        out[:, t, :] = state
    return out


def sweep_elementary(
    config: EvolutionConfig,
    cfg: WeavabilityConfig = WeavabilityConfig(),
    block_len: int = DEFAULT_BLOCK_LEN,
) -> List[RuleMetrics]:
    """Metrics for every Wolfram rule 0..255, all sharing one seeded init row.

    Metrics are evaluated over generated rows only; output is ordered by rule
    number and deterministic for a fixed seed.
    """
    if config.steps < 1:
        raise DomainError("sweep needs steps >= 1")
    init = _init_rows(rule_from_wolfram_number(0), config)  # k=2, w=1 -> one row
    generated = _sweep_evolve_all(init[-1], config.steps, config.boundary)

    results = []
    for n in range(256):
        cells = generated[n]
        grid = PatternGrid(cells, 2, {"rule_id": str(n), "init_rows": 0})
        results.append(compute_metrics(grid, cfg, block_len, scope=ALL_ROWS))
    return results


def figure2_data(results: List[RuleMetrics]) -> dict:
    """Plot table of (rule, h, H, weaveable) split into log-plottable points and gutters.

    Rules with h = 0 or h = inf cannot sit on a log axis and are listed
    separately.  Plottable rows are sorted by h (rule number breaks ties).
    """
    plottable = []
    gutter = []
    for m in results:
        row = {
            "rule": int(m.rule_id),
            "h": m.h,
            "H": m.H,
            "weaveable": m.weaveable,
        }
        if m.h == 0.0 or math.isinf(m.h):
            gutter.append(row)
        else:
            plottable.append(row)
    plottable.sort(key=lambda r: (r["h"], r["rule"]))
    gutter.sort(key=lambda r: (0 if r["h"] == 0.0 else 1, r["rule"]))
    return {"plottable": plottable, "gutter": gutter}
