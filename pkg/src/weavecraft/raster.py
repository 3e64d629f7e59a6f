"""Image-to-weave rasterization: luminance, resampling, quantization, float repair."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .automata import PatternGrid
from .draft import drawdown_from_grid, float_report, grid_float_maxima, FloatReport
from .errors import DomainError, RepairError
from .formats import decode_image, to_luminance
from .metrics import WeavabilityConfig, evaluate_gate, state_ratio

METHODS = ("fixed-threshold", "otsu", "ordered-dither", "error-diffusion")

# Floyd-Steinberg error weights: right, below-left, below, below-right.
_FS_KERNEL = ((0, 1, 7 / 16), (1, -1, 3 / 16), (1, 0, 5 / 16), (1, 1, 1 / 16))


@dataclass(frozen=True)
class RasterConfig:
    target_width: int
    target_height: int
    method: str = "error-diffusion"
    threshold: float = 0.5
    matrix_size: int = 4
    polarity: str = "dark"  # which luminance extreme becomes warp-up
    palette_size: int = 2

    def __post_init__(self):
        if self.target_width < 1 or self.target_height < 1:
            raise DomainError("target dimensions must be >= 1")
        if self.method not in METHODS:
            raise DomainError(f"unknown raster method {self.method!r}")
        if not 0.0 <= self.threshold <= 1.0:
            raise DomainError(f"threshold must be in [0, 1], got {self.threshold}")
        if self.polarity not in ("dark", "light"):
            raise DomainError(f"polarity must be 'dark' or 'light', got {self.polarity!r}")
        if self.palette_size < 2:
            raise DomainError("palette_size must be >= 2")
        if self.matrix_size < 2 or self.matrix_size & (self.matrix_size - 1):
            raise DomainError("dither matrix size must be a power of two >= 2")


def load_image(data: bytes) -> np.ndarray:
    """Decode PGM/PPM/PNG bytes into a [0, 1] luminance matrix."""
    return to_luminance(decode_image(data))


def _overlap_matrix(n_out: int, n_in: int) -> np.ndarray:
    """Row-stochastic box-filter weights mapping n_in samples to n_out."""
    weights = np.zeros((n_out, n_in))
    scale = n_in / n_out
    for i in range(n_out):
        lo = i * scale
        hi = (i + 1) * scale
        j0 = int(np.floor(lo))
        j1 = min(int(np.ceil(hi)), n_in)
        for j in range(j0, j1):
            weights[i, j] = min(hi, j + 1) - max(lo, j)
    weights /= weights.sum(axis=1, keepdims=True)
    return weights


def resample(matrix: np.ndarray, target_height: int, target_width: int) -> np.ndarray:
    """Area-weighted box-filter resample; constant images stay constant."""
    if target_height < 1 or target_width < 1:
        raise DomainError("target dimensions must be >= 1")
    matrix = np.asarray(matrix, dtype=np.float64)
    h, w = matrix.shape
    if (h, w) == (target_height, target_width):
        return matrix.copy()
    rows = _overlap_matrix(target_height, h)
    cols = _overlap_matrix(target_width, w)
    return rows @ matrix @ cols.T


def otsu_threshold(matrix: np.ndarray, bins: int = 256) -> float:
    """Threshold in [0, 1] maximizing between-class variance."""
    values = np.clip(np.asarray(matrix, dtype=np.float64).ravel(), 0.0, 1.0)
    hist, edges = np.histogram(values, bins=bins, range=(0.0, 1.0))
    total = hist.sum()
    if total == 0:
        return 0.5
    probs = hist / total
    centers = (edges[:-1] + edges[1:]) / 2
    w0 = np.cumsum(probs)
    mu = np.cumsum(probs * centers)
    mu_total = mu[-1]
    w1 = 1.0 - w0
    with np.errstate(divide="ignore", invalid="ignore"):
        between = (mu_total * w0 - mu) ** 2 / (w0 * w1)
    between[~np.isfinite(between)] = -1.0
    best = int(np.argmax(between))
    return float(edges[best + 1])


def bayer_matrix(size: int) -> np.ndarray:
    """Classic recursive Bayer ordered-dither matrix of the given power-of-two size."""
    m = np.array([[0, 2], [3, 1]], dtype=np.int64)
    while m.shape[0] < size:
        n = m.shape[0]
        m = np.block([[4 * m, 4 * m + 2], [4 * m + 3, 4 * m + 1]])
    return m


def _error_diffusion(lum: np.ndarray, levels: int) -> np.ndarray:
    """Floyd-Steinberg diffusion, left-to-right then top-to-bottom scan."""
    img = lum.astype(np.float64).copy()
    h, w = img.shape
    step = 1.0 / (levels - 1)
    out = np.zeros((h, w), dtype=np.uint8)
    for y in range(h):
        for x in range(w):
            old = img[y, x]
            q = int(round(min(max(old, 0.0), 1.0) / step))
            q = min(max(q, 0), levels - 1)
            out[y, x] = q
            err = old - q * step
            for dy, dx, wgt in _FS_KERNEL:
                ny, nx = y + dy, x + dx
                if 0 <= ny < h and 0 <= nx < w:
                    img[ny, nx] += err * wgt
    return out


def rasterize(matrix: np.ndarray, config: RasterConfig) -> PatternGrid:
    """Quantize a luminance matrix into a k-state grid at the target dimensions."""
    lum = resample(matrix, config.target_height, config.target_width)
    k = config.palette_size

    if k > 2:
        # Uniform quantization into k luminance bands, band 0 darkest.
        bands = np.clip((lum * k).astype(np.int64), 0, k - 1)
        light_level = bands.astype(np.uint8)
        levels = k
    elif config.method == "error-diffusion":
        light_level = _error_diffusion(lum, 2)
        levels = 2
    elif config.method == "ordered-dither":
        n = config.matrix_size
        thresholds = (bayer_matrix(n) + 0.5) / (n * n)
        tiled = np.tile(
            thresholds,
            (-(-lum.shape[0] // n), -(-lum.shape[1] // n)),
        )[: lum.shape[0], : lum.shape[1]]
        light_level = (lum > tiled).astype(np.uint8)
        levels = 2
    else:
        t = otsu_threshold(lum) if config.method == "otsu" else config.threshold
        light_level = (lum >= t).astype(np.uint8)
        levels = 2

    # light_level counts up from dark; dark polarity flips so the dark
    # extreme lands on the warp-up end of the state range.
    if config.polarity == "dark":
        states = (levels - 1) - light_level
    else:
        states = light_level
    meta = {"source": "raster", "method": config.method, "init_rows": 0}
    return PatternGrid(states.astype(np.uint8), levels, meta)


def _run_through(cells: np.ndarray, r: int, c: int, state: int, vertical: bool) -> int:
    """Length of the same-state run through (r, c) assuming cells[r, c] == state."""
    if vertical:
        line = cells[:, c]
        pos = r
    else:
        line = cells[r, :]
        pos = c
    length = 1
    i = pos - 1
    while i >= 0 and line[i] == state:
        length += 1
        i -= 1
    i = pos + 1
    while i < len(line) and line[i] == state:
        length += 1
        i += 1
    return length


def _overlong_runs(line: np.ndarray, state: int, max_float: int):
    """(start, length) of maximal ``state`` runs longer than max_float."""
    run = 0
    for i, cell in enumerate(line):
        if cell == state:
            run += 1
        else:
            if run > max_float:
                yield i - run, run
            run = 0
    if run > max_float:
        yield len(line) - run, run


def _pick_flip(cells: np.ndarray, r0: int, c0: int, length: int, max_float: int, horizontal: bool):
    """Cell to flip inside an over-long run: centermost position whose flip
    does not create a perpendicular over-long run, else the center."""
    center = length // 2
    order = [center]
    for d in range(1, length):
        if center - d >= 0:
            order.append(center - d)
        if center + d < length:
            order.append(center + d)
    new_state = 1 - int(cells[r0, c0])
    for off in order:
        r, c = (r0, c0 + off) if horizontal else (r0 + off, c0)
        cells[r, c] = new_state
        perp = _run_through(cells, r, c, new_state, vertical=horizontal)
        cells[r, c] = 1 - new_state
        if perp <= max_float:
            return r, c
    return (r0, c0 + center) if horizontal else (r0 + center, c0)


def repair_floats(cells: np.ndarray, max_float: int) -> Tuple[np.ndarray, Tuple[Tuple[int, int], ...]]:
    """Insert stitch points until no weft (horizontal 0) or warp (vertical 1)
    run exceeds max_float.  Bounded by width*height passes."""
    cells = np.array(cells, dtype=np.uint8)
    flipped = []
    bound = cells.size
    for _ in range(bound):
        changed = False
        for r in range(cells.shape[0]):
            for start, length in list(_overlong_runs(cells[r, :], 0, max_float)):
                fr, fc = _pick_flip(cells, r, start, length, max_float, horizontal=True)
                cells[fr, fc] = 1
                flipped.append((fr, fc))
                changed = True
        for c in range(cells.shape[1]):
            for start, length in list(_overlong_runs(cells[:, c], 1, max_float)):
                fr, fc = _pick_flip(cells, start, c, length, max_float, horizontal=False)
                cells[fr, fc] = 0
                flipped.append((fr, fc))
                changed = True
        if not changed:
            return cells, tuple(flipped)
    warp_f, weft_f = grid_float_maxima(cells)
    if warp_f <= max_float and weft_f <= max_float:
        return cells, tuple(flipped)
    raise RepairError(f"float repair did not converge within {bound} passes")


@dataclass(frozen=True)
class RasterResult:
    grid: PatternGrid
    report: FloatReport
    weaveable: bool
    reasons: Tuple[str, ...]
    flipped: Tuple[Tuple[int, int], ...] = ()


def weavable_rasterize(
    matrix: np.ndarray,
    config: RasterConfig,
    cfg: WeavabilityConfig = WeavabilityConfig(),
    repair: bool = False,
) -> RasterResult:
    """Rasterize, check the structural gate, optionally stitch over-long floats."""
    grid = rasterize(matrix, config)
    if grid.k != 2:
        raise DomainError("weavability checks need a binary grid (palette_size 2)")
    flipped: Tuple[Tuple[int, int], ...] = ()
    if repair:
        repaired, flipped = repair_floats(grid.cells, cfg.max_float)
        if flipped:
            grid = PatternGrid(repaired, 2, dict(grid.meta))
    report = float_report(drawdown_from_grid(grid))
    ratio = state_ratio(grid, scope="all")
    ok, reasons = evaluate_gate(ratio, report.max_warp_float, report.max_weft_float, cfg)
    return RasterResult(grid, report, ok, reasons, flipped)
