"""Generalized weaving automata: rule tables, boundaries, and grid evolution.

A rule consults, for every cell, the ``2r+1`` cells centered on it in each of
the last ``w`` rows (oldest row first).  The concatenated digits form a base-k
word; the rule table maps every possible word to the next state.  With k=2,
r=1, w=1 this is exactly the 256-rule elementary cellular automaton family.

Grid convention: rows are weft picks (time, growing downward), columns are
warp ends (space).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, ValidationError

ELEMENTARY = (2, 1, 1)  # (k, r, w) of the elementary family


@dataclass(frozen=True)
class Boundary:
    """Edge handling for the spatial neighborhood: wrap-around or a fixed state."""

    mode: str  # "wrap" | "fixed"
    state: int = 0

    @classmethod
    def wrap(cls) -> "Boundary":
        return cls("wrap")

    @classmethod
    def fixed(cls, state: int = 0) -> "Boundary":
        return cls("fixed", state)

    @classmethod
    def parse(cls, text: str) -> "Boundary":
        """Parse "wrap", "fixed" or "fixedN" (N a state digit)."""
        if text == "wrap":
            return cls.wrap()
        if text.startswith("fixed"):
            tail = text[5:]
            return cls.fixed(int(tail) if tail else 0)
        raise DomainError(f"unknown boundary {text!r}")

    def __str__(self) -> str:
        return "wrap" if self.mode == "wrap" else f"fixed{self.state}"


@dataclass(frozen=True)
class InitSpec:
    """Initial rows for an evolution.

    ``random`` draws each cell Bernoulli(density) for k=2 (uniform over states
    for k>2) from numpy's default PCG64 generator seeded with ``seed``;
    ``single_center`` is all zeros except the center cell of the newest init
    row; ``explicit`` supplies the rows verbatim.
    """

    mode: str  # "random" | "single-center" | "explicit"
    seed: Optional[int] = None
    density: float = 0.5
    state: int = 1
    rows: Optional[tuple] = None

    @classmethod
    def random(cls, seed: int, density: float = 0.5) -> "InitSpec":
        if not 0.0 <= density <= 1.0:
            raise DomainError(f"density must be in [0, 1], got {density}")
        return cls("random", seed=seed, density=density)

    @classmethod
    def single_center(cls, state: int = 1) -> "InitSpec":
        return cls("single-center", state=state)

    @classmethod
    def explicit(cls, rows: Sequence[Sequence[int]]) -> "InitSpec":
        frozen = tuple(tuple(int(c) for c in row) for row in rows)
        if not frozen:
            raise DomainError("explicit init needs at least one row")
        return cls("explicit", rows=frozen)


@dataclass(frozen=True)
class EvolutionConfig:
    width: int
    steps: int
    boundary: Boundary = field(default_factory=Boundary.wrap)
    init: InitSpec = field(default_factory=lambda: InitSpec.random(0))

    def __post_init__(self):
        if self.width < 1:
            raise DomainError(f"width must be >= 1, got {self.width}")
        if self.steps < 0:
            raise DomainError(f"steps must be >= 0, got {self.steps}")


class RuleSpec:
    """Immutable rule of the weaving automaton.

    ``table[v]`` is the next state for the neighborhood word with base-k value
    ``v`` (digits ordered oldest row first, left to right, most significant
    first; for elementary rules the word (l, c, r) has value 4l+2c+r).
    """

    __slots__ = ("k", "r", "w", "table", "id")

    def __init__(self, k: int, r: int, w: int, table: Sequence[int]):
        if k < 2:
            raise DomainError(f"state count k must be >= 2, got {k}")
        if r < 0:
            raise DomainError(f"radius r must be >= 0, got {r}")
        if w < 1:
            raise DomainError(f"temporal window w must be >= 1, got {w}")
        size = k ** ((2 * r + 1) * w)
        table = tuple(int(x) for x in table)
        if len(table) != size:
            raise ValidationError(
                f"table must have {size} entries for k={k}, r={r}, w={w}; got {len(table)}"
            )
        for i, out in enumerate(table):
            if not 0 <= out < k:
                raise ValidationError(f"table output at index {i} is {out}, not in 0..{k - 1}")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "id", self._encode_id())

    def __setattr__(self, name, value):
        raise AttributeError("RuleSpec is immutable")

    def _encode_id(self) -> str:
        # Big-endian over descending word order == sum(table[v] * k**v).
        number = 0
        for v in reversed(range(len(self.table))):
            number = number * self.k + self.table[v]
        if (self.k, self.r, self.w) == ELEMENTARY:
            return str(number)
        return format(number, "x")

    @classmethod
    def from_id(cls, rule_id: str, k: int = 2, r: int = 1, w: int = 1) -> "RuleSpec":
        """Decode a canonical rule id back into a full spec."""
        base = 10 if (k, r, w) == ELEMENTARY else 16
        try:
            number = int(rule_id, base)
        except ValueError as exc:
            raise ValidationError(f"malformed rule id {rule_id!r}") from exc
        size = k ** ((2 * r + 1) * w)
        if not 0 <= number < k ** size:
            raise ValidationError(f"rule id {rule_id!r} out of range for k={k}, r={r}, w={w}")
        table = []
        for _ in range(size):
            table.append(number % k)
            number //= k
        return cls(k, r, w, table)

    @property
    def neighborhood_size(self) -> int:
        return (2 * self.r + 1) * self.w

    def __eq__(self, other):
        return (
            isinstance(other, RuleSpec)
            and (self.k, self.r, self.w, self.table) == (other.k, other.r, other.w, other.table)
        )

    def __hash__(self):
        return hash((self.k, self.r, self.w, self.table))

    def __repr__(self):
        return f"RuleSpec(k={self.k}, r={self.r}, w={self.w}, id={self.id!r})"


def rule_from_wolfram_number(n: int) -> RuleSpec:
    """Elementary rule from its Wolfram number (neighborhood 111 -> bit 7, ... 000 -> bit 0)."""
    if not 0 <= n <= 255:
        raise DomainError(f"Wolfram number must be in 0..255, got {n}")
    return RuleSpec(2, 1, 1, [(n >> v) & 1 for v in range(8)])


def rule_from_table(k: int, r: int, w: int, table: Sequence[int]) -> RuleSpec:
    """Rule from an explicit table indexed by neighborhood word value."""
    return RuleSpec(k, r, w, table)


def mirror_rule(rule: RuleSpec) -> RuleSpec:
    """Conjugate rule under horizontal reflection: swap entries of spatially reversed words."""
    span = 2 * rule.r + 1
    k = rule.k
    size = len(rule.table)
    table = [0] * size
    for v in range(size):
        # Decode digits, most significant first: w groups of span digits.
        digits = []
        x = v
        for _ in range(rule.neighborhood_size):
            digits.append(x % k)
            x //= k
        digits.reverse()
        mirrored = []
        for g in range(rule.w):
            group = digits[g * span : (g + 1) * span]
            mirrored.extend(reversed(group))
        mv = 0
        for d in mirrored:
            mv = mv * k + d
        table[mv] = rule.table[v]
    return RuleSpec(rule.k, rule.r, rule.w, table)


def complement_rule(rule: RuleSpec) -> RuleSpec:
    """Conjugate rule under statewise complement d -> k-1-d of both word and output."""
    k = rule.k
    size = len(rule.table)
    table = [0] * size
    for v in range(size):
        digits = []
        x = v
        for _ in range(rule.neighborhood_size):
            digits.append(x % k)
            x //= k
        digits.reverse()
        cv = 0
        for d in digits:
            cv = cv * k + (k - 1 - d)
        table[v] = (k - 1) - rule.table[cv]
    return RuleSpec(rule.k, rule.r, rule.w, table)


@dataclass(frozen=True)
class PatternGrid:
    """Immutable rows x cols lattice of cell states."""

    cells: np.ndarray
    k: int
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        cells = np.asarray(self.cells, dtype=np.uint8)
        if cells.ndim != 2:
            raise ValidationError(f"grid must be 2-D, got shape {cells.shape}")
        if cells.shape[1] < 1:
            raise DomainError("grid width must be >= 1")
        if cells.size and int(cells.max()) >= self.k:
            raise ValidationError(f"cell state {int(cells.max())} out of range for k={self.k}")
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)

    @property
    def rows(self) -> int:
        return self.cells.shape[0]

    @property
    def width(self) -> int:
        return self.cells.shape[1]

    @property
    def init_rows(self) -> int:
        return int(self.meta.get("init_rows", 0))

    def generated(self) -> np.ndarray:
        """Rows produced by evolution (initial condition excluded)."""
        return self.cells[self.init_rows :]

    def __eq__(self, other):
        return (
            isinstance(other, PatternGrid)
            and self.k == other.k
            and np.array_equal(self.cells, other.cells)
        )

    def __hash__(self):
        return hash((self.k, self.cells.tobytes()))


def _shifted(row: np.ndarray, offset: int, boundary: Boundary) -> np.ndarray:
    """Array whose cell i holds row[i + offset] under the boundary rule."""
    if offset == 0:
        return row
    if boundary.mode == "wrap":
        return np.roll(row, -offset)
    fill = np.uint8(boundary.state)
    out = np.full_like(row, fill)
    if offset > 0:
        out[:-offset] = row[offset:]
    else:
        out[-offset:] = row[:offset]
    return out


def step(history: np.ndarray, rule: RuleSpec, boundary: Boundary) -> np.ndarray:
    """Advance one row from the last ``w`` rows (oldest first)."""
    history = np.asarray(history, dtype=np.uint8)
    if history.ndim != 2 or history.shape[0] != rule.w:
        raise ValidationError(
            f"history must have exactly {rule.w} rows, got shape {history.shape}"
        )
    table = np.asarray(rule.table, dtype=np.uint8)
    idx = np.zeros(history.shape[1], dtype=np.int64)
    for row in history:
        for offset in range(-rule.r, rule.r + 1):
            idx = idx * rule.k + _shifted(row, offset, boundary)
    return table[idx]


def _init_rows(rule: RuleSpec, config: EvolutionConfig) -> np.ndarray:
    init = config.init
    if init.mode == "random":
        rng = np.random.default_rng(init.seed)
        if rule.k == 2:
            rows = (rng.random((rule.w, config.width)) < init.density).astype(np.uint8)
        else:
            rows = rng.integers(0, rule.k, size=(rule.w, config.width), dtype=np.uint8)
        return rows
    if init.mode == "single-center":
        if not 0 <= init.state < rule.k:
            raise DomainError(f"center state {init.state} out of range for k={rule.k}")
        rows = np.zeros((rule.w, config.width), dtype=np.uint8)
        rows[-1, config.width // 2] = init.state
        return rows
    if init.mode == "explicit":
        rows = np.asarray(init.rows, dtype=np.uint8)
        if rows.ndim != 2 or rows.shape[1] != config.width:
            raise ValidationError(
                f"explicit init rows must be width {config.width}, got shape {rows.shape}"
            )
        if rows.shape[0] < rule.w:
            raise ValidationError(
                f"explicit init must supply at least w={rule.w} rows, got {rows.shape[0]}"
            )
        if rows.size and int(rows.max()) >= rule.k:
            raise ValidationError("explicit init contains a state >= k")
        return rows
    raise DomainError(f"unknown init mode {init.mode!r}")


def evolve(rule: RuleSpec, config: EvolutionConfig) -> PatternGrid:
    """Evolve ``config.steps`` new rows from the configured initial condition.

    Deterministic: identical (rule, config) pairs give bit-identical grids.
    """
    init = _init_rows(rule, config)
    rows = list(init)
    for _ in range(config.steps):
        history = np.asarray(rows[-rule.w :], dtype=np.uint8)
        rows.append(step(history, rule, config.boundary))
    meta = {
        "rule_id": rule.id,
        "seed": config.init.seed,
        "boundary": str(config.boundary),
        "init_rows": init.shape[0],
    }
    return PatternGrid(np.asarray(rows, dtype=np.uint8), rule.k, meta)
