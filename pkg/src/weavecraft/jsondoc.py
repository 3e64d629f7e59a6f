"""Versioned pattern-document JSON and the sweep CSV table.

Documents serialize with a fixed field order and run-length encoded cells, so
encoding is canonical: decode(encode(doc)) == doc and re-encoding a decoded
canonical byte string reproduces it exactly.  Infinite ratios serialize as the
string "inf" for JSON portability.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .automata import (
    ELEMENTARY,
    Boundary,
    EvolutionConfig,
    InitSpec,
    PatternGrid,
    RuleSpec,
)
from .errors import ValidationError
from .metrics import RuleMetrics

FORMAT_VERSION = 1

CSV_HEADER = "rule,h,H,H_block,max_warp_float,max_weft_float,weaveable"


@dataclass(frozen=True)
class Colorway:
    palette: tuple
    warp_colors: tuple
    weft_colors: tuple


@dataclass(frozen=True)
class PatternDocument:
    grid: PatternGrid
    rule: Optional[RuleSpec] = None
    config: Optional[EvolutionConfig] = None
    metrics: Optional[RuleMetrics] = None
    colorway: Optional[Colorway] = None

    def __post_init__(self):
        if self.config is not None and self.grid.width != self.config.width:
            raise ValidationError(
                f"grid width {self.grid.width} does not match config width {self.config.width}"
            )


def _rle_encode(cells: np.ndarray) -> List[int]:
    flat = cells.ravel()
    out: List[int] = []
    if flat.size == 0:
        return out
    current = int(flat[0])
    count = 0
    for v in flat:
        if int(v) == current:
            count += 1
        else:
            out.extend((current, count))
            current = int(v)
            count = 1
    out.extend((current, count))
    return out


def _rle_decode(pairs: List[int], rows: int, width: int) -> np.ndarray:
    if len(pairs) % 2:
        raise ValidationError("grid.rle must hold (state, count) pairs")
    flat = np.empty(rows * width, dtype=np.uint8)
    pos = 0
    for i in range(0, len(pairs), 2):
        state, count = pairs[i], pairs[i + 1]
        if count < 1:
            raise ValidationError(f"grid.rle count at pair {i // 2} must be >= 1")
        if pos + count > flat.size:
            raise ValidationError("grid.rle overflows the declared dimensions")
        flat[pos : pos + count] = state
        pos += count
    if pos != flat.size:
        raise ValidationError("grid.rle does not fill the declared dimensions")
    return flat.reshape(rows, width)


def _ratio_to_json(h: float):
    return "inf" if math.isinf(h) else h


def _ratio_from_json(value) -> float:
    if value == "inf":
        return math.inf
    if isinstance(value, (int, float)):
        return float(value)
    raise ValidationError(f"metrics.h must be a number or \"inf\", got {value!r}")


def _check_keys(obj: dict, allowed, path: str):
    for key in obj:
        if key not in allowed:
            raise ValidationError(f"unknown field {path}.{key}")


def _rule_to_json(rule: RuleSpec) -> dict:
    out = {"id": rule.id, "k": rule.k, "r": rule.r, "w": rule.w}
    if (rule.k, rule.r, rule.w) != ELEMENTARY:
        out["table"] = list(rule.table)
    return out


def _rule_from_json(obj: dict) -> RuleSpec:
    _check_keys(obj, {"id", "k", "r", "w", "table"}, "rule")
    rule = RuleSpec.from_id(obj["id"], obj["k"], obj["r"], obj["w"])
    if "table" in obj and list(rule.table) != list(obj["table"]):
        raise ValidationError("rule.table disagrees with rule.id")
    return rule


def _init_to_json(init: InitSpec) -> dict:
    out = {"mode": init.mode}
    if init.mode == "random":
        out["seed"] = init.seed
        out["density"] = init.density
    elif init.mode == "single-center":
        out["state"] = init.state
    else:
        out["rows"] = [list(row) for row in init.rows]
    return out


def _init_from_json(obj: dict) -> InitSpec:
    _check_keys(obj, {"mode", "seed", "density", "state", "rows"}, "config.init")
    mode = obj.get("mode")
    if mode == "random":
        return InitSpec.random(obj["seed"], obj.get("density", 0.5))
    if mode == "single-center":
        return InitSpec.single_center(obj.get("state", 1))
    if mode == "explicit":
        return InitSpec.explicit(obj["rows"])
    raise ValidationError(f"unknown init mode at config.init.mode: {mode!r}")


def _config_to_json(config: EvolutionConfig) -> dict:
    return {
        "width": config.width,
        "steps": config.steps,
        "boundary": str(config.boundary),
        "init": _init_to_json(config.init),
    }


def _config_from_json(obj: dict) -> EvolutionConfig:
    _check_keys(obj, {"width", "steps", "boundary", "init"}, "config")
    return EvolutionConfig(
        width=obj["width"],
        steps=obj["steps"],
        boundary=Boundary.parse(obj["boundary"]),
        init=_init_from_json(obj["init"]),
    )


def metrics_to_json(metrics: RuleMetrics) -> dict:
    return {
        "rule_id": metrics.rule_id,
        "p": list(metrics.p),
        "H": metrics.H,
        "h": _ratio_to_json(metrics.h),
        "H_block": metrics.H_block,
        "block_len": metrics.block_len,
        "max_warp_float": metrics.max_warp_float,
        "max_weft_float": metrics.max_weft_float,
        "weaveable": metrics.weaveable,
        "reasons": list(metrics.reasons),
    }


def metrics_from_json(obj: dict) -> RuleMetrics:
    _check_keys(
        obj,
        {
            "rule_id", "p", "H", "h", "H_block", "block_len",
            "max_warp_float", "max_weft_float", "weaveable", "reasons",
        },
        "metrics",
    )
    return RuleMetrics(
        rule_id=obj["rule_id"],
        p=tuple(obj["p"]),
        H=obj["H"],
        h=_ratio_from_json(obj["h"]),
        H_block=obj["H_block"],
        block_len=obj["block_len"],
        max_warp_float=obj["max_warp_float"],
        max_weft_float=obj["max_weft_float"],
        weaveable=obj["weaveable"],
        reasons=tuple(obj["reasons"]),
    )


def _colorway_to_json(cw: Colorway) -> dict:
    return {
        "palette": [list(c) for c in cw.palette],
        "warp_colors": list(cw.warp_colors),
        "weft_colors": list(cw.weft_colors),
    }


def _colorway_from_json(obj: dict) -> Colorway:
    _check_keys(obj, {"palette", "warp_colors", "weft_colors"}, "colorway")
    return Colorway(
        palette=tuple(tuple(c) for c in obj["palette"]),
        warp_colors=tuple(obj["warp_colors"]),
        weft_colors=tuple(obj["weft_colors"]),
    )


def encode_pattern_json(doc: PatternDocument) -> bytes:
    grid = doc.grid
    body = {
        "format_version": FORMAT_VERSION,
        "rule": _rule_to_json(doc.rule) if doc.rule else None,
        "config": _config_to_json(doc.config) if doc.config else None,
        "grid": {
            "width": grid.width,
            "rows": grid.rows,
            "k": grid.k,
            "init_rows": grid.init_rows,
            "rle": _rle_encode(grid.cells),
        },
        "metrics": metrics_to_json(doc.metrics) if doc.metrics else None,
        "colorway": _colorway_to_json(doc.colorway) if doc.colorway else None,
    }
    return (json.dumps(body, indent=2) + "\n").encode("utf-8")


def decode_pattern_json(data: bytes) -> PatternDocument:
    try:
        body = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ValidationError(f"malformed pattern document: {exc}") from None
    if not isinstance(body, dict):
        raise ValidationError("pattern document must be a JSON object")
    _check_keys(
        body, {"format_version", "rule", "config", "grid", "metrics", "colorway"}, "$"
    )
    version = body.get("format_version")
    if version != FORMAT_VERSION:
        raise ValidationError(f"unsupported format_version {version!r} (expected {FORMAT_VERSION})")
    gobj = body.get("grid")
    if not isinstance(gobj, dict):
        raise ValidationError("missing or malformed field $.grid")
    _check_keys(gobj, {"width", "rows", "k", "init_rows", "rle"}, "grid")

    rule = _rule_from_json(body["rule"]) if body.get("rule") else None
    config = _config_from_json(body["config"]) if body.get("config") else None
    cells = _rle_decode(gobj["rle"], gobj["rows"], gobj["width"])
    meta = {"init_rows": gobj.get("init_rows", 0)}
    if rule is not None:
        meta["rule_id"] = rule.id
    if config is not None:
        meta["seed"] = config.init.seed
        meta["boundary"] = str(config.boundary)
    grid = PatternGrid(cells, gobj["k"], meta)
    metrics = metrics_from_json(body["metrics"]) if body.get("metrics") else None
    colorway = _colorway_from_json(body["colorway"]) if body.get("colorway") else None
    return PatternDocument(grid=grid, rule=rule, config=config, metrics=metrics, colorway=colorway)


def sweep_to_csv(results: List[RuleMetrics]) -> str:
    """Figure-2 table: one row per rule, ratio "inf" when the weft state is absent."""
    lines = [CSV_HEADER]
    for m in results:
        h = "inf" if math.isinf(m.h) else repr(m.h)
        lines.append(
            f"{m.rule_id},{h},{m.H!r},{m.H_block!r},"
            f"{m.max_warp_float},{m.max_weft_float},{str(m.weaveable).lower()}"
        )
    return "\n".join(lines) + "\n"


def sweep_to_json(results: List[RuleMetrics]) -> bytes:
    return (json.dumps([metrics_to_json(m) for m in results], indent=2) + "\n").encode("utf-8")
