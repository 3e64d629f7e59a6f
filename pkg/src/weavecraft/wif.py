"""WIF 1.1 export and (subset) import for liftplan drafts.

Written files use LF line endings and 1-based indices throughout; the reader
is CRLF-agnostic, case-insensitive on section names and keys, skips ';' / '#'
comment lines, and ignores sections it does not know about.
"""

from __future__ import annotations

from typing import Dict, List, Tuple

import numpy as np

from .automata import PatternGrid
from .draft import Drawdown, LoomDraft, drawdown_from_grid
from .errors import ParseError, ValidationError

_MANDATORY = ("WEAVING", "WARP", "WEFT", "THREADING", "LIFTPLAN")


def export_wif(draft: LoomDraft) -> bytes:
    dd = draft.drawdown
    ends = len(draft.threading)
    picks = len(draft.liftplan)
    lines: List[str] = []
    lines += [
        "[WIF]",
        "Version=1.1",
        "Developers=wif@mhsoft.com",
        "Source Program=weavecraft",
        "",
        "[CONTENTS]",
        "WEAVING=true",
        "WARP=true",
        "WEFT=true",
        "THREADING=true",
        "LIFTPLAN=true",
        "COLOR PALETTE=true",
        "COLOR TABLE=true",
        "WARP COLORS=true",
        "WEFT COLORS=true",
        "",
        "[WEAVING]",
        f"Shafts={draft.shaft_count}",
        "Treadles=0",
        "Rising Shed=true",
        "",
        "[WARP]",
        f"Threads={ends}",
        "",
        "[WEFT]",
        f"Threads={picks}",
        "",
        "[THREADING]",
    ]
    lines += [f"{e + 1}={shaft + 1}" for e, shaft in enumerate(draft.threading)]
    lines += ["", "[LIFTPLAN]"]
    for p, lifted in enumerate(draft.liftplan):
        shafts = ",".join(str(s + 1) for s in sorted(lifted))
        lines.append(f"{p + 1}={shafts}")
    lines += [
        "",
        "[COLOR PALETTE]",
        f"Entries={len(dd.palette)}",
        "Range=0,255",
        "",
        "[COLOR TABLE]",
    ]
    lines += [f"{i + 1}={r},{g},{b}" for i, (r, g, b) in enumerate(dd.palette)]
    lines += ["", "[WARP COLORS]"]
    lines += [f"{e + 1}={c + 1}" for e, c in enumerate(dd.warp_colors)]
    lines += ["", "[WEFT COLORS]"]
    lines += [f"{p + 1}={c + 1}" for p, c in enumerate(dd.weft_colors)]
    lines.append("")
    return "\n".join(lines).encode("ascii")


def _split_sections(text: str) -> Dict[str, Dict[str, str]]:
    sections: Dict[str, Dict[str, str]] = {}
    current = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line[0] in ";#":
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip().upper()
            sections.setdefault(current, {})
            continue
        if current is None or "=" not in line:
            continue
        key, value = line.split("=", 1)
        sections[current][key.strip().upper()] = value.strip()
    return sections


def _indexed_values(section: Dict[str, str], count: int, name: str) -> List[str]:
    out = []
    for i in range(1, count + 1):
        if str(i) not in section:
            raise ParseError(f"[{name}] missing entry {i}")
        out.append(section[str(i)])
    return out


def parse_wif(data: bytes) -> LoomDraft:
    """Rebuild a liftplan draft from WIF text we (or a compatible tool) emitted."""
    text = data.decode("utf-8", errors="replace")
    sections = _split_sections(text)
    for name in _MANDATORY:
        if name not in sections:
            raise ParseError(f"WIF missing mandatory section [{name}]")

    weaving = sections["WEAVING"]
    if "SHAFTS" not in weaving:
        raise ParseError("[WEAVING] missing Shafts")
    shafts = int(weaving["SHAFTS"])
    ends = int(sections["WARP"].get("THREADS", len(sections["THREADING"])))
    picks = int(sections["WEFT"].get("THREADS", len(sections["LIFTPLAN"])))

    threading = []
    for value in _indexed_values(sections["THREADING"], ends, "THREADING"):
        shaft = int(value) - 1
        if not 0 <= shaft < shafts:
            raise ValidationError(f"threading references shaft {shaft + 1} > Shafts={shafts}")
        threading.append(shaft)

    liftplan = []
    for value in _indexed_values(sections["LIFTPLAN"], picks, "LIFTPLAN"):
        lifted = set()
        for part in value.split(","):
            part = part.strip()
            if not part:
                continue
            shaft = int(part) - 1
            if not 0 <= shaft < shafts:
                raise ValidationError(f"liftplan references shaft {shaft + 1} > Shafts={shafts}")
            lifted.add(shaft)
        liftplan.append(frozenset(lifted))

    palette: Tuple[Tuple[int, int, int], ...]
    if "COLOR TABLE" in sections:
        entries = int(sections.get("COLOR PALETTE", {}).get("ENTRIES", len(sections["COLOR TABLE"])))
        rows = _indexed_values(sections["COLOR TABLE"], entries, "COLOR TABLE")
        palette = tuple(tuple(int(v) for v in row.split(",")) for row in rows)
    else:
        palette = ((255, 255, 255), (0, 0, 0))

    if "WARP COLORS" in sections:
        warp_colors = tuple(
            int(v) - 1 for v in _indexed_values(sections["WARP COLORS"], ends, "WARP COLORS")
        )
    else:
        warp_colors = (min(1, len(palette) - 1),) * ends
    if "WEFT COLORS" in sections:
        weft_colors = tuple(
            int(v) - 1 for v in _indexed_values(sections["WEFT COLORS"], picks, "WEFT COLORS")
        )
    else:
        weft_colors = (0,) * picks

    cells = np.zeros((picks, ends), dtype=np.uint8)
    for p, lifted in enumerate(liftplan):
        for e, shaft in enumerate(threading):
            if shaft in lifted:
                cells[p, e] = 1
    grid = PatternGrid(cells, 2, {"init_rows": 0})
    drawdown = drawdown_from_grid(grid, warp_colors, weft_colors, palette)
    return LoomDraft(shafts, tuple(threading), tuple(liftplan), drawdown)
