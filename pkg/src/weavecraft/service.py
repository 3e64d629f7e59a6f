"""HTTP JSON API over the core library, with an in-memory design session store.

Sessions hold one pattern document each and mutate under optimistic
concurrency: every change bumps ``revision`` and a PUT may carry an
``If-Match`` header naming the revision it was based on.  All computation is
pure; no response depends on wall-clock time (timestamps are bookkeeping
only).
"""

from __future__ import annotations

import json
import secrets
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request, Response, UploadFile, File, Form
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .automata import evolve
from .draft import drawdown_from_grid, factorize, render
from .errors import CapacityError, DomainError, ParseError, ValidationError, WeavecraftError
from .formats import write_png
from .jsondoc import (
    PatternDocument,
    _colorway_from_json,
    _config_from_json,
    _rule_from_json,
    decode_pattern_json,
    encode_pattern_json,
    metrics_to_json,
    sweep_to_json,
)
from .metrics import (
    DEFAULT_BLOCK_LEN,
    WeavabilityConfig,
    compute_metrics,
    sweep_elementary,
)
from .automata import Boundary, EvolutionConfig, InitSpec
from .raster import RasterConfig, load_image, weavable_rasterize

MAX_IMAGE_BYTES = 4 * 1024 * 1024
MAX_IMAGE_DIM = 4096


@dataclass
class DesignSession:
    id: str
    document: PatternDocument
    revision: int = 1
    created: float = field(default_factory=time.time)
    updated: float = field(default_factory=time.time)


class SessionStore:
    """Thread-safe session map with optional JSON snapshots on disk."""

    def __init__(self, state_dir: Optional[str] = None):
        self._sessions: dict = {}
        self._lock = threading.Lock()
        self._state_dir = Path(state_dir) if state_dir else None
        if self._state_dir:
            self._state_dir.mkdir(parents=True, exist_ok=True)
            self._load_snapshots()

    def _load_snapshots(self):
        for path in sorted(self._state_dir.glob("*.json")):
            blob = json.loads(path.read_text())
            doc = decode_pattern_json(blob["document"].encode("utf-8"))
            session = DesignSession(
                id=blob["id"], document=doc, revision=blob["revision"],
                created=blob["created"], updated=blob["updated"],
            )
            self._sessions[session.id] = session

    def _snapshot(self, session: DesignSession):
        if not self._state_dir:
            return
        blob = {
            "id": session.id,
            "revision": session.revision,
            "created": session.created,
            "updated": session.updated,
            "document": encode_pattern_json(session.document).decode("utf-8"),
        }
        (self._state_dir / f"{session.id}.json").write_text(json.dumps(blob))

    def create(self, document: PatternDocument) -> DesignSession:
        with self._lock:
            session = DesignSession(id=secrets.token_hex(8), document=document)
            self._sessions[session.id] = session
            self._snapshot(session)
            return session

    def get(self, session_id: str) -> DesignSession:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise KeyError(session_id)
        return session

    def update(self, session_id: str, document: PatternDocument,
               if_match: Optional[int]) -> DesignSession:
        with self._lock:
            session = self._sessions.get(session_id)
            if session is None:
                raise KeyError(session_id)
            if if_match is not None and if_match != session.revision:
                raise StaleRevision(session.revision)
            session.document = document
            session.revision += 1
            session.updated = time.time()
            self._snapshot(session)
            return session


class StaleRevision(Exception):
    def __init__(self, current: int):
        super().__init__(f"revision mismatch; current revision is {current}")
        self.current = current


def _document_json(doc: PatternDocument) -> dict:
    return json.loads(encode_pattern_json(doc).decode("utf-8"))


def _session_payload(session: DesignSession) -> dict:
    return {
        "id": session.id,
        "revision": session.revision,
        "document": _document_json(session.document),
    }


def _weav_config(hmax: float, hmin: Optional[float], maxfloat: int) -> WeavabilityConfig:
    return WeavabilityConfig(h_min=hmin if hmin is not None else 1.0 / hmax,
                             h_max=hmax, max_float=maxfloat)


def create_app(state_dir: Optional[str] = None, cors_origin: str = "*") -> FastAPI:
    app = FastAPI(title="weavecraft design service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[cors_origin],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = SessionStore(state_dir)
    app.state.store = store

    @app.exception_handler(ValidationError)
    @app.exception_handler(DomainError)
    @app.exception_handler(ParseError)
    def _bad_request(request: Request, exc: WeavecraftError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.exception_handler(KeyError)
    def _not_found(request: Request, exc: KeyError):
        return JSONResponse(status_code=404, content={"error": f"unknown session {exc.args[0]}"})

    @app.exception_handler(StaleRevision)
    def _conflict(request: Request, exc: StaleRevision):
        return JSONResponse(
            status_code=409, content={"error": str(exc), "revision": exc.current}
        )

    @app.exception_handler(CapacityError)
    def _capacity(request: Request, exc: CapacityError):
        return JSONResponse(
            status_code=409,
            content={"error": str(exc), "required_shafts": exc.required,
                     "capacity": exc.capacity},
        )

    @app.get("/api/rules/elementary")
    def rules_elementary(
        width: int = 101, steps: int = 50, seed: int = 1, density: float = 0.5,
        boundary: str = "wrap", hmax: float = 4.0, hmin: Optional[float] = None,
        maxfloat: int = 5, blocklen: int = DEFAULT_BLOCK_LEN,
    ):
        config = EvolutionConfig(width, steps, Boundary.parse(boundary),
                                 InitSpec.random(seed, density))
        results = sweep_elementary(config, _weav_config(hmax, hmin, maxfloat), blocklen)
        return Response(content=sweep_to_json(results), media_type="application/json")

    def _evolve_document(body: dict) -> PatternDocument:
        for key in body:
            if key not in ("rule", "config", "colorway"):
                raise ValidationError(f"unknown field $.{key}")
        if "rule" not in body or "config" not in body:
            raise ValidationError("body must carry 'rule' and 'config'")
        rule = _rule_from_json(body["rule"])
        config = _config_from_json(body["config"])
        colorway = _colorway_from_json(body["colorway"]) if body.get("colorway") else None
        grid = evolve(rule, config)
        return PatternDocument(grid=grid, rule=rule, config=config, colorway=colorway)

    @app.post("/api/patterns", status_code=201)
    async def create_pattern(request: Request):
        body = await request.json()
        session = store.create(_evolve_document(body))
        return _session_payload(session)

    @app.get("/api/patterns/{session_id}")
    def get_pattern(session_id: str):
        return _session_payload(store.get(session_id))

    @app.put("/api/patterns/{session_id}")
    async def put_pattern(session_id: str, request: Request):
        body = await request.json()
        current = store.get(session_id)
        if_match = request.headers.get("If-Match")
        merged = {
            "rule": body.get("rule", _document_json(current.document)["rule"]),
            "config": body.get("config", _document_json(current.document)["config"]),
        }
        if "colorway" in body:
            merged["colorway"] = body["colorway"]
        elif current.document.colorway is not None:
            from .jsondoc import _colorway_to_json

            merged["colorway"] = _colorway_to_json(current.document.colorway)
        doc = _evolve_document({k: v for k, v in merged.items() if v is not None})
        session = store.update(session_id, doc, int(if_match) if if_match else None)
        return _session_payload(session)

    @app.post("/api/raster", status_code=201)
    async def raster(
        image: UploadFile = File(...),
        method: str = Form("error-diffusion"),
        width: int = Form(...),
        height: int = Form(...),
        threshold: float = Form(0.5),
        polarity: str = Form("dark"),
        repair: bool = Form(False),
        hmax: float = Form(4.0),
        maxfloat: int = Form(5),
    ):
        data = await image.read()
        if len(data) > MAX_IMAGE_BYTES:
            return JSONResponse(status_code=413, content={"error": "image exceeds 4 MiB"})
        if width > MAX_IMAGE_DIM or height > MAX_IMAGE_DIM:
            return JSONResponse(status_code=413, content={"error": "target dims exceed 4096"})
        matrix = load_image(data)
        if matrix.shape[0] > MAX_IMAGE_DIM or matrix.shape[1] > MAX_IMAGE_DIM:
            return JSONResponse(status_code=413, content={"error": "image dims exceed 4096"})
        config = RasterConfig(width, height, method, threshold, polarity=polarity)
        cfg = _weav_config(hmax, None, maxfloat)
        result = weavable_rasterize(matrix, config, cfg, repair=repair)
        m = compute_metrics(result.grid, cfg, scope="all")
        doc = PatternDocument(grid=result.grid, metrics=m)
        session = store.create(doc)
        payload = _session_payload(session)
        payload["float_report"] = {
            "max_warp_float": result.report.max_warp_float,
            "max_weft_float": result.report.max_weft_float,
        }
        payload["weaveable"] = result.weaveable
        payload["reasons"] = list(result.reasons)
        payload["flipped"] = [list(cell) for cell in result.flipped]
        return payload

    def _drawdown(doc: PatternDocument):
        if doc.colorway is not None:
            cw = doc.colorway
            return drawdown_from_grid(doc.grid, cw.warp_colors, cw.weft_colors, cw.palette)
        return drawdown_from_grid(doc.grid)

    @app.get("/api/patterns/{session_id}/render.png")
    def render_png(session_id: str, cellpx: int = 8):
        session = store.get(session_id)
        img = render(_drawdown(session.document), cellpx)
        return Response(content=write_png(img), media_type="image/png")

    @app.get("/api/patterns/{session_id}/draft.wif")
    def draft_wif(session_id: str, capacity: int = 32):
        from .wif import export_wif

        session = store.get(session_id)
        loom = factorize(_drawdown(session.document), capacity)
        return Response(
            content=export_wif(loom),
            media_type="text/plain",
            headers={"Content-Disposition": f'attachment; filename="{session_id}.wif"'},
        )

    @app.get("/api/patterns/{session_id}/metrics")
    def pattern_metrics(
        session_id: str, hmax: float = 4.0, hmin: Optional[float] = None, maxfloat: int = 5,
        blocklen: int = DEFAULT_BLOCK_LEN, scope: str = "generated",
    ):
        session = store.get(session_id)
        grid = session.document.grid
        if grid.init_rows >= grid.rows:
            scope = "all"
        m = compute_metrics(grid, _weav_config(hmax, hmin, maxfloat), blocklen, scope)
        return metrics_to_json(m)

    return app
