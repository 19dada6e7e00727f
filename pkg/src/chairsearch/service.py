"""HTTP/JSON face of the engine for the browser UI and scripts.

One engine instance serves many sessions; requests for the same session
are serialized with a per-session lock, while distinct sessions proceed in
parallel over the immutable manifest and index.  Every session appends its
events to one JSONL file under the log directory.  The JSON field names
and error codes are frozen in docs/api.md.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import __version__
from .dataset import DatasetManifest, load_manifest
from .dictionary import Dictionary, default_dictionary
from .errors import ChairSearchError, InvalidInputError, NotFoundError
from .index import SearchIndex, build_index
from .palette import ColorId, PartKind
from .query import NGRAM_SIZES
from .session import (
    DEFAULT_BUDGET_S,
    Mode,
    Phase,
    Session,
    SessionEngine,
    stroke_from_payload,
)
from .sketch import N_VIEWS, Sketch, VIEW_CAMERAS, rasterize, snapshot_png

_HTTP_STATUS = {
    "invalid_input": 400,
    "not_found": 404,
    "mode_violation": 409,
    "query_in_flight": 409,
    "budget_exceeded": 409,
    "no_pending_selection": 409,
    "session_terminal": 409,
    "checksum_mismatch": 500,
    "version_mismatch": 500,
    "empty_index": 500,
    "dimension_mismatch": 500,
}


@dataclass
class ServiceConfig:
    manifest_path: str
    host: str = "127.0.0.1"
    port: int = 8008
    log_dir: str = "logs"
    static_dir: str | None = None
    budget_s: float = DEFAULT_BUDGET_S
    dictionary_path: str | None = None

    def __post_init__(self) -> None:
        if self.budget_s <= 0:
            raise InvalidInputError("budget must be positive")
        if not Path(self.manifest_path).exists():
            raise InvalidInputError(f"manifest path {self.manifest_path!r} does not exist")
        if self.dictionary_path is not None and not Path(self.dictionary_path).exists():
            raise InvalidInputError(f"dictionary path {self.dictionary_path!r} does not exist")
        if self.static_dir is not None and not Path(self.static_dir).is_dir():
            raise InvalidInputError(f"static dir {self.static_dir!r} does not exist")


@dataclass
class _SessionSlot:
    session: Session
    lock: threading.Lock = field(default_factory=threading.Lock)
    log_degraded: bool = False


class SessionLogWriter:
    """Append-only per-session JSONL files; IO failures degrade, not crash."""

    def __init__(self, log_dir: Path) -> None:
        self.log_dir = log_dir
        self.log_dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._degraded: set[str] = set()

    def append(self, event: dict) -> None:
        session_id = event["session_id"]
        line = json.dumps(event, sort_keys=True, separators=(",", ":")) + "\n"
        with self._lock:
            try:
                with open(self.log_dir / f"{session_id}.jsonl", "a", encoding="utf-8") as fh:
                    fh.write(line)
                    fh.flush()
            except OSError:
                self._degraded.add(session_id)

    def is_degraded(self, session_id: str) -> bool:
        return session_id in self._degraded


def _error_response(exc: ChairSearchError) -> JSONResponse:
    return JSONResponse(
        status_code=_HTTP_STATUS.get(exc.code, 500),
        content={"error": {"code": exc.code, "message": str(exc)}},
    )


def create_app(manifest: DatasetManifest, dictionary: Dictionary,
               index: SearchIndex, config: ServiceConfig | None = None) -> FastAPI:
    app = FastAPI(title="chairsearch", version=__version__)
    log_writer = SessionLogWriter(Path(config.log_dir)) if config else None
    engine = SessionEngine(manifest, dictionary, index,
                           event_sink=log_writer.append if log_writer else None)
    slots: dict[str, _SessionSlot] = {}
    slots_lock = threading.Lock()
    png_cache: dict[tuple[int, int], bytes] = {}
    png_lock = threading.Lock()
    budget_default = config.budget_s if config else DEFAULT_BUDGET_S

    @app.exception_handler(ChairSearchError)
    async def _chairsearch_error(_req: Request, exc: ChairSearchError):
        return _error_response(exc)

    def _slot(session_id: str) -> _SessionSlot:
        with slots_lock:
            slot = slots.get(session_id)
        if slot is None:
            raise NotFoundError(f"unknown session {session_id!r}")
        return slot

    def _snapshot_urls(chair_id: int) -> list[str]:
        return [f"/api/chairs/{chair_id}/snapshots/{v}" for v in range(N_VIEWS)]

    def _state_doc(slot: _SessionSlot) -> dict:
        session = slot.session
        pending = session.pending_record()
        results = None
        for record in reversed(session.log):
            if record.results is not None and record.phase in (Phase.SELECTION, Phase.COMPLETED):
                results = record.results
                break
        return {
            "session_id": session.session_id,
            "state": session.state.value,
            "mode": session.mode.value,
            "n_gram": session.n_gram,
            "target_id": session.target_id,
            "target_snapshot_urls": _snapshot_urls(session.target_id),
            "current_chair_id": session.current_id,
            "current_snapshot_urls": (
                _snapshot_urls(session.current_id) if session.current_id >= 0
                else [f"/api/placeholder/snapshots/{v}" for v in range(N_VIEWS)]),
            "remaining_budget_s": session.remaining(),
            "in_flight": pending is not None,
            "query_count": len([r for r in session.log if r.phase == Phase.COMPLETED]),
            "results": [
                {"chair_id": cid, "distance": dist, "snapshot_urls": _snapshot_urls(cid)}
                for cid, dist in results.entries
            ] if results is not None else [],
            "descriptor": {
                "part_colors": {
                    part.label: (int(color) if color is not None else None)
                    for part in PartKind
                    for color in [session.descriptor.part_color(part)]
                },
                "levels": [int(v) for v in session.descriptor.levels],
            },
            "log_degraded": slot.log_degraded or (
                log_writer.is_degraded(session.session_id) if log_writer else False),
        }

    # -- session lifecycle ---------------------------------------------------

    @app.post("/api/sessions", status_code=201)
    async def create_session(body: dict):
        mode_raw = body.get("mode", Mode.HYBRID.value)
        try:
            mode = Mode(mode_raw)
        except ValueError:
            raise InvalidInputError(f"unknown mode {mode_raw!r}") from None
        n_gram = int(body.get("n_gram", 6))
        if body.get("random_target"):
            seed = body.get("seed")
            rng = np.random.default_rng(seed if seed is not None else None)
            target_id = int(manifest.instances[int(rng.integers(manifest.instance_count))].chair_id)
        else:
            if "target_id" not in body:
                raise InvalidInputError("provide target_id or random_target=true")
            target_id = int(body["target_id"])
        budget = float(body.get("budget_s", budget_default))
        session = engine.begin_session(target_id, mode, n_gram=n_gram, budget_s=budget)
        slot = _SessionSlot(session=session)
        with slots_lock:
            slots[session.session_id] = slot
        return _state_doc(slot)

    @app.get("/api/sessions/{session_id}/state")
    async def get_state(session_id: str):
        return _state_doc(_slot(session_id))

    @app.post("/api/sessions/{session_id}/queries/voice")
    async def voice_query(session_id: str, body: dict):
        slot = _slot(session_id)
        text = body.get("text")
        if not isinstance(text, str):
            raise InvalidInputError("body must carry a text field")
        with slot.lock:
            engine.submit_voice(slot.session, text)
            return _state_doc(slot)

    @app.post("/api/sessions/{session_id}/queries/sketch")
    async def sketch_query(session_id: str, body: dict):
        slot = _slot(session_id)
        strokes_doc = body.get("strokes")
        if not isinstance(strokes_doc, list):
            raise InvalidInputError("body must carry a strokes list")
        try:
            strokes = tuple(stroke_from_payload(sp) for sp in strokes_doc)
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInputError(f"malformed stroke: {exc}") from None
        sketch = Sketch(strokes)
        include = bool(body.get("include_current_model", False))
        with slot.lock:
            engine.submit_sketch(slot.session, sketch, include)
            return _state_doc(slot)

    @app.post("/api/sessions/{session_id}/select")
    async def select(session_id: str, body: dict):
        slot = _slot(session_id)
        if "rank" not in body:
            raise InvalidInputError("body must carry a rank field")
        with slot.lock:
            engine.select(slot.session, int(body["rank"]))
            return _state_doc(slot)

    @app.get("/api/sessions/{session_id}/outcome")
    async def outcome(session_id: str):
        slot = _slot(session_id)
        with slot.lock:
            out = engine.score(slot.session)
        return {
            "exact_success": out.exact_success,
            "shape_success": out.shape_success,
            "elapsed_s": out.elapsed_s,
            "query_count": out.query_count,
            "queries_by_modality": out.queries_by_modality,
            "state": out.state,
        }

    # -- experimenter console (manual descriptor control) ----------------------

    @app.post("/api/sessions/{session_id}/experimenter/delta")
    async def experimenter_delta(session_id: str, body: dict):
        slot = _slot(session_id)
        with slot.lock:
            session = slot.session
            vec = session.descriptor
            for concept_id, delta in (body.get("concepts") or {}).items():
                cid = int(concept_id)
                if not 0 <= cid < dictionary.n_concepts:
                    raise InvalidInputError(f"concept id {cid} out of range")
                vec.bump(cid, int(delta))
            for part_label, color_code in (body.get("part_colors") or {}).items():
                part = PartKind.from_label(part_label)
                if color_code is None:
                    vec.clear_part(part)
                else:
                    vec.set_part_color(part, ColorId(int(color_code)))
            if body.get("submit"):
                engine.submit_descriptor(session, vec)
            return _state_doc(slot)

    @app.post("/api/sessions/{session_id}/experimenter/reset")
    async def experimenter_reset(session_id: str):
        slot = _slot(session_id)
        with slot.lock:
            slot.session.descriptor = engine.sync_vector(engine.placeholder_instance.chair_id)
            return _state_doc(slot)

    @app.post("/api/sessions/{session_id}/experimenter/sync")
    async def experimenter_sync(session_id: str):
        slot = _slot(session_id)
        with slot.lock:
            slot.session.descriptor = engine.sync_vector(slot.session.current_id)
            return _state_doc(slot)

    # -- chair imagery and dictionary ------------------------------------------

    def _render_chair_png(chair_id: int, view: int) -> bytes:
        key = (chair_id, view)
        with png_lock:
            cached = png_cache.get(key)
        if cached is not None:
            return cached
        model = engine.chair_model(chair_id)
        snapshot = rasterize(VIEW_CAMERAS[view], Sketch(), model)
        data = snapshot_png(snapshot)
        with png_lock:
            png_cache[key] = data
        return data

    @app.get("/api/chairs/{chair_id}/snapshots/{view}")
    async def chair_snapshot(chair_id: int, view: int):
        if not 0 <= view < N_VIEWS:
            raise InvalidInputError(f"view index must be 0..{N_VIEWS - 1}")
        manifest.instance_by_id(chair_id)  # 404 on unknown chairs
        return Response(content=_render_chair_png(chair_id, view), media_type="image/png")

    @app.get("/api/placeholder/snapshots/{view}")
    async def placeholder_snapshot(view: int):
        if not 0 <= view < N_VIEWS:
            raise InvalidInputError(f"view index must be 0..{N_VIEWS - 1}")
        return Response(
            content=_render_chair_png(engine.placeholder_instance.chair_id, view),
            media_type="image/png")

    @app.get("/api/dictionary")
    async def get_dictionary():
        doc = dictionary.to_document()
        doc["checksum"] = dictionary.checksum
        doc["n_gram_sizes"] = list(NGRAM_SIZES)
        return doc

    @app.get("/api/health")
    async def health():
        return {"status": "ok", "instances": manifest.instance_count,
                "sessions": len(slots)}

    if config and config.static_dir:
        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="ui")

    return app


def load_service(config: ServiceConfig) -> FastAPI:
    manifest = load_manifest(config.manifest_path)
    dictionary = (Dictionary.load(config.dictionary_path)
                  if config.dictionary_path else default_dictionary())
    index = build_index(manifest, dictionary)
    return create_app(manifest, dictionary, index, config)


def serve(config: ServiceConfig) -> None:
    import uvicorn

    app = load_service(config)
    uvicorn.run(app, host=config.host, port=config.port)
