"""Interactive retrieval sessions: modality modes, the three-stage query
protocol, selection chaining and the 90 second budget.

A query is well formed only if it passes input, processing and selection;
submitting while another query awaits selection is rejected and logged.
Selecting a result makes that chair the current one and re-synchronizes
the running attribute vector to it, so consecutive queries never lose
state.  Time comes from an injected clock; once it passes the budget the
session is timed out and refuses every further state change.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

from .dataset import (
    ChairInstance,
    DatasetManifest,
    attribute_vector_for,
    make_placeholder,
    semantic_vector,
)
from .dictionary import Dictionary
from .errors import (
    BudgetExceededError,
    InvalidInputError,
    ModeViolationError,
    NotFoundError,
    QueryInFlightError,
    SelectionStateError,
    SessionTerminalError,
)
from .index import ResultSet, SearchIndex, knn_semantic, knn_visual
from .palette import ColorId
from .query import MAX_UTTERANCE_CHARS, NGRAM_SIZES, apply_utterance
from .sketch import ChairModel, Sketch, Stroke, sketch_descriptor
from .vectors import AttributeVector

DEFAULT_BUDGET_S = 90.0


class Mode(str, Enum):
    VOICE_ONLY = "voice"
    SKETCH_ONLY = "sketch"
    HYBRID = "hybrid"


class Modality(str, Enum):
    VOICE = "voice"
    SKETCH = "sketch"
    SKETCH_PLUS_MODEL = "sketch+model"


class Phase(str, Enum):
    INPUT = "input"
    PROCESSING = "processing"
    SELECTION = "selection"
    COMPLETED = "completed"
    REJECTED = "rejected"


class SessionState(str, Enum):
    ACTIVE = "active"
    SUCCEEDED = "succeeded"
    TIMED_OUT = "timed_out"
    ABANDONED = "abandoned"


@dataclass
class QueryRecord:
    query_id: int
    modality: Modality
    phase: Phase
    payload: dict
    results: ResultSet | None = None
    selection: int | None = None
    started_at: float = 0.0
    processed_at: float | None = None
    selected_at: float | None = None
    reject_reason: str | None = None

    @property
    def terminal(self) -> bool:
        return self.phase in (Phase.COMPLETED, Phase.REJECTED)


@dataclass
class Session:
    session_id: str
    mode: Mode
    target_id: int
    clock: Callable[[], float]
    n_gram: int = 6
    budget_s: float = DEFAULT_BUDGET_S
    current_id: int = -1
    descriptor: AttributeVector = field(default_factory=AttributeVector.zeros)
    log: list[QueryRecord] = field(default_factory=list)
    state: SessionState = SessionState.ACTIVE
    started_at: float = 0.0
    events: list[dict] = field(default_factory=list)
    _next_query_id: int = 0

    def elapsed(self) -> float:
        return self.clock() - self.started_at

    def remaining(self) -> float:
        return max(0.0, self.budget_s - self.elapsed())

    def pending_record(self) -> QueryRecord | None:
        for record in reversed(self.log):
            if not record.terminal:
                return record
        return None


@dataclass
class Outcome:
    exact_success: bool
    shape_success: bool
    elapsed_s: float
    query_count: int
    queries_by_modality: dict[str, int]
    state: str


def _payload_digest(payload: dict) -> str:
    body = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(body.encode("utf-8")).hexdigest()


class SessionEngine:
    """Serialized per-session retrieval protocol over an immutable index."""

    def __init__(self, manifest: DatasetManifest, dictionary: Dictionary,
                 index: SearchIndex, event_sink: Callable[[dict], None] | None = None):
        self.manifest = manifest
        self.dictionary = dictionary
        self.index = index
        self.event_sink = event_sink
        self.placeholder_shape, self.placeholder_instance = make_placeholder()
        self._session_counter = 0

    # -- helpers ------------------------------------------------------------

    def _emit(self, session: Session, kind: str, **payload) -> None:
        event = {"session_id": session.session_id, "t": session.clock(), "event": kind}
        event.update(payload)
        session.events.append(event)
        if self.event_sink is not None:
            self.event_sink(event)

    def resolve_chair(self, chair_id: int) -> ChairInstance:
        if chair_id == self.placeholder_instance.chair_id:
            return self.placeholder_instance
        return self.manifest.instance_by_id(chair_id)

    def chair_model(self, chair_id: int) -> ChairModel:
        if chair_id == self.placeholder_instance.chair_id:
            return ChairModel(self.placeholder_shape, self.placeholder_instance.assignment)
        instance = self.manifest.instance_by_id(chair_id)
        return ChairModel.from_instance(self.manifest, instance)

    def sync_vector(self, chair_id: int) -> AttributeVector:
        if chair_id == self.placeholder_instance.chair_id:
            return attribute_vector_for(self.placeholder_shape,
                                        self.placeholder_instance.assignment)
        return semantic_vector(self.manifest.instance_by_id(chair_id),
                               self.manifest, self.dictionary)

    # -- protocol operations --------------------------------------------------

    def begin_session(self, target_id: int, mode: Mode,
                      clock: Callable[[], float] | None = None,
                      n_gram: int = 6, budget_s: float = DEFAULT_BUDGET_S,
                      session_id: str | None = None) -> Session:
        if not self.manifest.has_instance(target_id):
            raise NotFoundError(f"target chair {target_id} is not in the database")
        if n_gram not in NGRAM_SIZES:
            raise InvalidInputError(f"n-gram size must be one of {NGRAM_SIZES}")
        if budget_s <= 0:
            raise InvalidInputError("budget must be positive")
        clock = clock if clock is not None else time.monotonic
        self._session_counter += 1
        session = Session(
            session_id=session_id or f"s{self._session_counter:06d}",
            mode=mode,
            target_id=target_id,
            clock=clock,
            n_gram=n_gram,
            budget_s=budget_s,
            current_id=self.placeholder_instance.chair_id,
            started_at=clock(),
        )
        session.descriptor = self.sync_vector(session.current_id)
        self._emit(session, "session_created", mode=mode.value, target_id=target_id,
                   n_gram=n_gram, budget_s=budget_s)
        return session

    def _log_rejected(self, session: Session, modality: Modality, payload: dict,
                      reason: str) -> QueryRecord:
        record = QueryRecord(
            query_id=session._next_query_id,
            modality=modality,
            phase=Phase.REJECTED,
            payload=payload,
            started_at=session.clock(),
            reject_reason=reason,
        )
        session._next_query_id += 1
        session.log.append(record)
        self._emit(session, "query_rejected", query_id=record.query_id,
                   modality=modality.value, reason=reason,
                   payload_digest=_payload_digest(payload))
        return record

    def _check_gate(self, session: Session, modality: Modality, payload: dict,
                    allowed_modes: tuple[Mode, ...]) -> None:
        """Budget, terminal-state, mode and in-flight checks, in that order."""
        if session.state == SessionState.ACTIVE and session.elapsed() > session.budget_s:
            session.state = SessionState.TIMED_OUT
            pending = session.pending_record()
            if pending is not None:
                pending.phase = Phase.REJECTED
                pending.reject_reason = "budget_exceeded"
            self._emit(session, "session_timed_out", elapsed_s=session.elapsed())
        if session.state == SessionState.TIMED_OUT:
            self._log_rejected(session, modality, payload, "budget_exceeded")
            raise BudgetExceededError("session budget exhausted")
        if session.state != SessionState.ACTIVE:
            self._log_rejected(session, modality, payload, "session_terminal")
            raise SessionTerminalError(f"session is {session.state.value}")
        if session.mode not in allowed_modes:
            self._log_rejected(session, modality, payload, "mode_violation")
            raise ModeViolationError(
                f"{modality.value} queries are not allowed in {session.mode.value} mode")
        if session.pending_record() is not None:
            self._log_rejected(session, modality, payload, "query_in_flight")
            raise QueryInFlightError("a query is already awaiting selection")

    def submit_voice(self, session: Session, text: str) -> ResultSet:
        payload = {"text": text}
        self._check_gate(session, Modality.VOICE, payload, (Mode.VOICE_ONLY, Mode.HYBRID))
        if len(text) > MAX_UTTERANCE_CHARS:
            self._log_rejected(session, Modality.VOICE, payload, "invalid_input")
            raise InvalidInputError(f"utterance longer than {MAX_UTTERANCE_CHARS} characters")
        record = QueryRecord(
            query_id=session._next_query_id,
            modality=Modality.VOICE,
            phase=Phase.INPUT,
            payload=payload,
            started_at=session.clock(),
        )
        session._next_query_id += 1
        session.log.append(record)
        self._emit(session, "query_submitted", query_id=record.query_id,
                   modality=record.modality.value, payload=payload,
                   payload_digest=_payload_digest(payload))
        record.phase = Phase.PROCESSING
        stats: dict = {}
        session.descriptor = apply_utterance(text, session.descriptor,
                                             self.dictionary, session.n_gram, stats=stats)
        record.results = knn_semantic(self.index, session.descriptor.flatten())
        record.processed_at = session.clock()
        record.phase = Phase.SELECTION
        self._emit(session, "query_processed", query_id=record.query_id,
                   results=[[cid, d] for cid, d in record.results.entries],
                   parse_stats=stats)
        return record.results

    def submit_descriptor(self, session: Session, descriptor: AttributeVector) -> ResultSet:
        """Wizard-of-Oz path: a manually composed descriptor as a voice query."""
        payload = {
            "descriptor": {
                "part_colors": descriptor.part_colors.tolist(),
                "levels": descriptor.levels.tolist(),
            }
        }
        self._check_gate(session, Modality.VOICE, payload, (Mode.VOICE_ONLY, Mode.HYBRID))
        record = QueryRecord(
            query_id=session._next_query_id,
            modality=Modality.VOICE,
            phase=Phase.INPUT,
            payload=payload,
            started_at=session.clock(),
        )
        session._next_query_id += 1
        session.log.append(record)
        self._emit(session, "query_submitted", query_id=record.query_id,
                   modality=record.modality.value, payload=payload,
                   payload_digest=_payload_digest(payload))
        record.phase = Phase.PROCESSING
        session.descriptor = descriptor.copy()
        record.results = knn_semantic(self.index, session.descriptor.flatten())
        record.processed_at = session.clock()
        record.phase = Phase.SELECTION
        self._emit(session, "query_processed", query_id=record.query_id,
                   results=[[cid, d] for cid, d in record.results.entries])
        return record.results

    def submit_sketch(self, session: Session, sketch: Sketch,
                      include_current_model: bool = False) -> ResultSet:
        payload = {
            "strokes": [
                {"points": s.points.tolist(), "color": int(s.color), "width": s.width}
                for s in sketch.strokes
            ],
            "include_current_model": include_current_model,
        }
        self._check_gate(session, Modality.SKETCH, payload, (Mode.SKETCH_ONLY, Mode.HYBRID))
        modality = Modality.SKETCH_PLUS_MODEL if include_current_model else Modality.SKETCH
        record = QueryRecord(
            query_id=session._next_query_id,
            modality=modality,
            phase=Phase.INPUT,
            payload=payload,
            started_at=session.clock(),
        )
        session._next_query_id += 1
        session.log.append(record)
        self._emit(session, "query_submitted", query_id=record.query_id,
                   modality=modality.value, payload=payload,
                   payload_digest=_payload_digest(payload))
        record.phase = Phase.PROCESSING
        model = self.chair_model(session.current_id) if include_current_model else None
        descriptor = sketch_descriptor(sketch, model)
        record.results = knn_visual(self.index, descriptor)
        record.processed_at = session.clock()
        record.phase = Phase.SELECTION
        self._emit(session, "query_processed", query_id=record.query_id,
                   results=[[cid, d] for cid, d in record.results.entries])
        return record.results

    def select(self, session: Session, rank: int) -> Session:
        if session.state == SessionState.ACTIVE and session.elapsed() > session.budget_s:
            session.state = SessionState.TIMED_OUT
            pending = session.pending_record()
            if pending is not None:
                pending.phase = Phase.REJECTED
                pending.reject_reason = "budget_exceeded"
            self._emit(session, "session_timed_out", elapsed_s=session.elapsed())
        if session.state == SessionState.TIMED_OUT:
            raise BudgetExceededError("session budget exhausted")
        if session.state != SessionState.ACTIVE:
            raise SessionTerminalError(f"session is {session.state.value}")
        record = session.pending_record()
        if record is None or record.phase != Phase.SELECTION:
            raise SelectionStateError("no query is awaiting selection")
        if not 0 <= rank < len(record.results):
            raise InvalidInputError(f"selection rank {rank} out of range")
        chair_id, _ = record.results[rank]
        record.selection = chair_id
        record.selected_at = session.clock()
        record.phase = Phase.COMPLETED
        session.current_id = chair_id
        session.descriptor = self.sync_vector(chair_id)
        if chair_id == session.target_id:
            session.state = SessionState.SUCCEEDED
        self._emit(session, "selection", query_id=record.query_id, rank=rank,
                   chair_id=chair_id, new_state=session.state.value)
        return session

    def abandon(self, session: Session) -> None:
        if session.state == SessionState.ACTIVE:
            session.state = SessionState.ABANDONED
            self._emit(session, "session_abandoned")

    def score(self, session: Session) -> Outcome:
        current = self.resolve_chair(session.current_id)
        target = self.manifest.instance_by_id(session.target_id)
        by_modality: dict[str, int] = {}
        accepted = 0
        for record in session.log:
            if record.phase == Phase.COMPLETED or record.phase == Phase.SELECTION:
                accepted += 1
                key = record.modality.value
                by_modality[key] = by_modality.get(key, 0) + 1
        return Outcome(
            exact_success=session.current_id == session.target_id,
            shape_success=current.shape_id == target.shape_id,
            elapsed_s=min(session.elapsed(), session.budget_s)
            if session.state == SessionState.TIMED_OUT else session.elapsed(),
            query_count=accepted,
            queries_by_modality=by_modality,
            state=session.state.value,
        )


# --- log export / replay -----------------------------------------------------

def events_to_jsonl(events: list[dict]) -> str:
    return "".join(json.dumps(e, sort_keys=True, separators=(",", ":")) + "\n" for e in events)


@dataclass
class ReplayReport:
    session_id: str
    outcome: Outcome | None
    result_mismatches: int
    replayed_queries: int


def stroke_from_payload(payload: dict) -> Stroke:
    return Stroke(np.array(payload["points"], dtype=np.float64),
                  ColorId(payload["color"]), payload["width"])


def replay_events(events: list[dict], engine: SessionEngine) -> ReplayReport:
    """Re-execute a recorded session and compare recorded result sets.

    The replayed session runs on a scripted clock fed from the recorded
    event times, so budget behavior matches the original run.  Recorded
    rejections replay as rejections and are skipped.
    """
    created = next(e for e in events if e["event"] == "session_created")
    events = [e for e in events if e["session_id"] == created["session_id"]]
    now = {"t": created["t"]}
    session = engine.begin_session(
        target_id=created["target_id"],
        mode=Mode(created["mode"]),
        clock=lambda: now["t"],
        n_gram=created["n_gram"],
        budget_s=created["budget_s"],
        session_id=created["session_id"],
    )
    mismatches = 0
    replayed = 0
    fresh_results: dict[int, ResultSet] = {}
    for event in events:
        now["t"] = event["t"]
        kind = event["event"]
        if kind == "query_submitted":
            payload = event["payload"]
            try:
                if "descriptor" in payload:
                    vec = AttributeVector(
                        np.array(payload["descriptor"]["part_colors"], dtype=np.uint8),
                        np.array(payload["descriptor"]["levels"], dtype=np.int64))
                    results = engine.submit_descriptor(session, vec)
                elif event["modality"] == Modality.VOICE.value:
                    results = engine.submit_voice(session, payload["text"])
                else:
                    strokes = tuple(stroke_from_payload(sp) for sp in payload["strokes"])
                    results = engine.submit_sketch(
                        session, Sketch(strokes), payload["include_current_model"])
            except (BudgetExceededError, QueryInFlightError, ModeViolationError,
                    SessionTerminalError, InvalidInputError):
                continue
            fresh_results[event["query_id"]] = results
            replayed += 1
        elif kind == "query_processed":
            fresh = fresh_results.get(event["query_id"])
            if fresh is None or [[c, d] for c, d in fresh.entries] != event["results"]:
                mismatches += 1
        elif kind == "selection":
            record = session.pending_record()
            if record is None or record.results is None:
                continue
            try:
                rank = record.results.ids.index(event["chair_id"])
                engine.select(session, rank)
            except (BudgetExceededError, SelectionStateError, SessionTerminalError,
                    InvalidInputError, ValueError):
                continue
    return ReplayReport(session_id=created["session_id"], outcome=engine.score(session),
                        result_mismatches=mismatches, replayed_queries=replayed)
