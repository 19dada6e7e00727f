import json

import numpy as np
import pytest

from chairsearch.errors import (
    BudgetExceededError,
    InvalidInputError,
    ModeViolationError,
    NotFoundError,
    QueryInFlightError,
    SelectionStateError,
    SessionTerminalError,
)
from chairsearch.palette import ColorId
from chairsearch.session import (
    Mode,
    Modality,
    Phase,
    SessionEngine,
    SessionState,
    events_to_jsonl,
    replay_events,
)
from chairsearch.sim import ManualClock
from chairsearch.sketch import Sketch, Stroke
from chairsearch.vectors import AttributeVector


@pytest.fixture()
def engine(small_manifest, dictionary, small_index):
    return SessionEngine(small_manifest, dictionary, small_index)


@pytest.fixture()
def clock():
    return ManualClock()


def target_of(manifest, idx=0):
    return manifest.instances[idx].chair_id


def simple_sketch():
    return Sketch((Stroke(np.array([[0.0, -0.3, 0.0], [0.0, 0.3, 0.0]]), ColorId.RED, 0.05),))


def test_new_session_starts_at_placeholder(engine, small_manifest, clock):
    session = engine.begin_session(target_of(small_manifest), Mode.HYBRID, clock=clock)
    assert session.state == SessionState.ACTIVE
    assert session.current_id == -1
    assert session.elapsed() == 0.0
    outcome = engine.score(session)
    assert not outcome.exact_success and not outcome.shape_success


def test_unknown_target_rejected(engine, clock):
    with pytest.raises(NotFoundError):
        engine.begin_session(999999, Mode.HYBRID, clock=clock)


def test_mode_violations(engine, small_manifest, clock):
    voice_session = engine.begin_session(target_of(small_manifest), Mode.VOICE_ONLY, clock=clock)
    with pytest.raises(ModeViolationError):
        engine.submit_sketch(voice_session, simple_sketch())
    assert voice_session.log[-1].phase == Phase.REJECTED

    sketch_session = engine.begin_session(target_of(small_manifest), Mode.SKETCH_ONLY, clock=clock)
    with pytest.raises(ModeViolationError):
        engine.submit_voice(sketch_session, "red seat stop")
    assert sketch_session.log[-1].phase == Phase.REJECTED


def test_voice_query_produces_five_results(engine, small_manifest, clock):
    session = engine.begin_session(target_of(small_manifest), Mode.VOICE_ONLY, clock=clock)
    results = engine.submit_voice(session, "red seat stop")
    assert len(results) == 5
    assert session.pending_record().phase == Phase.SELECTION


def test_empty_text_is_well_formed(engine, small_manifest, clock):
    session = engine.begin_session(target_of(small_manifest), Mode.VOICE_ONLY, clock=clock)
    before = session.descriptor.copy()
    results = engine.submit_voice(session, "")
    assert len(results) == 5
    assert session.descriptor == before


def test_second_query_while_pending_rejected(engine, small_manifest, clock):
    session = engine.begin_session(target_of(small_manifest), Mode.VOICE_ONLY, clock=clock)
    engine.submit_voice(session, "red seat stop")
    log_len = len(session.log)
    with pytest.raises(QueryInFlightError):
        engine.submit_voice(session, "blue back stop")
    assert len(session.log) == log_len + 1
    assert session.log[-1].phase == Phase.REJECTED
    # the pending query is still selectable
    assert session.pending_record().phase == Phase.SELECTION


def test_selection_chains_descriptor(engine, small_manifest, dictionary, clock):
    from chairsearch.dataset import semantic_vector

    session = engine.begin_session(target_of(small_manifest), Mode.VOICE_ONLY, clock=clock)
    results = engine.submit_voice(session, "red seat stop")
    engine.select(session, 3)
    chosen = results.ids[3]
    assert session.current_id == chosen
    expected = semantic_vector(small_manifest.instance_by_id(chosen),
                               small_manifest, dictionary)
    assert session.descriptor == expected


def test_select_without_pending_errors(engine, small_manifest, clock):
    session = engine.begin_session(target_of(small_manifest), Mode.VOICE_ONLY, clock=clock)
    with pytest.raises(SelectionStateError):
        engine.select(session, 0)


def test_double_select_errors(engine, small_manifest, clock):
    session = engine.begin_session(target_of(small_manifest), Mode.VOICE_ONLY, clock=clock)
    engine.submit_voice(session, "red seat stop")
    engine.select(session, 0)
    with pytest.raises(SelectionStateError):
        engine.select(session, 1)


def test_select_rank_out_of_range(engine, small_manifest, clock):
    session = engine.begin_session(target_of(small_manifest), Mode.VOICE_ONLY, clock=clock)
    engine.submit_voice(session, "red seat stop")
    with pytest.raises(InvalidInputError):
        engine.select(session, 5)


def test_selecting_target_succeeds(engine, small_manifest, dictionary, clock):
    from chairsearch.dataset import semantic_vector

    target = small_manifest.instances[10]
    session = engine.begin_session(target.chair_id, Mode.VOICE_ONLY, clock=clock)
    vec = semantic_vector(target, small_manifest, dictionary)
    engine.submit_descriptor(session, vec)
    record = session.pending_record()
    rank = record.results.ids.index(target.chair_id)
    engine.select(session, rank)
    assert session.state == SessionState.SUCCEEDED
    outcome = engine.score(session)
    assert outcome.exact_success and outcome.shape_success


def test_shape_success_with_wrong_colors(engine, small_manifest, dictionary, clock):
    from chairsearch.dataset import semantic_vector

    target = small_manifest.instances[0]
    sibling = next(i for i in small_manifest.instances
                   if i.shape_id == target.shape_id and i.chair_id != target.chair_id)
    session = engine.begin_session(target.chair_id, Mode.VOICE_ONLY, clock=clock)
    engine.submit_descriptor(session, semantic_vector(sibling, small_manifest, dictionary))
    record = session.pending_record()
    engine.select(session, record.results.ids.index(sibling.chair_id))
    outcome = engine.score(session)
    assert not outcome.exact_success
    assert outcome.shape_success


def test_budget_timeout_blocks_everything(engine, small_manifest, clock):
    session = engine.begin_session(target_of(small_manifest), Mode.HYBRID, clock=clock)
    engine.submit_voice(session, "red seat stop")
    engine.select(session, 0)
    clock.advance(91.0)
    with pytest.raises(BudgetExceededError):
        engine.submit_voice(session, "blue back stop")
    assert session.state == SessionState.TIMED_OUT
    with pytest.raises(BudgetExceededError):
        engine.submit_sketch(session, simple_sketch())
    with pytest.raises(BudgetExceededError):
        engine.select(session, 0)
    outcome = engine.score(session)
    assert outcome.elapsed_s == 90.0
    assert outcome.state == "timed_out"


def test_exactly_at_budget_still_allowed(engine, small_manifest, clock):
    session = engine.begin_session(target_of(small_manifest), Mode.VOICE_ONLY, clock=clock)
    clock.advance(90.0)
    results = engine.submit_voice(session, "red seat stop")
    assert len(results) == 5


def test_timeout_rejects_pending_record(engine, small_manifest, clock):
    session = engine.begin_session(target_of(small_manifest), Mode.VOICE_ONLY, clock=clock)
    engine.submit_voice(session, "red seat stop")
    clock.advance(120.0)
    with pytest.raises(BudgetExceededError):
        engine.select(session, 0)
    assert session.pending_record() is None
    assert session.log[0].phase == Phase.REJECTED


def test_over_long_utterance_rejected(engine, small_manifest, clock):
    session = engine.begin_session(target_of(small_manifest), Mode.VOICE_ONLY, clock=clock)
    with pytest.raises(InvalidInputError):
        engine.submit_voice(session, "red " * 100 + "stop")
    assert session.log[-1].phase == Phase.REJECTED


def test_sketch_with_current_model_self_retrieves(engine, small_manifest, clock):
    session = engine.begin_session(target_of(small_manifest), Mode.HYBRID, clock=clock)
    engine.submit_voice(session, "red seat stop")
    engine.select(session, 2)
    current = session.current_id
    results = engine.submit_sketch(session, Sketch(), include_current_model=True)
    assert results.entries[0] == (current, 0.0)


def test_ops_after_success_rejected(engine, small_manifest, dictionary, clock):
    from chairsearch.dataset import semantic_vector

    target = small_manifest.instances[5]
    session = engine.begin_session(target.chair_id, Mode.VOICE_ONLY, clock=clock)
    engine.submit_descriptor(session, semantic_vector(target, small_manifest, dictionary))
    engine.select(session, session.pending_record().results.ids.index(target.chair_id))
    with pytest.raises(SessionTerminalError):
        engine.submit_voice(session, "red seat stop")


# --- log export and replay -------------------------------------------------------

def test_log_replay_reproduces_results(engine, small_manifest, clock):
    session = engine.begin_session(target_of(small_manifest), Mode.HYBRID,
                                   clock=clock, session_id="replay-test")
    clock.advance(5.0)
    engine.submit_voice(session, "red seat curvy stop")
    clock.advance(4.0)
    engine.select(session, 1)
    clock.advance(6.0)
    engine.submit_sketch(session, simple_sketch(), include_current_model=True)
    clock.advance(4.0)
    engine.select(session, 0)
    outcome = engine.score(session)

    lines = events_to_jsonl(session.events)
    events = [json.loads(line) for line in lines.splitlines()]
    report = replay_events(events, engine)
    assert report.result_mismatches == 0
    assert report.replayed_queries == 2
    assert report.outcome.exact_success == outcome.exact_success
    assert report.outcome.query_count == outcome.query_count


def test_event_stream_is_append_only_jsonl(engine, small_manifest, clock):
    session = engine.begin_session(target_of(small_manifest), Mode.VOICE_ONLY, clock=clock)
    engine.submit_voice(session, "red seat stop")
    engine.select(session, 0)
    lines = events_to_jsonl(session.events).splitlines()
    kinds = [json.loads(l)["event"] for l in lines]
    assert kinds == ["session_created", "query_submitted", "query_processed", "selection"]
    for line in lines:
        assert json.loads(line)["session_id"] == session.session_id


# --- protocol fuzz ------------------------------------------------------------------

def test_fuzzed_op_stream_keeps_invariants(engine, small_manifest, clock):
    rng = np.random.default_rng(1)
    session = engine.begin_session(target_of(small_manifest), Mode.HYBRID, clock=clock)
    for _ in range(1000):
        op = rng.integers(4)
        clock.advance(float(rng.random() * 2.0))
        try:
            if op == 0:
                engine.submit_voice(session, "red seat stop")
            elif op == 1:
                engine.submit_sketch(session, simple_sketch())
            elif op == 2:
                engine.select(session, int(rng.integers(5)))
            else:
                clock.advance(5.0)
        except (QueryInFlightError, SelectionStateError, BudgetExceededError,
                SessionTerminalError, InvalidInputError):
            pass
        non_terminal = [r for r in session.log if not r.terminal]
        assert len(non_terminal) <= 1
        if session.state == SessionState.TIMED_OUT:
            break
    # after timeout nothing mutates
    state_snapshot = (session.current_id, len(session.log))
    if session.state == SessionState.TIMED_OUT:
        for _ in range(10):
            with pytest.raises(BudgetExceededError):
                engine.submit_voice(session, "red seat stop")
        assert (session.current_id, len(session.log) - 10) == state_snapshot
