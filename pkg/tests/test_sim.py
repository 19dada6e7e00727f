import numpy as np
import pytest

from chairsearch.dictionary import ROLE_COLOR, ROLE_PART
from chairsearch.palette import ColorId
from chairsearch.query import normalize
from chairsearch.session import Mode, SessionEngine
from chairsearch.silhouette import ORACLE_STROKE_WIDTH, trace_silhouette
from chairsearch.sim import (
    Condition,
    ExperimentConfig,
    ManualClock,
    NoiseModel,
    SilhouetteLibrary,
    SimUser,
    Strategy,
    perceived_target,
    run_experiment,
    run_trial,
    sketch_user_step,
    voice_user_step,
)
from chairsearch.sketch import Sketch, Stroke, sketch_descriptor
from chairsearch.index import knn_visual
from chairsearch.dataset import semantic_vector


@pytest.fixture()
def engine(small_manifest, dictionary, small_index):
    return SessionEngine(small_manifest, dictionary, small_index)


@pytest.fixture()
def library(small_manifest):
    return SilhouetteLibrary(small_manifest)


NOISELESS = NoiseModel(p_confusion=0.0, p_miscolor=0.0)


def test_noise_free_voice_always_finds_target(engine, small_manifest, library):
    rng = np.random.default_rng(8)
    ids = [i.chair_id for i in small_manifest.instances]
    for k, chair_id in enumerate(rng.choice(ids, size=8, replace=False)):
        user = SimUser(Strategy.VOICE_PURE, noise=NOISELESS)
        result = run_trial(engine, user, int(chair_id), library,
                           trial_seed=500 + k, budget_s=3600.0)
        assert result.exact_success


def test_oracle_strokes_find_shape(engine, small_manifest, dictionary, small_index, library):
    rng = np.random.default_rng(9)
    hits = 0
    for idx in rng.choice(small_manifest.instance_count, size=5, replace=False):
        inst = small_manifest.instances[int(idx)]
        tvec = semantic_vector(inst, small_manifest, dictionary)
        shape = small_manifest.shape_by_id(inst.shape_id)
        sketch, _ = sketch_user_step(shape, tvec, library, rng, p_miscolor=0.0)
        results = knn_visual(small_index, sketch_descriptor(sketch))
        shapes = {small_manifest.instance_by_id(c).shape_id for c in results.ids}
        hits += inst.shape_id in shapes
    assert hits >= 4


def test_colors_only_after_shape_match(engine, small_manifest, dictionary):
    target = small_manifest.instances[3]
    clock = ManualClock()
    session = engine.begin_session(target.chair_id, Mode.VOICE_ONLY, clock=clock)
    tvec = semantic_vector(target, small_manifest, dictionary)
    rng = np.random.default_rng(0)
    text = voice_user_step(tvec, session, 6, rng, dictionary, colors_only=True)
    parsed = normalize(text, dictionary)
    assert parsed.pairs, "expected color statements"
    assert {role for _, role in parsed.pairs} <= {ROLE_COLOR, ROLE_PART}


def test_miscolored_strokes_still_trace_target_geometry(small_manifest, dictionary, library):
    inst = small_manifest.instances[0]
    tvec = semantic_vector(inst, small_manifest, dictionary)
    shape = small_manifest.shape_by_id(inst.shape_id)
    rng = np.random.default_rng(2)
    clean, _ = sketch_user_step(shape, tvec, library, rng, p_miscolor=0.0)
    noisy, _ = sketch_user_step(shape, tvec, library, rng, p_miscolor=1.0)
    assert len(clean.strokes) == len(noisy.strokes)
    for a, b in zip(clean.strokes, noisy.strokes):
        assert np.array_equal(a.points, b.points)
    # with certain miscoloring every part's strokes use another part's color
    assert any(a.color != b.color for a, b in zip(clean.strokes, noisy.strokes))


def test_perceived_target_noise_free_is_exact(small_manifest, dictionary):
    inst = small_manifest.instances[1]
    tvec = semantic_vector(inst, small_manifest, dictionary)
    rng = np.random.default_rng(0)
    assert perceived_target(tvec, rng, 0.0) == tvec
    confused = perceived_target(tvec, rng, 1.0)
    assert (confused.part_colors == tvec.part_colors).all()


def test_same_seed_reproduces_table(small_manifest, dictionary, small_index):
    cfg = ExperimentConfig(conditions=(Condition(Strategy.VOICE_PURE),),
                           trials_per_condition=6, seed=77)
    a = run_experiment(small_manifest, dictionary, small_index, cfg)
    b = run_experiment(small_manifest, dictionary, small_index, cfg)
    assert a.table.to_csv() == b.table.to_csv()
    assert np.array_equal(a.success_matrix, b.success_matrix)
    for cond in a.trials:
        for ta, tb in zip(a.trials[cond], b.trials[cond]):
            assert ta.events == tb.events


def test_zero_trials_gives_empty_matrix(small_manifest, dictionary, small_index):
    cfg = ExperimentConfig(conditions=(Condition(Strategy.VOICE_PURE),),
                           trials_per_condition=0, seed=1)
    result = run_experiment(small_manifest, dictionary, small_index, cfg)
    assert result.success_matrix.shape == (0, 1)
    assert result.table.rows[0].trials == 0


def test_shape_precision_at_least_exact(small_manifest, dictionary, small_index):
    cfg = ExperimentConfig(
        conditions=(Condition(Strategy.VOICE_PURE), Condition(Strategy.HYBRID_SKETCH_REFINE_VOICE)),
        trials_per_condition=8, seed=5)
    result = run_experiment(small_manifest, dictionary, small_index, cfg)
    for row in result.table.rows:
        assert row.precision_shape >= row.precision


def test_precision_non_increasing_in_confusion(small_manifest, dictionary, small_index):
    precisions = []
    for p_c in (0.0, 0.5, 1.0):
        cfg = ExperimentConfig(conditions=(Condition(Strategy.VOICE_PURE),),
                               trials_per_condition=12, seed=31,
                               noise=NoiseModel(p_confusion=p_c, p_miscolor=0.0))
        result = run_experiment(small_manifest, dictionary, small_index, cfg)
        precisions.append(result.table.rows[0].precision)
    assert precisions[0] >= precisions[1] >= precisions[2]


def test_total_confusion_is_near_random_baseline(small_manifest, dictionary, small_index):
    # with every lemma corrupted the utterances are word salad; success can
    # only come from lucky panels, matching a random-walk baseline
    cfg = ExperimentConfig(conditions=(Condition(Strategy.VOICE_PURE),),
                           trials_per_condition=15, seed=13,
                           noise=NoiseModel(p_confusion=1.0, p_miscolor=0.0,
                                            p_color_slip=1.0))
    result = run_experiment(small_manifest, dictionary, small_index, cfg)
    assert result.table.rows[0].precision <= 0.2


def test_trial_events_replayable(engine, small_manifest, library):
    from chairsearch.session import replay_events

    user = SimUser(Strategy.HYBRID_SKETCH_THEN_VOICE)
    result = run_trial(engine, user, small_manifest.instances[50].chair_id,
                       library, trial_seed=123)
    report = replay_events(result.events, engine)
    assert report.result_mismatches == 0
    assert report.outcome.exact_success == result.exact_success


def test_unknown_config_target_rejected(small_manifest, dictionary, small_index):
    from chairsearch.errors import NotFoundError

    cfg = ExperimentConfig(conditions=(Condition(Strategy.VOICE_PURE),),
                           trials_per_condition=2, seed=1, targets=(987654,))
    with pytest.raises(NotFoundError):
        run_experiment(small_manifest, dictionary, small_index, cfg)


def test_silhouette_polylines_stay_in_volume(small_manifest):
    shape = small_manifest.shapes[0]
    for poly in trace_silhouette(shape):
        assert np.abs(poly.points).max() <= 1.5
        assert len(poly.points) >= 2
        Stroke(poly.points, ColorId.RED, ORACLE_STROKE_WIDTH)
