"""Simulated users driving retrieval sessions under timed budgets.

Five strategies cover the observed behaviors: voice only, sketch only, and
three hybrid flows that find the shape with one modality and finish the
colors by voice.  Noise knobs make users imperfect: p_confusion swaps an
uttered lemma for a random sibling of the same role, and p_miscolor paints
a traced stroke with another of the target's part colors.  All timing runs
on a simulated clock with documented per-action costs, so whole studies
replay deterministically from a seed.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .dataset import DatasetManifest, semantic_vector
from .dictionary import Dictionary, ROLE_COLOR, ROLE_CONCEPT, ROLE_PART
from .errors import BudgetExceededError, InvalidInputError, NotFoundError
from .geometry import ChairShape
from .index import SearchIndex
from .palette import ColorId, PartKind
from .session import Mode, Session, SessionEngine, SessionState
from .silhouette import ORACLE_STROKE_WIDTH, SilhouettePolyline, trace_silhouette
from .sketch import Sketch, Stroke
from .vectors import LEVEL_MAX, AttributeVector


class Strategy(str, Enum):
    VOICE_PURE = "voice"
    SKETCH_PURE = "sketch"
    HYBRID_SKETCH_THEN_VOICE = "hybrid_a"
    HYBRID_SKETCH_REFINE_VOICE = "hybrid_b"
    HYBRID_VOICE_SKETCH_VOICE = "hybrid_c"


HYBRID_STRATEGIES = (
    Strategy.HYBRID_SKETCH_THEN_VOICE,
    Strategy.HYBRID_SKETCH_REFINE_VOICE,
    Strategy.HYBRID_VOICE_SKETCH_VOICE,
)


@dataclass(frozen=True)
class TimeModel:
    """Simulated seconds spent per user action."""

    voice_input_s: float = 10.0
    sketch_base_s: float = 2.0
    sketch_per_stroke_s: float = 0.5
    processing_s: float = 1.0
    selection_s: float = 3.0


@dataclass(frozen=True)
class NoiseModel:
    """Simulated-user error rates.

    Attribute confusion (p_confusion) hits the shape channel twice: each
    target attribute is misread by one level with that probability when the
    trial starts, and each spoken attribute word slips to a random sibling
    with the same probability.  Color and part words are nearly always
    right (six-color palette, four parts), so they slip at the much lower
    p_color_slip, which defaults to a tenth of p_confusion.
    """

    p_confusion: float = 0.6  # attribute misperception and attribute-lemma slips
    p_miscolor: float = 0.85  # per-part chance the sketch colors it wrongly
    p_color_slip: float | None = None  # per color/part lemma; None: p_confusion / 10

    def __post_init__(self) -> None:
        if self.p_color_slip is None:
            object.__setattr__(self, "p_color_slip", self.p_confusion / 10.0)
        for p in (self.p_confusion, self.p_miscolor, self.p_color_slip):
            if not 0.0 <= p <= 1.0:
                raise InvalidInputError("noise probabilities must lie in [0, 1]")


def perceived_target(target_vec: AttributeVector, rng: np.random.Generator,
                     p_confusion: float) -> AttributeVector:
    """The user's possibly mistaken reading of the target's attributes.

    With probability p_confusion per concept the user cannot really judge
    the level and guesses it uniformly; part colors are always read
    correctly (the palette leaves no room for doubt).
    """
    believed = target_vec.copy()
    for concept_id in range(len(believed.levels)):
        if p_confusion > 0.0 and rng.random() < p_confusion:
            believed.levels[concept_id] = int(rng.integers(0, LEVEL_MAX + 1))
    return believed


@dataclass(frozen=True)
class SimUser:
    strategy: Strategy
    noise: NoiseModel = NoiseModel()
    time_model: TimeModel = TimeModel()
    n_gram: int = 6
    seed: int = 0


class ManualClock:
    """Deterministic clock advanced explicitly by the harness."""

    def __init__(self, start: float = 0.0) -> None:
        self.t = float(start)

    def __call__(self) -> float:
        return self.t

    def advance(self, dt: float) -> None:
        self.t += dt


# --- voice step ---------------------------------------------------------------

def _corrupt(lemma: str, role: str, rng: np.random.Generator,
             p: float, dictionary: Dictionary) -> str:
    if p <= 0.0 or rng.random() >= p:
        return lemma
    if role == ROLE_COLOR:
        pool = [l for l in dictionary.colors if l != lemma]
    elif role == ROLE_PART:
        pool = [l for l in dictionary.part_canonical.values() if l != lemma]
    else:
        pool = []
        for concept in dictionary.concepts:
            pool.append(concept.canonical)
            if concept.antonyms:
                pool.append(concept.antonyms[0])
        pool = [l for l in pool if l != lemma]
    return pool[int(rng.integers(len(pool)))]


def voice_user_step(target_vec: AttributeVector, session: Session, n_gram: int,
                    rng: np.random.Generator, dictionary: Dictionary,
                    noise: NoiseModel | None = None,
                    colors_only: bool = False) -> str:
    """Compose one utterance describing the biggest remaining differences.

    Shape concepts come first, larger level gaps more often first; once the
    shape looks right (colors_only), the utterance carries only
    (color, part) pairs.  Ranking is jittered so a user stuck on an
    unchanged result panel rephrases instead of repeating the same query.
    """
    noise = noise if noise is not None else NoiseModel(p_confusion=0.0, p_miscolor=0.0)
    current = session.descriptor
    level_gap = target_vec.levels - current.levels
    tokens: list[tuple[str, str]] = []

    if not colors_only:
        differing = [i for i in range(len(level_gap)) if level_gap[i] != 0]
        concept_order = sorted(
            differing,
            key=lambda i: -(abs(int(level_gap[i])) + float(rng.random())),
        )
        for concept_id in concept_order:
            gap = int(level_gap[concept_id])
            concept = dictionary.concept_by_id(concept_id)
            lemma = concept.canonical if gap > 0 else concept.antonyms[0]
            for _ in range(min(abs(gap), n_gram - len(tokens))):
                tokens.append((lemma, ROLE_CONCEPT))
            if len(tokens) >= n_gram:
                break

    wrong_parts = [
        part for part in PartKind
        if target_vec.part_color(part) is not None
        and current.part_color(part) != target_vec.part_color(part)
    ]
    rng.shuffle(wrong_parts)
    for part in wrong_parts:
        if len(tokens) + 2 > n_gram:
            break
        want = target_vec.part_color(part)
        tokens.append((want.label.lower(), ROLE_COLOR))
        tokens.append((dictionary.part_canonical[part], ROLE_PART))

    words = [
        _corrupt(lemma, role, rng,
                 noise.p_confusion if role == ROLE_CONCEPT else noise.p_color_slip,
                 dictionary)
        for lemma, role in tokens
    ]
    words.append(dictionary.terminator)
    return " ".join(words)


# --- sketch step ----------------------------------------------------------------

class SilhouetteLibrary:
    """Per-shape trace cache so repeated trials do not re-render."""

    def __init__(self, manifest: DatasetManifest) -> None:
        self._manifest = manifest
        self._cache: dict[int, list[SilhouettePolyline]] = {}

    def polylines(self, shape_id: int) -> list[SilhouettePolyline]:
        if shape_id not in self._cache:
            shape = self._manifest.shape_by_id(shape_id)
            self._cache[shape_id] = trace_silhouette(shape)
        return self._cache[shape_id]


def sketch_user_step(target_shape: ChairShape, target_vec: AttributeVector,
                     library: SilhouetteLibrary, rng: np.random.Generator,
                     p_miscolor: float = 0.0,
                     include_current_model: bool = False) -> tuple[Sketch, bool]:
    """Redraw the target's silhouette strokes, miscoloring whole parts.

    With probability p_miscolor a part's strokes all take the color of some
    other target part for this query, mimicking a drawing whose colors sit
    on the wrong components; the geometry is always the target's.
    """
    polylines = library.polylines(target_shape.shape_id)
    parts = [p for p in PartKind if target_vec.part_color(p) is not None]
    color_source: dict[PartKind, PartKind] = {}
    for part in parts:
        if p_miscolor > 0.0 and rng.random() < p_miscolor:
            others = [p for p in parts if p != part]
            color_source[part] = others[int(rng.integers(len(others)))]
        else:
            color_source[part] = part
    strokes = []
    for poly in polylines:
        color = target_vec.part_color(color_source[poly.part])
        strokes.append(Stroke(poly.points, color, ORACLE_STROKE_WIDTH))
    return Sketch(tuple(strokes)), include_current_model


# --- one trial -------------------------------------------------------------------

@dataclass
class TrialResult:
    strategy: str
    n_gram: int
    target_id: int
    exact_success: bool
    shape_success: bool
    elapsed_s: float
    query_count: int
    events: list[dict] = field(repr=False, default_factory=list)


def _select_best(engine: SessionEngine, session: Session, target_vec_flat: np.ndarray) -> None:
    """The simulated user picks the panel chair most like the target."""
    record = session.pending_record()
    ranked = []
    for rank, (chair_id, _) in enumerate(record.results.entries):
        vec = semantic_vector(engine.manifest.instance_by_id(chair_id),
                              engine.manifest, engine.dictionary).flatten()
        ranked.append((float(((vec - target_vec_flat) ** 2).sum()), rank))
    best_rank = min(ranked)[1]
    engine.select(session, best_rank)


def run_trial(engine: SessionEngine, user: SimUser, target_id: int,
              library: SilhouetteLibrary, trial_seed: int,
              budget_s: float = 90.0) -> TrialResult:
    rng = np.random.default_rng(trial_seed)
    clock = ManualClock()
    mode = {
        Strategy.VOICE_PURE: Mode.VOICE_ONLY,
        Strategy.SKETCH_PURE: Mode.SKETCH_ONLY,
    }.get(user.strategy, Mode.HYBRID)
    session = engine.begin_session(target_id, mode, clock=clock,
                                   n_gram=user.n_gram, budget_s=budget_s)
    manifest = engine.manifest
    target = manifest.instance_by_id(target_id)
    target_shape = manifest.shape_by_id(target.shape_id)
    target_vec = semantic_vector(target, manifest, engine.dictionary)
    target_flat = target_vec.flatten()
    believed_vec = perceived_target(target_vec, rng, user.noise.p_confusion)
    tm = user.time_model

    def voice_round() -> None:
        text = voice_user_step(believed_vec, session, user.n_gram, rng,
                               engine.dictionary, user.noise,
                               colors_only=current_shape_matches())
        clock.advance(tm.voice_input_s)
        engine.submit_voice(session, text)
        clock.advance(tm.processing_s)
        clock.advance(tm.selection_s)
        _select_best(engine, session, target_flat)

    def sketch_round(include_model: bool = False) -> None:
        sketch, include = sketch_user_step(
            target_shape, target_vec, library, rng,
            user.noise.p_miscolor, include_current_model=include_model)
        clock.advance(tm.sketch_base_s + tm.sketch_per_stroke_s * len(sketch.strokes))
        engine.submit_sketch(session, sketch, include)
        clock.advance(tm.processing_s)
        clock.advance(tm.selection_s)
        _select_best(engine, session, target_flat)

    def current_shape_matches() -> bool:
        current = engine.resolve_chair(session.current_id)
        return current.shape_id == target.shape_id

    try:
        while session.state == SessionState.ACTIVE:
            if user.strategy == Strategy.VOICE_PURE:
                voice_round()
            elif user.strategy == Strategy.SKETCH_PURE:
                sketch_round()
            elif user.strategy == Strategy.HYBRID_SKETCH_THEN_VOICE:
                if not current_shape_matches():
                    sketch_round()
                else:
                    voice_round()
            elif user.strategy == Strategy.HYBRID_SKETCH_REFINE_VOICE:
                if not session.log:
                    sketch_round()
                else:
                    voice_round()
            elif user.strategy == Strategy.HYBRID_VOICE_SKETCH_VOICE:
                if not current_shape_matches() and not session.log:
                    voice_round()
                elif not current_shape_matches():
                    sketch_round(include_model=True)
                else:
                    voice_round()
    except BudgetExceededError:
        pass

    outcome = engine.score(session)
    return TrialResult(
        strategy=user.strategy.value,
        n_gram=user.n_gram,
        target_id=target_id,
        exact_success=outcome.exact_success,
        shape_success=outcome.shape_success,
        elapsed_s=outcome.elapsed_s,
        query_count=outcome.query_count,
        events=session.events,
    )


# --- experiment runner --------------------------------------------------------------

@dataclass(frozen=True)
class Condition:
    strategy: Strategy
    n_gram: int = 6

    @property
    def name(self) -> str:
        if self.strategy == Strategy.VOICE_PURE and self.n_gram != 6:
            return f"{self.strategy.value}_{self.n_gram}gram"
        return self.strategy.value


@dataclass(frozen=True)
class ExperimentConfig:
    conditions: tuple[Condition, ...]
    trials_per_condition: int
    seed: int = 0
    noise: NoiseModel = NoiseModel()
    time_model: TimeModel = TimeModel()
    budget_s: float = 90.0
    targets: tuple[int, ...] | None = None  # None: sample uniformly per trial


@dataclass
class MetricsRow:
    condition: str
    trials: int
    precision: float
    precision_shape: float
    avg_time_s: float
    avg_query_count: float


@dataclass
class MetricsTable:
    rows: list[MetricsRow]

    def row(self, condition: str) -> MetricsRow:
        for row in self.rows:
            if row.condition == condition:
                return row
        raise NotFoundError(f"no condition named {condition!r}")

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["condition", "trials", "precision", "precision_shape",
                         "avg_time_s", "avg_query_count"])
        for row in self.rows:
            writer.writerow([row.condition, row.trials, f"{row.precision:.4f}",
                             f"{row.precision_shape:.4f}", f"{row.avg_time_s:.2f}",
                             f"{row.avg_query_count:.2f}"])
        return buf.getvalue()


@dataclass
class ExperimentResult:
    table: MetricsTable
    trials: dict[str, list[TrialResult]]
    success_matrix: np.ndarray  # (trials, conditions) 0/1 exact successes

    def condition_names(self) -> list[str]:
        return [row.condition for row in self.table.rows]


def run_experiment(manifest: DatasetManifest, dictionary: Dictionary,
                   index: SearchIndex, config: ExperimentConfig) -> ExperimentResult:
    """Run trials per condition; same seed in, same table and logs out.

    Trial t of every condition shares a target and a per-trial seed, so the
    success matrix is paired by row, as the statistical tests expect.
    """
    engine = SessionEngine(manifest, dictionary, index)
    library = SilhouetteLibrary(manifest)
    root = np.random.SeedSequence(config.seed)
    chair_ids = np.array([i.chair_id for i in manifest.instances])
    if config.targets is not None:
        for target in config.targets:
            if not manifest.has_instance(target):
                raise NotFoundError(f"config target {target} not in manifest")

    n_trials = config.trials_per_condition
    trial_streams = root.spawn(n_trials)
    trials: dict[str, list[TrialResult]] = {c.name: [] for c in config.conditions}
    matrix = np.zeros((n_trials, len(config.conditions)), dtype=np.int64)
    for t in range(n_trials):
        trial_rng = np.random.default_rng(trial_streams[t])
        if config.targets is not None:
            target_id = int(config.targets[t % len(config.targets)])
        else:
            target_id = int(chair_ids[int(trial_rng.integers(len(chair_ids)))])
        base_seed = int(trial_rng.integers(2**63 - 1))
        for ci, condition in enumerate(config.conditions):
            user = SimUser(strategy=condition.strategy, noise=config.noise,
                           time_model=config.time_model, n_gram=condition.n_gram,
                           seed=base_seed)
            result = run_trial(engine, user, target_id, library,
                               trial_seed=base_seed + ci, budget_s=config.budget_s)
            trials[condition.name].append(result)
            matrix[t, ci] = int(result.exact_success)

    rows = []
    for condition in config.conditions:
        batch = trials[condition.name]
        rows.append(MetricsRow(
            condition=condition.name,
            trials=len(batch),
            precision=float(np.mean([r.exact_success for r in batch])) if batch else 0.0,
            precision_shape=float(np.mean([r.shape_success for r in batch])) if batch else 0.0,
            avg_time_s=float(np.mean([r.elapsed_s for r in batch])) if batch else 0.0,
            avg_query_count=float(np.mean([r.query_count for r in batch])) if batch else 0.0,
        ))
    return ExperimentResult(MetricsTable(rows), trials, matrix)


def default_modality_conditions() -> tuple[Condition, ...]:
    return (
        Condition(Strategy.VOICE_PURE, 6),
        Condition(Strategy.SKETCH_PURE, 6),
        Condition(Strategy.HYBRID_SKETCH_THEN_VOICE, 6),
    )


def default_ngram_conditions() -> tuple[Condition, ...]:
    return tuple(Condition(Strategy.VOICE_PURE, n) for n in (2, 4, 6))
