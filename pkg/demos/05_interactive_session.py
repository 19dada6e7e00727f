"""One full retrieval session against the engine, scripted.

Drives the three-stage query protocol by hand on a simulated clock:
submit, inspect the panel, select, chain into the next query, and watch
the budget. Ends by exporting and replaying the session log.
"""

import json

import numpy as np

from chairsearch import (
    Mode,
    SessionEngine,
    build_dataset,
    build_index,
    default_dictionary,
    reference_shapes,
)
from chairsearch.errors import BudgetExceededError, QueryInFlightError
from chairsearch.session import events_to_jsonl, replay_events
from chairsearch.sim import ManualClock

dictionary = default_dictionary()
print("building the 45-shape database and index (about 15 seconds)...")
manifest = build_dataset(reference_shapes(), dictionary)
index = build_index(manifest, dictionary)
engine = SessionEngine(manifest, dictionary, index)

target = manifest.instances[9321]
clock = ManualClock()
session = engine.begin_session(target.chair_id, Mode.HYBRID, clock=clock)
print(f"session {session.session_id}: target chair {target.chair_id}, "
      f"{session.budget_s:.0f}s budget, starts at the placeholder chair")


def show(results):
    ids = ", ".join(str(c) for c in results.ids)
    print(f"  panel: [{ids}]  (t={clock():.0f}s)")


clock.advance(10.0)
results = engine.submit_voice(session, "high back thick legs stop")
show(results)

try:
    engine.submit_voice(session, "this should be rejected stop")
except QueryInFlightError:
    print("  second submit while the panel is open -> rejected, as required")

clock.advance(3.0)
engine.select(session, 0)
print(f"  selected chair {session.current_id}; descriptor re-synced to it")

clock.advance(10.0)
colors = " ".join(
    f"{target.assignment.color_of(p).label.lower()} {dictionary.part_canonical[p]}"
    for p, _ in target.assignment.assignment[:3]
)
results = engine.submit_voice(session, colors + " stop")
show(results)
clock.advance(3.0)
engine.select(session, 0)

clock.advance(70.0)  # blow the budget
try:
    engine.submit_voice(session, "too late stop")
except BudgetExceededError:
    print(f"  at t={clock():.0f}s the budget is gone -> session {session.state.value}")

outcome = engine.score(session)
print(f"\noutcome: exact={outcome.exact_success} shape={outcome.shape_success} "
      f"queries={outcome.query_count} elapsed={outcome.elapsed_s:.0f}s")

print("\nreplaying the exported log through a fresh engine:")
events = [json.loads(line) for line in events_to_jsonl(session.events).splitlines()]
report = replay_events(events, engine)
print(f"  {report.replayed_queries} queries replayed, "
      f"{report.result_mismatches} result mismatches")
