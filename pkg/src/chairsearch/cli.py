"""Command-line entry points: dataset generation, index checks, simulated
experiments, log replay and the HTTP service."""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np


def _load_bundle(manifest_path: str):
    from .dataset import load_manifest
    from .dictionary import default_dictionary
    from .index import build_index

    dictionary = default_dictionary()
    manifest = load_manifest(manifest_path)
    index = build_index(manifest, dictionary)
    return manifest, dictionary, index


def cmd_generate_dataset(args: argparse.Namespace) -> int:
    from .dataset import build_reference_manifest, save_manifest
    from .dictionary import default_dictionary

    dictionary = default_dictionary()
    manifest = build_reference_manifest(dictionary, count=args.shapes)
    save_manifest(manifest, args.out)
    print(f"wrote {manifest.shape_count} shapes / {manifest.instance_count} instances to {args.out}")
    return 0


def cmd_build_index_check(args: argparse.Namespace) -> int:
    manifest, dictionary, index = _load_bundle(args.manifest)
    sem = hashlib.sha256(index.semantic.tobytes()).hexdigest()
    vis = hashlib.sha256(index.visual.tobytes()).hexdigest()
    print(f"entries: {len(index)}")
    print(f"semantic digest: {sem}")
    print(f"visual digest:   {vis}")
    dup_sem = len(index) - len(np.unique(index.semantic, axis=0))
    dup_vis = len(index) - len(np.unique(index.visual, axis=0))
    print(f"duplicate semantic rows: {dup_sem}")
    print(f"duplicate visual rows:   {dup_vis}")
    return 0 if dup_sem == 0 and dup_vis == 0 else 1


def cmd_run_sim(args: argparse.Namespace) -> int:
    from .session import events_to_jsonl
    from .sim import (
        Condition,
        ExperimentConfig,
        NoiseModel,
        Strategy,
        TimeModel,
        default_modality_conditions,
        default_ngram_conditions,
        run_experiment,
    )
    from .stats import friedman_test

    manifest, dictionary, index = _load_bundle(args.manifest)
    if args.config:
        doc = json.loads(Path(args.config).read_text(encoding="utf-8"))
        conditions = tuple(
            Condition(Strategy(c["strategy"]), c.get("n_gram", 6))
            for c in doc["conditions"]
        )
        config = ExperimentConfig(
            conditions=conditions,
            trials_per_condition=doc.get("trials_per_condition", 50),
            seed=doc.get("seed", 0),
            noise=NoiseModel(**doc.get("noise", {})),
            time_model=TimeModel(**doc.get("time_model", {})),
            budget_s=doc.get("budget_s", 90.0),
            targets=tuple(doc["targets"]) if "targets" in doc else None,
        )
    else:
        base = default_ngram_conditions() if args.study == "ngram" else default_modality_conditions()
        config = ExperimentConfig(conditions=base, trials_per_condition=args.trials, seed=args.seed)

    result = run_experiment(manifest, dictionary, index, config)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "metrics.csv").write_text(result.table.to_csv(), encoding="utf-8")
    logs_dir = out_dir / "sessions"
    logs_dir.mkdir(exist_ok=True)
    for condition, batch in result.trials.items():
        with open(logs_dir / f"{condition}.jsonl", "w", encoding="utf-8") as fh:
            for trial in batch:
                fh.write(events_to_jsonl(trial.events))
    print(result.table.to_csv())
    if result.success_matrix.shape[1] >= 2 and result.success_matrix.shape[0] >= 2:
        fr = friedman_test(result.success_matrix)
        print(f"friedman chi2={fr.statistic:.4f} dof={fr.degrees_of_freedom} p={fr.p_value:.4g}")
        names = result.condition_names()
        for pw in fr.pairwise:
            mark = "significant" if pw.significant else "n.s."
            print(f"  {names[pw.condition_a]} vs {names[pw.condition_b]}: "
                  f"W={pw.statistic:.1f} p_adj={pw.p_adjusted:.4g} ({mark})")
    print(f"wrote metrics and session logs to {out_dir}")
    return 0


def cmd_replay_log(args: argparse.Namespace) -> int:
    from .session import SessionEngine, replay_events

    manifest, dictionary, index = _load_bundle(args.manifest)
    engine = SessionEngine(manifest, dictionary, index)
    events = [json.loads(line) for line in Path(args.log).read_text(encoding="utf-8").splitlines()
              if line.strip()]
    session_ids = []
    for event in events:
        if event["event"] == "session_created":
            session_ids.append(event["session_id"])
    total_mismatches = 0
    for sid in session_ids:
        batch = [e for e in events if e["session_id"] == sid]
        report = replay_events(batch, engine)
        out = report.outcome
        total_mismatches += report.result_mismatches
        print(f"session {report.session_id}: replayed {report.replayed_queries} queries, "
              f"{report.result_mismatches} result mismatches; "
              f"exact={out.exact_success} shape={out.shape_success} "
              f"elapsed={out.elapsed_s:.1f}s state={out.state}")
    print(f"{len(session_ids)} sessions, {total_mismatches} total mismatches")
    return 0 if total_mismatches == 0 else 1


def cmd_serve(args: argparse.Namespace) -> int:
    from .service import ServiceConfig, serve

    config = ServiceConfig(
        manifest_path=args.manifest,
        host=args.host,
        port=args.port,
        log_dir=args.log_dir,
        static_dir=args.static_dir,
        budget_s=args.budget,
        dictionary_path=args.dictionary,
    )
    serve(config)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="chairsearch")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate-dataset", help="write the reference manifest")
    p.add_argument("--out", default="manifest.json")
    p.add_argument("--shapes", type=int, default=45)
    p.set_defaults(func=cmd_generate_dataset)

    p = sub.add_parser("build-index-check", help="build the index and print digests")
    p.add_argument("--manifest", required=True)
    p.set_defaults(func=cmd_build_index_check)

    p = sub.add_parser("run-sim", help="run simulated user studies")
    p.add_argument("--manifest", required=True)
    p.add_argument("--config", help="JSON experiment config; overrides --study")
    p.add_argument("--study", choices=["modality", "ngram"], default="modality")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", default="sim-results")
    p.set_defaults(func=cmd_run_sim)

    p = sub.add_parser("replay-log", help="re-run a session log and verify results")
    p.add_argument("--manifest", required=True)
    p.add_argument("--log", required=True)
    p.set_defaults(func=cmd_replay_log)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--manifest", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8008)
    p.add_argument("--log-dir", default="logs")
    p.add_argument("--static-dir", default=None)
    p.add_argument("--budget", type=float, default=90.0)
    p.add_argument("--dictionary", default=None)
    p.set_defaults(func=cmd_serve)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
