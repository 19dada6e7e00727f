import json

import pytest

from chairsearch.cli import main
from chairsearch.dataset import load_manifest


@pytest.fixture(scope="module")
def small_manifest_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "manifest.json"
    assert main(["generate-dataset", "--out", str(path), "--shapes", "2"]) == 0
    return path


def test_generate_dataset_writes_manifest(small_manifest_file):
    manifest = load_manifest(small_manifest_file)
    assert manifest.shape_count == 2
    assert manifest.instance_count == 720


def test_build_index_check_passes(small_manifest_file, capsys):
    assert main(["build-index-check", "--manifest", str(small_manifest_file)]) == 0
    out = capsys.readouterr().out
    assert "entries: 720" in out
    assert "duplicate semantic rows: 0" in out


def test_run_sim_and_replay(small_manifest_file, tmp_path, capsys):
    out_dir = tmp_path / "results"
    assert main(["run-sim", "--manifest", str(small_manifest_file),
                 "--study", "ngram", "--trials", "2",
                 "--seed", "3", "--out-dir", str(out_dir)]) == 0
    metrics = (out_dir / "metrics.csv").read_text()
    assert metrics.splitlines()[0].startswith("condition,")
    log = out_dir / "sessions" / "voice.jsonl"
    assert log.exists()
    capsys.readouterr()
    assert main(["replay-log", "--manifest", str(small_manifest_file),
                 "--log", str(log)]) == 0
    out = capsys.readouterr().out
    assert "0 total mismatches" in out


def test_run_sim_with_config_file(small_manifest_file, tmp_path):
    config = {
        "conditions": [{"strategy": "voice", "n_gram": 2}],
        "trials_per_condition": 2,
        "seed": 5,
        "noise": {"p_confusion": 0.2, "p_miscolor": 0.5},
    }
    config_path = tmp_path / "exp.json"
    config_path.write_text(json.dumps(config))
    out_dir = tmp_path / "results"
    assert main(["run-sim", "--manifest", str(small_manifest_file),
                 "--config", str(config_path), "--out-dir", str(out_dir)]) == 0
    assert "voice_2gram" in (out_dir / "metrics.csv").read_text()
