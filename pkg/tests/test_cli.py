"""End-to-end CLI behavior: exit codes, manifests, reproducibility."""

import json
import subprocess
import sys
from pathlib import Path

import pytest

FIXTURE = Path(__file__).parent / "fixtures" / "toy"


def remap(*args, cwd=None):
    return subprocess.run(
        [sys.executable, "-m", "remap", *map(str, args)],
        capture_output=True,
        text=True,
        cwd=cwd,
    )


def test_version():
    proc = remap("--version")
    assert proc.returncode == 0
    assert proc.stdout.strip().startswith("remap ")


def test_unknown_flag_is_usage_error():
    proc = remap("extract", "--no-such-flag")
    assert proc.returncode == 2


def test_missing_input_is_usage_error(tmp_path):
    proc = remap("extract", "--root", tmp_path / "nope", "--out", tmp_path / "o.jsonl")
    assert proc.returncode == 2
    err = json.loads(proc.stderr.strip().split("\n")[-1])
    assert err["error"] == "usage"


@pytest.fixture(scope="module")
def pipeline(tmp_path_factory):
    """Run the full pipeline once: extract both trees, ingest planted pairs."""
    work = tmp_path_factory.mktemp("pipeline")
    left, right = work / "left.jsonl", work / "right.jsonl"
    p = remap("extract", "--root", FIXTURE / "left", "--role", "original", "--out", left)
    assert p.returncode == 0, p.stderr
    p = remap("extract", "--root", FIXTURE / "right", "--role", "redesigned", "--out", right)
    assert p.returncode == 0, p.stderr
    pairs = work / "pairs.jsonl"
    p = remap(
        "ingest", "--format", "generic", "--report", FIXTURE / "pairs.jsonl",
        "--left", left, "--right", right, "--out", pairs,
    )
    assert p.returncode == 0, p.stderr
    return work, left, right, pairs


def test_extract_writes_manifest_and_sidecar(pipeline):
    work, left, right, pairs = pipeline
    assert (work / "left.classes.json").exists()
    manifest = json.loads((work / "left.jsonl.manifest.json").read_text())
    assert manifest["tool_version"]
    assert manifest["counters"]["files_parsed"] > 0


def test_role_mismatch_is_runtime_error(pipeline, tmp_path):
    work, left, right, pairs = pipeline
    p = remap(
        "score", "--pairs", pairs, "--left", right, "--right", left,
        "--out", tmp_path / "x.jsonl",
    )
    assert p.returncode == 2  # role validation is a usage problem
    err = json.loads(p.stderr.strip().split("\n")[-1])
    assert "role" in err["message"]


def test_score_and_summary(pipeline, tmp_path):
    work, left, right, pairs = pipeline
    out = tmp_path / "scores.jsonl"
    p = remap(
        "score", "--pairs", pairs, "--left", left, "--right", right,
        "--task", "cm", "--threshold", "0.6", "--rules", "soot-sootup",
        "--out", out,
    )
    assert p.returncode == 0, p.stderr
    summary = json.loads(p.stdout.strip().split("\n")[-1])
    assert summary == {"orig": 40, "filt": 15, "out_pct": 62.5}
    lines = [json.loads(l) for l in out.read_text().strip().split("\n")]
    assert len(lines) == 40
    kept = [l for l in lines if l["kept"]]
    assert len(kept) == 15
    assert [l["rank"] for l in kept] == list(range(1, 16))


def test_score_with_stale_pairs_is_runtime_error(pipeline, tmp_path):
    work, left, right, _ = pipeline
    stale = tmp_path / "stale.jsonl"
    stale.write_text(json.dumps({
        "detector": "x",
        "left": {"key": "soot.Gone#f():1-5"},
        "right": {"key": "sootup.Gone#g():1-5"},
    }) + "\n")
    # unresolvable fragments: ingest-time hard error (likely wrong snapshot)
    p = remap(
        "ingest", "--format", "generic", "--report", stale,
        "--left", left, "--right", right, "--out", tmp_path / "o.jsonl",
    )
    assert p.returncode == 1
    # a pairs file with ids that no longer exist: score-time hard error
    stale_pairs = tmp_path / "stale_pairs.jsonl"
    stale_pairs.write_text(json.dumps({
        "detector": "x",
        "left": {"key": "soot.Gone#f():1-5"},
        "right": {"key": "sootup.Gone#g():1-5"},
    }) + "\n")
    p = remap(
        "score", "--pairs", stale_pairs, "--left", left, "--right", right,
        "--out", tmp_path / "s.jsonl",
    )
    assert p.returncode == 1
    err = json.loads(p.stderr.strip().split("\n")[-1])
    assert "soot.Gone#f():1-5" in err["message"]


def test_reruns_are_byte_identical(pipeline, tmp_path):
    work, left, right, pairs = pipeline
    outs = []
    for name in ("a", "b"):
        out = tmp_path / f"{name}.jsonl"
        p = remap(
            "score", "--pairs", pairs, "--left", left, "--right", right,
            "--task", "cm", "--threshold", "0.6", "--rules", "soot-sootup",
            "--jobs", "3" if name == "b" else "1", "--out", out,
        )
        assert p.returncode == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def _write_labels(path, left_snap, right_snap):
    import csv

    from remap.records import load_snapshot

    left = load_snapshot(left_snap)
    right = load_snapshot(right_snap)
    planted = json.loads((FIXTURE / "planted.json").read_text())
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["left_key", "right_key", "clone_type", "is_code_mapping", "code_type", "tools"])
        for row in planted["mappings"]:
            w.writerow([
                left.resolve_key(row["left"]).id, right.resolve_key(row["right"]).id,
                row["clone_type"], "true", "production", "fixture",
            ])
        for row in planted["non_mappings"]:
            w.writerow([
                left.resolve_key(row["left"]).id, right.resolve_key(row["right"]).id,
                row["clone_type"], "false", "production", "fixture",
            ])


def test_eval_sweep_tune_ablate_impact(pipeline, tmp_path):
    work, left, right, pairs = pipeline
    labels = tmp_path / "labels.csv"
    _write_labels(labels, left, right)
    scores = tmp_path / "scores.jsonl"
    p = remap(
        "score", "--pairs", pairs, "--left", left, "--right", right,
        "--task", "cm", "--threshold", "0.6", "--rules", "soot-sootup", "--out", scores,
    )
    assert p.returncode == 0

    p = remap("eval", "--scored", scores, "--labels", labels, "--task", "cm",
              "--out", tmp_path / "metrics.json")
    assert p.returncode == 0, p.stderr
    metrics = json.loads(p.stdout.strip().split("\n")[-1])
    assert metrics["precision"] == 1.0 and metrics["recall"] == 1.0

    p = remap("sweep", "--scored", scores, "--labels", labels, "--task", "cm",
              "--thresholds", "0.0:1.0:0.05", "--csv", tmp_path / "sweep.csv",
              "--out", tmp_path / "sweep.json")
    assert p.returncode == 0, p.stderr
    sweep_out = json.loads((tmp_path / "sweep.json").read_text())
    assert 0.55 <= sweep_out["best_threshold"] <= 0.8
    assert (tmp_path / "sweep.csv").read_text().startswith("threshold,")

    p = remap("tune", "--scored", scores, "--labels", labels, "--task", "cm",
              "--grid-step", "0.25", "--out", tmp_path / "weights.json")
    assert p.returncode == 0, p.stderr
    weights = json.loads((tmp_path / "weights.json").read_text())
    assert abs(weights["alpha"] + weights["beta"] + weights["theta"] - 1.0) < 1e-9

    p = remap("ablate", "--pairs", pairs, "--left", left, "--right", right,
              "--labels", labels, "--task", "cm", "--threshold", "0.6",
              "--rules", "soot-sootup", "--out", tmp_path / "ablate.json")
    assert p.returncode == 0, p.stderr
    ablate = json.loads((tmp_path / "ablate.json").read_text())
    assert set(ablate) == {"ALL", "EXR1", "EXR2", "EXR3", "EXR4"}
    assert ablate["ALL"]["metrics"]["avg_f1"] >= ablate["EXR2"]["metrics"]["avg_f1"]

    p = remap("impact", "--pairs", pairs, "--left", left, "--right", right,
              "--setting", "exr2", "--rules", "soot-sootup",
              "--out", tmp_path / "impact.json")
    assert p.returncode == 0, p.stderr
    impact = json.loads((tmp_path / "impact.json").read_text())
    assert impact["EXR2"]["production"]["affected"] > 0


def test_pairs_command_exhaustive(pipeline, tmp_path):
    work, left, right, _ = pipeline
    out = tmp_path / "exhaustive.jsonl"
    p = remap("pairs", "--mode", "exhaustive", "--left", left, "--right", right,
              "--min-loc", "5", "--out", out)
    assert p.returncode == 0, p.stderr
    assert len(out.read_text().strip().split("\n")) == 756


def test_normalize_command(pipeline, tmp_path):
    work, left, right, _ = pipeline
    out = tmp_path / "norm.jsonl"
    p = remap("normalize", "--snapshot", left, "--rules", "soot-sootup", "--out", out)
    assert p.returncode == 0, p.stderr
    first = json.loads(out.read_text().split("\n")[0])
    assert "method_name" in first and "class_doc" in first


def test_config_dir_env_var(pipeline, tmp_path, monkeypatch):
    import os
    import subprocess

    work, left, right, pairs = pipeline
    config_dir = tmp_path / "configs"
    config_dir.mkdir()
    from remap.normalizer import SOOT_SOOTUP_RULES

    SOOT_SOOTUP_RULES.save(config_dir / "myrules.json")
    env = dict(os.environ, REMAP_CONFIG_DIR=str(config_dir))
    proc = subprocess.run(
        [sys.executable, "-m", "remap", "score", "--pairs", str(pairs),
         "--left", str(left), "--right", str(right), "--task", "cm",
         "--threshold", "0.6", "--rules", "myrules.json",
         "--out", str(tmp_path / "s.jsonl")],
        capture_output=True, text=True, env=env,
    )
    assert proc.returncode == 0, proc.stderr
    summary = json.loads(proc.stdout.strip().split("\n")[-1])
    assert summary["filt"] == 15
