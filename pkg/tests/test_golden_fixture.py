"""Committed golden run: re-processing it must reproduce committed bytes.

The fixture under tests/fixtures/golden_run was produced once by
`run_evaluation` (mock backend, families:SS-I, n=3, seed=17) and
committed.  Re-rendering, re-grading and replaying it all have to agree
with the committed report; any drift in the grader, the aggregation or
the renderers shows up here as a byte diff.
"""

import json
import shutil
from pathlib import Path

from click.testing import CliRunner

from beambench.backends import ReplayBackend
from beambench.cli import main
from beambench.runner import RunManifest, run_evaluation

FIXTURE = Path(__file__).parent / "fixtures" / "golden_run"


def fixture_manifest(out_dir: str) -> RunManifest:
    raw = json.loads((FIXTURE / "manifest.json").read_text())
    return RunManifest(
        backend=raw["backend"],
        backend_params=raw["backend_params"],
        cases=raw["cases"],
        n_total=raw["n_total"],
        concurrency=raw["concurrency"],
        seed=raw["seed"],
        temperature=raw["temperature"],
        max_tokens=raw["max_tokens"],
        out_dir=out_dir,
    )


def test_rerender_reproduces_committed_report(tmp_path):
    work = tmp_path / "golden"
    shutil.copytree(FIXTURE, work)
    (work / "report.json").unlink()
    (work / "cases.csv").unlink()
    runner = CliRunner()
    result = runner.invoke(main, ["report", "--run-dir", str(work)])
    assert result.exit_code == 0, result.output
    for name in ("report.json", "cases.csv", "robustness.csv", "curve_SS-I.svg"):
        assert (work / name).read_bytes() == (FIXTURE / name).read_bytes(), name


def test_regrade_reproduces_committed_stats(tmp_path):
    runner = CliRunner()
    out = tmp_path / "regraded"
    result = runner.invoke(main, ["grade", "--run-dir", str(FIXTURE), "-o", str(out)])
    assert result.exit_code == 0, result.output
    committed = json.loads((FIXTURE / "report.json").read_text())
    regraded = json.loads((out / "report.json").read_text())
    assert regraded["cases"] == committed["cases"]
    assert regraded["error_histogram"] == committed["error_histogram"]


def test_fresh_mock_run_still_matches_committed_bytes(tmp_path):
    """The seeded mock pipeline itself must not drift."""
    manifest = fixture_manifest(str(tmp_path / "fresh"))
    run_evaluation(manifest)
    assert (tmp_path / "fresh" / "report.json").read_bytes() == (
        FIXTURE / "report.json"
    ).read_bytes()


def test_replay_of_committed_store_matches(tmp_path):
    replay_manifest = RunManifest(
        backend="replay",
        backend_params={"transcript": str(FIXTURE / "transcript.jsonl")},
        cases="families:SS-I",
        n_total=3,
        concurrency=4,
        seed=17,
        out_dir=str(tmp_path / "replayed"),
    )
    result = run_evaluation(replay_manifest)  # backend built from the manifest
    committed = json.loads((FIXTURE / "report.json").read_text())
    replayed = json.loads((tmp_path / "replayed" / "report.json").read_text())
    assert replayed["cases"] == committed["cases"]
    assert replayed["error_histogram"] == committed["error_histogram"]
    assert isinstance(result.report.manifest_fingerprint, str)
