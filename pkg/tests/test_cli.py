import json

from click.testing import CliRunner

from beambench.cli import main


def test_generate_and_run_from_dir(tmp_path):
    runner = CliRunner()
    gen_dir = tmp_path / "gen"
    result = runner.invoke(main, ["generate", "--no-benchmark", "--extended", "-o", str(gen_dir)])
    assert result.exit_code == 0, result.output
    assert (gen_dir / "problems" / "EXT-A.json").is_file()

    out_dir = tmp_path / "run"
    result = runner.invoke(
        main,
        [
            "run",
            "--cases",
            f"dir:{gen_dir}",
            "--backend",
            "mock",
            "-n",
            "4",
            "--concurrency",
            "2",
            "-o",
            str(out_dir),
        ],
    )
    assert result.exit_code == 0, result.output
    assert "EXT-A: reliability 1.000" in result.output
    assert (out_dir / "report.json").is_file()


def test_run_families_with_error_rate(tmp_path):
    runner = CliRunner()
    out_dir = tmp_path / "run"
    result = runner.invoke(
        main,
        ["run", "--cases", "families:OH-I", "-n", "6", "--error-rate", "0.5",
         "--seed", "3", "-o", str(out_dir)],
    )
    assert result.exit_code == 0, result.output
    assert "OH-I: robustness" in result.output
    report = json.loads((out_dir / "report.json").read_text())
    assert len(report["cases"]) == 11


def test_ablate_prints_table(tmp_path):
    runner = CliRunner()
    rates = {
        "ablation_rates": {
            "Proposed prompt template": 0.0,
            "w/o complete example": 1.0,
        }
    }
    rates_path = tmp_path / "rates.json"
    rates_path.write_text(json.dumps(rates))
    result = runner.invoke(
        main,
        ["ablate", "-n", "10", "--mock-rates", str(rates_path), "-o", str(tmp_path / "abl")],
    )
    assert result.exit_code == 0, result.output
    assert "Prompt configuration" in result.output
    assert "--" in result.output
    assert "w/o function usage examples" in result.output


def test_report_rerender(tmp_path):
    runner = CliRunner()
    out_dir = tmp_path / "run"
    assert (
        runner.invoke(
            main, ["run", "--cases", "extended", "-n", "3", "-o", str(out_dir)]
        ).exit_code
        == 0
    )
    (out_dir / "report.json").unlink()
    result = runner.invoke(main, ["report", "--run-dir", str(out_dir)])
    assert result.exit_code == 0, result.output
    assert (out_dir / "report.json").is_file()


def test_grade_regrades_into_new_dir(tmp_path):
    runner = CliRunner()
    run_dir = tmp_path / "run"
    assert (
        runner.invoke(
            main,
            ["run", "--cases", "extended", "-n", "3", "--error-rate", "0.5", "-o", str(run_dir)],
        ).exit_code
        == 0
    )
    out_dir = tmp_path / "regraded"
    result = runner.invoke(main, ["grade", "--run-dir", str(run_dir), "-o", str(out_dir)])
    assert result.exit_code == 0, result.output
    original = json.loads((run_dir / "report.json").read_text())
    regraded = json.loads((out_dir / "report.json").read_text())
    assert original["cases"] == regraded["cases"]


def test_live_backend_needs_endpoint(tmp_path):
    runner = CliRunner()
    result = runner.invoke(main, ["run", "--backend", "live", "-o", str(tmp_path)])
    assert result.exit_code == 2
    assert "endpoint" in result.output


def test_unknown_prompt_slug(tmp_path):
    runner = CliRunner()
    result = runner.invoke(main, ["run", "--prompt", "fancy", "-o", str(tmp_path)])
    assert result.exit_code == 2


def test_resume_with_conflicting_manifest_fails(tmp_path):
    runner = CliRunner()
    out_dir = tmp_path / "run"
    args = ["run", "--cases", "extended", "-n", "2", "-o", str(out_dir)]
    assert runner.invoke(main, args).exit_code == 0
    result = runner.invoke(main, args + ["--seed", "99"])
    assert result.exit_code == 2
    assert "refusing" in result.output
