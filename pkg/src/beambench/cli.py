"""Command-line entry points: generate, run, ablate, grade, report.

Exit codes: 0 success, 2 validation/configuration problems, 3 backend
failures, 4 I/O failures.  Endpoint credentials come from an environment
variable only (default BEAMBENCH_API_KEY), never from a flag.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import document
from .backends import BackendError, ManifestMismatch, RunRecord, TranscriptStore
from .grading import grade_response
from .metrics import render_robustness
from .model import ValidationError
from .prompts import PromptConfig
from .report import render_report
from .runner import (
    RunManifest,
    aggregate,
    generate_tree,
    prepare_cases,
    representative_cases,
    resolve_cases,
    run_ablation,
    run_evaluation,
)

EXIT_VALIDATION = 2
EXIT_BACKEND = 3
EXIT_IO = 4

_PROMPT_SLUGS = {
    "proposed": PromptConfig(),
    "no_chain_of_thought": PromptConfig(name="w/o chain of thought", include_chain_of_thought=False),
    "no_complete_example": PromptConfig(name="w/o complete example", include_complete_example=False),
    "no_function_usage_examples": PromptConfig(
        name="w/o function usage examples", include_function_examples=False
    ),
    "no_constraints": PromptConfig(name="w/o constraints", include_constraints=False),
}


@click.group()
def main() -> None:
    """Benchmark and evaluation harness for beam structural analysis."""


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


@main.command()
@click.option("--benchmark/--no-benchmark", default=True, help="include the 8-family sweep benchmark")
@click.option("--extended", is_flag=True, help="include the three extended tasks")
@click.option("-o", "--out", "out_dir", type=click.Path(path_type=Path), default=Path("generated"))
def generate(benchmark: bool, extended: bool, out_dir: Path) -> None:
    """Emit problem-documents plus a manifest of oracle answers."""
    try:
        written = generate_tree(out_dir, include_benchmark=benchmark, include_extended=extended)
    except (ValidationError, ValueError) as exc:
        _fail(EXIT_VALIDATION, str(exc))
    except OSError as exc:
        _fail(EXIT_IO, str(exc))
    click.echo(f"wrote {len(written)} files under {out_dir}")


def _mock_params(error_rate: float, mock_rates: Path | None) -> dict:
    params: dict = {"error_rate": error_rate}
    if mock_rates is not None:
        loaded = json.loads(mock_rates.read_text())
        if "rates" in loaded or "ablation_rates" in loaded or "mode_weights" in loaded:
            params.update(loaded)
        else:
            params["rates"] = loaded
    return params


def _common_manifest(
    backend: str,
    cases: str,
    n: int,
    concurrency: int,
    seed: int,
    temperature: float,
    max_tokens: int,
    out_dir: Path,
    prompt: str,
    endpoint: str | None,
    model_id: str | None,
    api_key_env: str,
    transcript: Path | None,
    error_rate: float,
    mock_rates: Path | None,
    sandbox_cmd: str | None,
    agent_mode: str,
) -> RunManifest:
    if prompt not in _PROMPT_SLUGS:
        _fail(EXIT_VALIDATION, f"unknown prompt config {prompt!r}; one of {sorted(_PROMPT_SLUGS)}")
    params: dict = {}
    if backend == "mock":
        params = _mock_params(error_rate, mock_rates)
    elif backend == "live":
        if not endpoint or not model_id:
            _fail(EXIT_VALIDATION, "live backend needs --endpoint and --model-id")
        params = {"base_url": endpoint, "model_id": model_id, "api_key_env": api_key_env}
    elif backend == "replay":
        if transcript is None:
            _fail(EXIT_VALIDATION, "replay backend needs --transcript")
        params = {"transcript": str(transcript)}
    elif backend == "agent":
        if not endpoint or not model_id:
            _fail(EXIT_VALIDATION, "agent backend needs --endpoint and --model-id")
        params = {
            "chat": "live",
            "chat_params": {"base_url": endpoint, "model_id": model_id, "api_key_env": api_key_env},
            "mode": agent_mode,
        }
        if sandbox_cmd:
            params["sandbox_cmd"] = sandbox_cmd.split()
    return RunManifest(
        backend=backend,
        backend_params=params,
        cases=cases,
        n_total=n,
        concurrency=concurrency,
        prompt=_PROMPT_SLUGS[prompt],
        seed=seed,
        temperature=temperature,
        max_tokens=max_tokens,
        out_dir=str(out_dir),
    )


_RUN_OPTIONS = [
    click.option("--backend", type=click.Choice(["mock", "live", "replay", "agent"]), default="mock"),
    click.option("-n", "--runs", "n", type=int, default=500, help="independent runs per case"),
    click.option("--concurrency", type=int, default=8),
    click.option("--seed", type=int, default=0),
    click.option("--temperature", type=float, default=0.7),
    click.option("--max-tokens", type=int, default=2048),
    click.option("-o", "--out", "out_dir", type=click.Path(path_type=Path), default=Path("out")),
    click.option("--prompt", default="proposed", help="prompt config slug"),
    click.option("--endpoint", default=None, help="chat-completions base URL (live/agent)"),
    click.option("--model-id", default=None, help="model identifier at the endpoint"),
    click.option("--api-key-env", default="BEAMBENCH_API_KEY", show_default=True),
    click.option("--transcript", type=click.Path(path_type=Path), default=None, help="replay source"),
    click.option("--error-rate", type=float, default=0.0, help="mock error rate"),
    click.option("--mock-rates", type=click.Path(path_type=Path, exists=True), default=None),
    click.option("--sandbox-cmd", default=None, help="command starting the sandbox runner"),
    click.option("--agent-mode", type=click.Choice(["auto", "script", "model_document"]), default="auto"),
]


def _with_run_options(fn):
    for option in reversed(_RUN_OPTIONS):
        fn = option(fn)
    return fn


@main.command()
@click.option("--cases", default="benchmark", help="benchmark | extended | families:A,B | dir:PATH")
@_with_run_options
def run(cases: str, backend: str, n: int, concurrency: int, seed: int, temperature: float,
        max_tokens: int, out_dir: Path, prompt: str, endpoint: str | None, model_id: str | None,
        api_key_env: str, transcript: Path | None, error_rate: float, mock_rates: Path | None,
        sandbox_cmd: str | None, agent_mode: str) -> None:
    """Run (or resume) an evaluation batch and render its report."""
    manifest = _common_manifest(backend, cases, n, concurrency, seed, temperature, max_tokens,
                                out_dir, prompt, endpoint, model_id, api_key_env, transcript,
                                error_rate, mock_rates, sandbox_cmd, agent_mode)
    bar = _progress_printer()
    try:
        result = run_evaluation(manifest, progress=bar)
    except (ValidationError, ManifestMismatch, document.ParseError, KeyError, ValueError) as exc:
        _fail(EXIT_VALIDATION, str(exc))
    except BackendError as exc:
        _fail(EXIT_BACKEND, str(exc))
    except OSError as exc:
        _fail(EXIT_IO, str(exc))
    for stats in result.report.cases:
        click.echo(f"{stats.case_id}: reliability {float(stats.reliability):.3f} ({stats.correct}/{stats.total})")
    for family in result.report.families():
        click.echo(f"{family}: robustness {render_robustness(result.report.family_robustness(family))}")
    click.echo(f"report written to {manifest.out_dir}")


@main.command()
@_with_run_options
def ablate(backend: str, n: int, concurrency: int, seed: int, temperature: float,
           max_tokens: int, out_dir: Path, prompt: str, endpoint: str | None, model_id: str | None,
           api_key_env: str, transcript: Path | None, error_rate: float, mock_rates: Path | None,
           sandbox_cmd: str | None, agent_mode: str) -> None:
    """Run all five prompt configurations against the three extended tasks."""
    manifest = _common_manifest(backend, "extended", n, concurrency, seed, temperature, max_tokens,
                                out_dir, prompt, endpoint, model_id, api_key_env, transcript,
                                error_rate, mock_rates, sandbox_cmd, agent_mode)
    bar = _progress_printer()
    try:
        ablation, _ = run_ablation(manifest, progress=bar)
    except (ValidationError, ManifestMismatch, ValueError) as exc:
        _fail(EXIT_VALIDATION, str(exc))
    except BackendError as exc:
        _fail(EXIT_BACKEND, str(exc))
    except OSError as exc:
        _fail(EXIT_IO, str(exc))
    path = Path(manifest.out_dir) / "ablation.txt"
    click.echo(path.read_text().rstrip())


def _load_run_dir(run_dir: Path) -> tuple[RunManifest, list[RunRecord]]:
    manifest_path = run_dir / "manifest.json"
    if not manifest_path.is_file():
        _fail(EXIT_VALIDATION, f"{run_dir} has no manifest.json")
    raw = json.loads(manifest_path.read_text())
    prompt_raw = raw.get("prompt", {})
    prompt = PromptConfig(
        name=prompt_raw.get("name", "Proposed prompt template"),
        include_role=prompt_raw.get("include_role", True),
        include_chain_of_thought=prompt_raw.get("include_chain_of_thought", True),
        include_complete_example=prompt_raw.get("include_complete_example", True),
        include_function_examples=prompt_raw.get("include_function_examples", True),
        include_constraints=prompt_raw.get("include_constraints", True),
        asset_version=prompt_raw.get("asset_version", "v1"),
    )
    manifest = RunManifest(
        backend=raw["backend"],
        backend_params=raw.get("backend_params", {}),
        cases=raw["cases"],
        n_total=raw["n_total"],
        concurrency=raw.get("concurrency", 8),
        prompt=prompt,
        seed=raw.get("seed", 0),
        temperature=raw.get("temperature", 0.7),
        max_tokens=raw.get("max_tokens", 2048),
        out_dir=str(run_dir),
    )
    with TranscriptStore.open(run_dir / "transcript.jsonl", manifest.fingerprint()) as store:
        records = store.records()
    return manifest, records


@main.command(name="grade")
@click.option("--run-dir", type=click.Path(path_type=Path, exists=True), required=True)
@click.option("-o", "--out", "out_dir", type=click.Path(path_type=Path), required=True)
def grade_cmd(run_dir: Path, out_dir: Path) -> None:
    """Re-grade an existing transcript store with the current grader."""
    try:
        manifest, records = _load_run_dir(run_dir)
        cases = resolve_cases(manifest.cases)
        prepared = {p.case.case_id: p for p in prepare_cases(cases, manifest.prompt)}
        regraded = []
        for record in records:
            p = prepared.get(record.case_id)
            if p is None:
                continue
            grade = grade_response(record.to_response(), p.case.model, p.oracle)
            regraded.append(
                RunRecord(
                    case_id=record.case_id,
                    fingerprint=record.fingerprint,
                    run_index=record.run_index,
                    params=record.params,
                    raw_text=record.raw_text,
                    artifacts=record.artifacts,
                    failure=record.failure,
                    grade=grade.to_dict(),
                    latency_s=record.latency_s,
                    ts=record.ts,
                )
            )
        out_dir.mkdir(parents=True, exist_ok=True)
        new_manifest = RunManifest(**{**manifest.__dict__, "out_dir": str(out_dir)})
        with TranscriptStore.open(out_dir / "transcript.jsonl", new_manifest.fingerprint()) as store:
            for record in regraded:
                store.append(record)
        report = aggregate(regraded, cases, manifest.n_total, manifest.fingerprint())
        render_report(report, out_dir, diagram_cases=representative_cases(manifest.cases))
    except (ManifestMismatch, ValidationError, ValueError) as exc:
        _fail(EXIT_VALIDATION, str(exc))
    except OSError as exc:
        _fail(EXIT_IO, str(exc))
    click.echo(f"re-graded {len(regraded)} records into {out_dir}")


@main.command(name="report")
@click.option("--run-dir", type=click.Path(path_type=Path, exists=True), required=True)
@click.option("--formats", default="json,csv,svg", show_default=True)
def report_cmd(run_dir: Path, formats: str) -> None:
    """Re-render the report files from an existing transcript store."""
    try:
        manifest, records = _load_run_dir(run_dir)
        cases = resolve_cases(manifest.cases)
        report = aggregate(records, cases, manifest.n_total, manifest.fingerprint())
        written = render_report(
            report,
            run_dir,
            formats=tuple(formats.split(",")),
            diagram_cases=representative_cases(manifest.cases),
        )
    except (ManifestMismatch, ValidationError, ValueError) as exc:
        _fail(EXIT_VALIDATION, str(exc))
    except OSError as exc:
        _fail(EXIT_IO, str(exc))
    click.echo(f"rendered {len(written)} files under {run_dir}")


def _progress_printer():
    state = {"last": -1}

    def advance(done: int, total: int) -> None:
        pct = done * 100 // total
        if pct != state["last"] and pct % 10 == 0:
            state["last"] = pct
            click.echo(f"... {done}/{total} ({pct}%)", err=True)

    return advance


if __name__ == "__main__":
    main()
