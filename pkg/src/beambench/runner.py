"""Batch orchestration: resolve cases, invoke backends, grade, aggregate.

Everything here is deterministic given (manifest, backend behavior): task
seeds derive from (manifest seed, case id, run index), aggregation is a
commutative fold over run records, and reports are rendered from sorted
structures, so completion order and concurrency level never change the
output bytes.  Runs are resumable: completed (case, fingerprint, run)
triples found in the transcript store are never re-invoked.
"""

from __future__ import annotations

import hashlib
import json
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable

from . import document
from .backends import (
    AgentBackend,
    Backend,
    BackendRequest,
    LiveBackend,
    MockBackend,
    ReplayBackend,
    RunRecord,
    SandboxClient,
    TranscriptStore,
)
from .benchmark import (
    Case,
    FAMILY_IDS,
    benchmark_cases,
    extended_cases,
    generate_benchmark,
    generate_sweep,
    render_problem_text,
)
from .grading import grade_response
from .metrics import AblationReport, CaseStats, EvaluationReport, histogram
from .model import BeamModel, ReactionSet, validate
from .prompts import PromptBundle, PromptConfig, ablation_grid, assemble
from .report import render_ablation, render_report
from .statics import solve_reactions


@dataclass(frozen=True)
class RunManifest:
    """Everything that determines an evaluation (modulo live nondeterminism).

    ``concurrency`` and ``out_dir`` affect scheduling and placement only,
    so they stay outside the fingerprint.
    """

    backend: str = "mock"
    backend_params: dict[str, Any] = field(default_factory=dict)
    cases: str = "benchmark"
    n_total: int = 500
    concurrency: int = 8
    prompt: PromptConfig = PromptConfig()
    seed: int = 0
    temperature: float = 0.7
    max_tokens: int = 2048
    out_dir: str = "out"

    def fingerprint(self) -> str:
        payload = {
            "backend": self.backend,
            "backend_params": self.backend_params,
            "cases": self.cases,
            "n_total": self.n_total,
            "prompt": {
                "name": self.prompt.name,
                "bits": self.prompt.bits(),
                "asset_version": self.prompt.asset_version,
            },
            "seed": self.seed,
            "temperature": self.temperature,
            "max_tokens": self.max_tokens,
        }
        blob = json.dumps(payload, sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()

    def to_dict(self) -> dict[str, Any]:
        return {
            "backend": self.backend,
            "backend_params": self.backend_params,
            "cases": self.cases,
            "n_total": self.n_total,
            "concurrency": self.concurrency,
            "prompt": {
                "name": self.prompt.name,
                "include_role": self.prompt.include_role,
                "include_chain_of_thought": self.prompt.include_chain_of_thought,
                "include_complete_example": self.prompt.include_complete_example,
                "include_function_examples": self.prompt.include_function_examples,
                "include_constraints": self.prompt.include_constraints,
                "asset_version": self.prompt.asset_version,
            },
            "seed": self.seed,
            "temperature": self.temperature,
            "max_tokens": self.max_tokens,
            "out_dir": self.out_dir,
            "fingerprint": self.fingerprint(),
        }


def reactions_to_dict(model: BeamModel, reactions: ReactionSet) -> list[dict[str, Any]]:
    out = []
    for entry in reactions.entries:
        support = model.supports[entry.support_index]
        item: dict[str, Any] = {
            "support_index": entry.support_index,
            "kind": support.kind.value,
            "position_m": support.position_m,
            "vertical_kN": entry.vertical_kN,
        }
        if entry.horizontal_kN is not None:
            item["horizontal_kN"] = entry.horizontal_kN
        if entry.moment_kNm is not None:
            item["moment_kNm"] = entry.moment_kNm
        out.append(item)
    return out


# --- case resolution ----------------------------------------------------------


def resolve_cases(spec: str) -> list[Case]:
    """Turn a manifest case selector into concrete graded cases."""
    if spec == "benchmark":
        return benchmark_cases()
    if spec == "extended":
        return extended_cases()
    if spec.startswith("families:"):
        names = [n.strip() for n in spec.split(":", 1)[1].split(",") if n.strip()]
        cases: list[Case] = []
        for name in names:
            if name not in FAMILY_IDS:
                raise KeyError(f"unknown benchmark family {name!r}")
            for pos, model in generate_sweep(name):
                cases.append(Case(case_id=model.id, model=model, family=name, position=pos))
        return cases
    if spec.startswith("dir:"):
        return _cases_from_dir(Path(spec.split(":", 1)[1]))
    raise ValueError(f"unknown case selector {spec!r}")


def _cases_from_dir(root: Path) -> list[Case]:
    problems = sorted((root / "problems").glob("*.json")) or sorted(root.glob("*.json"))
    if not problems:
        raise FileNotFoundError(f"no problem-documents under {root}")
    required: dict[str, tuple[str, ...]] = {}
    meta: dict[str, dict[str, Any]] = {}
    manifest_path = root / "manifest.json"
    if manifest_path.is_file():
        manifest = json.loads(manifest_path.read_text())
        for item in manifest.get("cases", []):
            required[item["case_id"]] = tuple(item.get("required_outputs", ("reactions",)))
            meta[item["case_id"]] = item
    cases = []
    for path in problems:
        model = document.parse(path.read_text())
        info = meta.get(model.id, {})
        cases.append(
            Case(
                case_id=model.id,
                model=model,
                family=info.get("family"),
                position=info.get("position"),
                required_outputs=required.get(model.id, ("reactions",)),
            )
        )
    return cases


def representative_cases(spec: str) -> list[Case]:
    """Cases worth a diagram plot: family bases and extended tasks."""
    if spec == "benchmark" or spec.startswith("families:"):
        if spec.startswith("families:"):
            wanted = {n.strip() for n in spec.split(":", 1)[1].split(",")}
        else:
            wanted = set(FAMILY_IDS)
        return [
            Case(case_id=family, model=model, family=family)
            for family, model in generate_benchmark()
            if family in wanted
        ]
    if spec == "extended":
        return extended_cases()
    return []


# --- backend construction -------------------------------------------------------


def build_backend(manifest: RunManifest, config_name: str | None = None) -> Backend:
    params = dict(manifest.backend_params)
    if manifest.backend == "mock":
        rates = params.get("rates", {})
        error_rate = params.get("error_rate", 0.0)
        ablation_rates = params.get("ablation_rates", {})
        if config_name is not None and config_name in ablation_rates:
            per_config = ablation_rates[config_name]
            if isinstance(per_config, dict):
                rates = {**rates, **per_config}
            else:
                error_rate = float(per_config)
        return MockBackend(
            error_rate=error_rate,
            rates=rates,
            mode_weights=params.get("mode_weights"),
            seed=manifest.seed,
        )
    if manifest.backend == "live":
        return LiveBackend(
            base_url=params["base_url"],
            model_id=params["model_id"],
            api_key_env=params.get("api_key_env", "BEAMBENCH_API_KEY"),
            timeout_s=params.get("timeout_s", 120.0),
            max_retries=params.get("max_retries", 4),
        )
    if manifest.backend == "replay":
        return ReplayBackend.from_path(Path(params["transcript"]))
    if manifest.backend == "agent":
        chat_manifest = replace(
            manifest, backend=params.get("chat", "live"), backend_params=params.get("chat_params", {})
        )
        chat = build_backend(chat_manifest, config_name)
        mode = params.get("mode", "auto")
        sandbox_cmd = params.get("sandbox_cmd")
        executor = None
        if mode in ("auto", "script") and sandbox_cmd:
            executor = SandboxClient(list(sandbox_cmd))
            if mode == "auto":
                try:
                    executor.start()
                    health = executor.health()
                    mode = "script" if health.get("opensees_available") else "model_document"
                except Exception:
                    mode = "model_document"
        if mode == "auto":
            mode = "model_document"
        if mode == "script" and executor is None:
            raise ValueError("agent script mode needs backend_params.sandbox_cmd")
        return AgentBackend(
            chat,
            executor=executor if mode == "script" else None,
            mode=mode,
            script_timeout_s=params.get("script_timeout_s", 30.0),
        )
    raise ValueError(f"unknown backend {manifest.backend!r}")


# --- evaluation ------------------------------------------------------------------


@dataclass(frozen=True)
class PreparedCase:
    case: Case
    bundle: PromptBundle
    oracle: ReactionSet


def prepare_cases(cases: list[Case], prompt: PromptConfig) -> list[PreparedCase]:
    prepared = []
    for case in cases:
        validate(case.model)
        text = render_problem_text(case.model, case.required_outputs)
        prepared.append(
            PreparedCase(
                case=case,
                bundle=assemble(prompt, text),
                oracle=solve_reactions(case.model),
            )
        )
    return prepared


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _execute_one(
    backend: Backend, manifest: RunManifest, prepared: PreparedCase, run_index: int
) -> RunRecord:
    request = BackendRequest(
        case_id=prepared.case.case_id,
        bundle=prepared.bundle,
        run_index=run_index,
        temperature=manifest.temperature,
        max_tokens=manifest.max_tokens,
        model=prepared.case.model,
    )
    start = time.monotonic()
    response = backend.invoke(request)
    latency = response.latency_s or (time.monotonic() - start)
    grade = grade_response(response, prepared.case.model, prepared.oracle)
    return RunRecord(
        case_id=prepared.case.case_id,
        fingerprint=prepared.bundle.fingerprint,
        run_index=run_index,
        params=request.params(),
        raw_text=response.raw_text,
        artifacts=dict(response.artifacts),
        failure={"kind": response.failure.kind, "detail": response.failure.detail}
        if response.failure
        else None,
        grade=grade.to_dict(),
        latency_s=latency,
        ts=_now(),
    )


def _run_batch(
    backend: Backend,
    manifest: RunManifest,
    prepared: list[PreparedCase],
    store: TranscriptStore,
    progress: Callable[[int, int], None] | None = None,
) -> None:
    done_keys = store.completed_keys
    tasks = [
        (p, idx)
        for p in prepared
        for idx in range(manifest.n_total)
        if (p.case.case_id, p.bundle.fingerprint, idx) not in done_keys
    ]
    total = len(tasks)
    finished = 0
    if not tasks:
        return
    workers = max(1, manifest.concurrency)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_execute_one, backend, manifest, p, idx) for p, idx in tasks]
        try:
            for future in as_completed(futures):
                store.append(future.result())
                finished += 1
                if progress:
                    progress(finished, total)
        except BaseException:
            for future in futures:
                future.cancel()
            raise


def aggregate(
    records: list[RunRecord],
    cases: list[Case],
    n_total: int,
    manifest_fingerprint: str,
) -> EvaluationReport:
    """Commutative fold of run records into per-case statistics."""
    counts: dict[str, list[int]] = {case.case_id: [0, 0] for case in cases}
    errors: list[str | None] = []
    fingerprints: set[str] = set()
    for record in records:
        if record.case_id not in counts:
            continue
        fingerprints.add(record.fingerprint)
        bucket = counts[record.case_id]
        bucket[1] += 1
        if record.grade and record.grade.get("verdict") == "correct":
            bucket[0] += 1
        elif record.grade:
            errors.append(record.grade.get("error_class"))
    stats = tuple(
        CaseStats(
            case_id=case.case_id,
            correct=counts[case.case_id][0],
            total=counts[case.case_id][1],
            family=case.family,
            position=case.position,
        )
        for case in cases
    )
    return EvaluationReport(
        n_total=n_total,
        manifest_fingerprint=manifest_fingerprint,
        prompt_fingerprints=tuple(sorted(fingerprints)),
        cases=stats,
        error_histogram=histogram(errors),
    )


@dataclass(frozen=True)
class RunResult:
    report: EvaluationReport
    store_path: Path
    written: tuple[Path, ...]


def run_evaluation(
    manifest: RunManifest,
    backend: Backend | None = None,
    cases: list[Case] | None = None,
    formats: tuple[str, ...] = ("json", "csv", "svg"),
    progress: Callable[[int, int], None] | None = None,
) -> RunResult:
    """Run (or resume) a full evaluation batch and render its report."""
    out_dir = Path(manifest.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if cases is None:
        cases = resolve_cases(manifest.cases)
    prepared = prepare_cases(cases, manifest.prompt)
    if backend is None:
        backend = build_backend(manifest)
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest.to_dict(), indent=2, sort_keys=True) + "\n"
    )
    store_path = out_dir / "transcript.jsonl"
    with TranscriptStore.open(store_path, manifest.fingerprint()) as store:
        _run_batch(backend, manifest, prepared, store, progress)
        records = store.records()
    report = aggregate(records, cases, manifest.n_total, manifest.fingerprint())
    written = render_report(
        report,
        out_dir,
        formats=formats,
        diagram_cases=representative_cases(manifest.cases) if "svg" in formats else None,
    )
    return RunResult(report=report, store_path=store_path, written=tuple(written))


def run_ablation(
    manifest: RunManifest,
    backend_factory: Callable[[PromptConfig], Backend] | None = None,
    formats: tuple[str, ...] = ("json", "csv", "txt"),
    progress: Callable[[int, int], None] | None = None,
) -> tuple[AblationReport, tuple[Path, ...]]:
    """All five prompt configurations against the three extended tasks."""
    out_dir = Path(manifest.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    tasks = extended_cases()
    configs = ablation_grid()
    if backend_factory is None:
        backend_factory = lambda config: build_backend(manifest, config.name)  # noqa: E731
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest.to_dict(), indent=2, sort_keys=True) + "\n"
    )
    store_path = out_dir / "transcript.jsonl"
    grid: dict[tuple[str, str], CaseStats] = {}
    all_errors: dict[str, int] = {}
    with TranscriptStore.open(store_path, manifest.fingerprint()) as store:
        for config in configs:
            prepared = prepare_cases(tasks, config)
            backend = backend_factory(config)
            _run_batch(backend, manifest, prepared, store, progress)
            by_fingerprint = {p.bundle.fingerprint: p for p in prepared}
            counts = {p.case.case_id: [0, 0] for p in prepared}
            for record in store.records():
                owner = by_fingerprint.get(record.fingerprint)
                if owner is None:
                    continue
                bucket = counts[record.case_id]
                bucket[1] += 1
                if record.grade and record.grade.get("verdict") == "correct":
                    bucket[0] += 1
                elif record.grade and record.grade.get("error_class"):
                    key = record.grade["error_class"]
                    all_errors[key] = all_errors.get(key, 0) + 1
            for p in prepared:
                grid[(config.name, p.case.case_id)] = CaseStats(
                    case_id=p.case.case_id,
                    correct=counts[p.case.case_id][0],
                    total=counts[p.case.case_id][1],
                )
    ablation = AblationReport(
        n_total=manifest.n_total,
        task_ids=tuple(t.case_id for t in tasks),
        config_names=tuple(c.name for c in configs),
        grid=grid,
        error_histogram=dict(sorted(all_errors.items())),
    )
    written = render_ablation(ablation, out_dir, formats=formats)
    return ablation, tuple(written)


# --- problem tree generation -------------------------------------------------------


def generate_tree(out_dir: Path, include_benchmark: bool = True, include_extended: bool = False) -> list[Path]:
    """Write problem-documents plus a manifest of oracle answers."""
    out_dir = Path(out_dir)
    problems_dir = out_dir / "problems"
    problems_dir.mkdir(parents=True, exist_ok=True)
    cases: list[Case] = []
    if include_benchmark:
        cases.extend(benchmark_cases())
    if include_extended:
        cases.extend(extended_cases())
    if not cases:
        raise ValueError("nothing selected to generate")
    written = []
    manifest_items = []
    for case in cases:
        path = problems_dir / f"{case.case_id}.json"
        path.write_text(document.serialize(case.model))
        written.append(path)
        oracle = solve_reactions(case.model)
        manifest_items.append(
            {
                "case_id": case.case_id,
                "family": case.family,
                "position": case.position,
                "required_outputs": list(case.required_outputs),
                "problem": f"problems/{case.case_id}.json",
                "oracle": {"reactions": reactions_to_dict(case.model, oracle)},
            }
        )
    manifest_path = out_dir / "manifest.json"
    manifest_path.write_text(json.dumps({"cases": manifest_items}, indent=2) + "\n")
    written.append(manifest_path)
    return written
