"""Reliability and robustness metrics plus report aggregation.

Reliability is the exact rational N_correct / N_total, kept as a
Fraction internally and rounded only at render time.  Robustness over a
reliability series is (1 + CV)^-1 with CV = sample standard deviation
(n-1 divisor) / mean; it is undefined (rendered "--") when the mean is
zero.  The sample form is the one the reference robustness fixtures pin
down; the population form does not reproduce them.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .grading import ErrorClass


class ZeroTotal(ZeroDivisionError):
    """Reliability over zero runs is undefined."""


def reliability(correct: int, total: int) -> Fraction:
    if total <= 0:
        raise ZeroTotal("reliability needs at least one run")
    if not 0 <= correct <= total:
        raise ValueError(f"correct count {correct} outside [0, {total}]")
    return Fraction(correct, total)


def robustness(series: Sequence[float | Fraction]) -> float | None:
    """(1 + sigma/mean)^-1 over a reliability series; None when mean is 0."""
    if len(series) < 2:
        raise ValueError("robustness needs a series of at least 2 reliabilities")
    values = [float(v) for v in series]
    mean = statistics.fmean(values)
    if mean == 0.0:
        return None
    sigma = statistics.stdev(values)
    return 1.0 / (1.0 + sigma / mean)


def render_robustness(value: float | None, digits: int = 3) -> str:
    return "--" if value is None else f"{value:.{digits}f}"


def _round_opt(value: float | None, digits: int = 6) -> float | None:
    return None if value is None else round(value, digits)


@dataclass(frozen=True)
class CaseStats:
    case_id: str
    correct: int
    total: int
    family: str | None = None
    position: float | None = None

    @property
    def reliability(self) -> Fraction:
        return reliability(self.correct, self.total)


@dataclass(frozen=True)
class EvaluationReport:
    """Aggregated results of one evaluation run."""

    n_total: int
    manifest_fingerprint: str
    prompt_fingerprints: tuple[str, ...]
    cases: tuple[CaseStats, ...]
    error_histogram: Mapping[str, int]

    def case(self, case_id: str) -> CaseStats:
        for stats in self.cases:
            if stats.case_id == case_id:
                return stats
        raise KeyError(case_id)

    def families(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for stats in self.cases:
            if stats.family is not None:
                seen.setdefault(stats.family, None)
        return tuple(seen)

    def sweep_series(self, family: str) -> list[tuple[float, Fraction]]:
        """(position, reliability) pairs in sweep order (right to left)."""
        points = [
            (stats.position, stats.reliability)
            for stats in self.cases
            if stats.family == family and stats.position is not None
        ]
        return sorted(points, key=lambda p: -p[0])

    def family_robustness(self, family: str) -> float | None:
        series = [value for _, value in self.sweep_series(family)]
        if len(series) < 2:
            return None
        return robustness(series)

    def to_dict(self) -> dict:
        out = {
            "n_total": self.n_total,
            "manifest_fingerprint": self.manifest_fingerprint,
            "prompt_fingerprints": list(self.prompt_fingerprints),
            "cases": [
                {
                    "case_id": stats.case_id,
                    "family": stats.family,
                    "position": stats.position,
                    "correct": stats.correct,
                    "total": stats.total,
                    "reliability": round(float(stats.reliability), 6),
                }
                for stats in self.cases
            ],
            "families": {
                family: {
                    "series": [
                        {"position": pos, "reliability": round(float(rel), 6)}
                        for pos, rel in self.sweep_series(family)
                    ],
                    "robustness": _round_opt(self.family_robustness(family)),
                }
                for family in self.families()
            },
            "error_histogram": dict(sorted(self.error_histogram.items())),
        }
        return out


@dataclass(frozen=True)
class AblationReport:
    """Reliability grid (config x task) plus the robustness column."""

    n_total: int
    task_ids: tuple[str, ...]
    config_names: tuple[str, ...]
    grid: Mapping[tuple[str, str], CaseStats]  # (config_name, task_id)
    error_histogram: Mapping[str, int] = field(default_factory=dict)

    def reliabilities(self, config_name: str) -> list[Fraction]:
        return [self.grid[(config_name, t)].reliability for t in self.task_ids]

    def config_robustness(self, config_name: str) -> float | None:
        return robustness(self.reliabilities(config_name))

    def to_dict(self) -> dict:
        return {
            "n_total": self.n_total,
            "task_ids": list(self.task_ids),
            "rows": [
                {
                    "config": name,
                    "reliability": {
                        t: round(float(self.grid[(name, t)].reliability), 6)
                        for t in self.task_ids
                    },
                    "robustness": _round_opt(self.config_robustness(name)),
                }
                for name in self.config_names
            ],
            "error_histogram": dict(sorted(self.error_histogram.items())),
        }


def histogram(error_classes: Iterable[str | ErrorClass | None]) -> dict[str, int]:
    out: dict[str, int] = {}
    for item in error_classes:
        if item is None:
            continue
        key = item.value if isinstance(item, ErrorClass) else str(item)
        out[key] = out.get(key, 0) + 1
    return out
