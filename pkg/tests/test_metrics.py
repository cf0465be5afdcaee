from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from beambench.metrics import (
    AblationReport,
    CaseStats,
    EvaluationReport,
    ZeroTotal,
    histogram,
    reliability,
    render_robustness,
    robustness,
)


class TestReliability:
    def test_is_exact_rational(self):
        assert reliability(495, 500) == Fraction(99, 100)
        assert reliability(500, 500) == 1
        assert reliability(13, 500) == Fraction(13, 500)
        assert float(reliability(13, 500)) == 0.026

    def test_zero_total(self):
        with pytest.raises(ZeroTotal):
            reliability(0, 0)

    def test_bounds(self):
        with pytest.raises(ValueError):
            reliability(6, 5)
        with pytest.raises(ValueError):
            reliability(-1, 5)


class TestRobustness:
    @pytest.mark.parametrize(
        "series,expected",
        [
            ([1.000, 0.998, 0.996], 0.998),
            ([1.000, 0.998, 0.784], 0.882),
            ([0.026, 0.296, 0.623], 0.513),
            ([0.936, 0.970, 0.556], 0.781),
        ],
    )
    def test_reference_robustness_fixtures(self, series, expected):
        assert robustness(series) == pytest.approx(expected, abs=0.0005)

    def test_all_zero_series_is_undefined(self):
        assert robustness([0.0, 0.0, 0.0]) is None
        assert render_robustness(None) == "--"

    def test_constant_series_is_one(self):
        assert robustness([0.7, 0.7, 0.7]) == pytest.approx(1.0)

    def test_short_series_rejected(self):
        with pytest.raises(ValueError):
            robustness([1.0])

    def test_accepts_fractions(self):
        assert robustness([Fraction(1), Fraction(499, 500)]) == pytest.approx(
            robustness([1.0, 0.998])
        )

    @given(
        series=st.lists(st.floats(0.05, 1.0), min_size=2, max_size=12),
        k=st.floats(0.1, 10.0),
    )
    def test_scale_invariance(self, series, k):
        base = robustness(series)
        scaled = robustness([k * v for v in series])
        assert scaled == pytest.approx(base, rel=1e-9)

    def test_added_variance_strictly_decreases_robustness(self):
        flat = [0.8, 0.8, 0.8, 0.8]
        noisy = [0.8, 0.9, 0.7, 0.8]
        assert robustness(noisy) < robustness(flat)


def make_report():
    cases = (
        CaseStats("F-x2", 90, 100, family="F", position=2.0),
        CaseStats("F-x1", 100, 100, family="F", position=1.0),
        CaseStats("F-x0", 80, 100, family="F", position=0.0),
        CaseStats("solo", 50, 100),
    )
    return EvaluationReport(
        n_total=100,
        manifest_fingerprint="mf",
        prompt_fingerprints=("pf",),
        cases=cases,
        error_histogram={"wrong_magnitude": 30},
    )


class TestEvaluationReport:
    def test_sweep_series_ordered_right_to_left(self):
        report = make_report()
        assert [p for p, _ in report.sweep_series("F")] == [2.0, 1.0, 0.0]

    def test_family_robustness_matches_direct_computation(self):
        report = make_report()
        assert report.family_robustness("F") == pytest.approx(robustness([0.9, 1.0, 0.8]))

    def test_counts_exposed_exactly(self):
        report = make_report()
        data = report.to_dict()
        assert data["cases"][0]["correct"] == 90
        assert data["cases"][0]["total"] == 100

    def test_case_lookup(self):
        report = make_report()
        assert report.case("solo").correct == 50
        with pytest.raises(KeyError):
            report.case("nope")


class TestAblationReport:
    def test_robustness_column(self):
        tasks = ("EXT-A", "EXT-B", "EXT-C")
        configs = ("proposed", "ablated")
        grid = {
            ("proposed", "EXT-A"): CaseStats("EXT-A", 500, 500),
            ("proposed", "EXT-B"): CaseStats("EXT-B", 499, 500),
            ("proposed", "EXT-C"): CaseStats("EXT-C", 498, 500),
            ("ablated", "EXT-A"): CaseStats("EXT-A", 0, 500),
            ("ablated", "EXT-B"): CaseStats("EXT-B", 0, 500),
            ("ablated", "EXT-C"): CaseStats("EXT-C", 0, 500),
        }
        report = AblationReport(500, tasks, configs, grid)
        assert report.config_robustness("proposed") == pytest.approx(
            robustness([1.0, 0.998, 0.996])
        )
        assert report.config_robustness("ablated") is None
        rows = report.to_dict()["rows"]
        assert rows[1]["robustness"] is None


def test_histogram_skips_none():
    assert histogram(["a", None, "a", "b"]) == {"a": 2, "b": 1}
