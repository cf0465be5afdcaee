import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from beambench import document, fem
from beambench.model import (
    BeamModel,
    Direction,
    PointLoad,
    Support,
    SupportKind,
    Udl,
)
from beambench.statics import solve_reactions, total_load_magnitude

from conftest import make_random_model


def assert_matches_oracle(model: BeamModel, rel_tol: float = 1e-9):
    oracle = solve_reactions(model)
    solution = fem.solve_model(model)
    scale = max(1.0, total_load_magnitude(model))
    for expected, got in zip(oracle.entries, solution.reactions.entries):
        assert abs(got.vertical_kN - expected.vertical_kN) <= rel_tol * scale
        if expected.horizontal_kN is not None:
            assert abs(got.horizontal_kN - expected.horizontal_kN) <= rel_tol * scale
        if expected.moment_kNm is not None:
            assert abs(got.moment_kNm - expected.moment_kNm) <= rel_tol * scale * max(1.0, model.span_m)


class TestMesh:
    def test_nodes_at_breakpoints(self, ss_point_model):
        meshed = fem.mesh(ss_point_model)
        assert meshed.nodes == (0.0, 4.0, 10.0)

    def test_point_inside_udl_splits_elements(self):
        model = BeamModel(
            id="t",
            span_m=10.0,
            supports=(Support(SupportKind.PINNED, 0.0), Support(SupportKind.ROLLER, 10.0)),
            loads=(PointLoad(10.0, 1.5, Direction.DOWN), Udl(10.0, 1.0, 2.0, Direction.DOWN)),
        )
        meshed = fem.mesh(model)
        assert meshed.nodes == (0.0, 1.0, 1.5, 2.0, 10.0)
        # udl applied to both halves it covers, not elsewhere
        assert meshed.element_udl == (0.0, -10.0, -10.0, 0.0)

    def test_load_on_support_does_not_duplicate_node(self):
        model = BeamModel(
            id="t",
            span_m=10.0,
            supports=(Support(SupportKind.PINNED, 0.0), Support(SupportKind.ROLLER, 10.0)),
            loads=(PointLoad(10.0, 10.0, Direction.DOWN),),
        )
        meshed = fem.mesh(model)
        assert meshed.nodes == (0.0, 10.0)

    def test_extra_nodes_refine(self, ss_point_model):
        meshed = fem.mesh(ss_point_model, extra_nodes=(2.0, 6.0))
        assert meshed.nodes == (0.0, 2.0, 4.0, 6.0, 10.0)


class TestSolve:
    def test_benchmark_examples_match_oracle(self, ss_point_model, overhang_model, cantilever_model):
        for model in (ss_point_model, overhang_model, cantilever_model):
            assert_matches_oracle(model)

    def test_reactions_independent_of_stiffness(self, overhang_model):
        base = fem.solve_model(overhang_model).reactions
        scaled = fem.solve_model(
            overhang_model, section=fem.Section(E=200e9, A=0.3, I=8e-3)
        ).reactions
        for a, b in zip(base.entries, scaled.entries):
            assert a.vertical_kN == pytest.approx(b.vertical_kN, abs=1e-8 * 10.0)

    def test_mesh_refinement_invariance(self, ss_point_model):
        base = fem.solve_model(ss_point_model).reactions
        refined = fem.solve_model(ss_point_model, extra_nodes=(1.0, 2.0, 3.3, 7.7)).reactions
        for a, b in zip(base.entries, refined.entries):
            assert a.vertical_kN == pytest.approx(b.vertical_kN, abs=1e-9 * 10.0)

    def test_single_roller_is_a_mechanism(self):
        model = BeamModel(
            id="t",
            span_m=10.0,
            supports=(Support(SupportKind.ROLLER, 5.0),),
            loads=(PointLoad(10.0, 4.0, Direction.DOWN),),
        )
        meshed = fem.mesh(model, check=False)
        with pytest.raises(fem.SingularStiffness):
            fem.solve(meshed)

    def test_three_rollers_have_free_axial_mode(self):
        model = BeamModel(
            id="t",
            span_m=10.0,
            supports=(
                Support(SupportKind.ROLLER, 0.0),
                Support(SupportKind.ROLLER, 5.0),
                Support(SupportKind.ROLLER, 10.0),
            ),
            loads=(PointLoad(10.0, 4.0, Direction.DOWN),),
        )
        with pytest.raises(fem.SingularStiffness):
            fem.solve(fem.mesh(model, check=False))

    def test_indeterminate_model_solvable_without_check(self, overhang_model):
        hallucinated = BeamModel(
            id="t",
            span_m=10.0,
            supports=overhang_model.supports + (Support(SupportKind.ROLLER, 10.0),),
            loads=overhang_model.loads,
        )
        solution = fem.solve(fem.mesh(hallucinated, check=False))
        total = sum(e.vertical_kN for e in solution.reactions.entries)
        assert total == pytest.approx(10.0, abs=1e-8)


@given(seed=st.integers(0, 100_000))
@settings(max_examples=120, deadline=None)
def test_oracle_equivalence_random_models(seed):
    model = make_random_model(random.Random(seed), f"fe-{seed}")
    assert_matches_oracle(model)


@given(
    seed=st.integers(0, 5_000),
    log_e=st.floats(2.0, 9.0),
    log_a=st.floats(-3.0, 0.0),
    log_i=st.floats(-5.0, -1.0),
)
@settings(max_examples=60, deadline=None)
def test_stiffness_invariance_random(seed, log_e, log_a, log_i):
    model = make_random_model(random.Random(seed), f"st-{seed}")
    section = fem.Section(E=10.0**log_e, A=10.0**log_a, I=10.0**log_i)
    oracle = solve_reactions(model)
    got = fem.solve_model(model, section=section).reactions
    scale = max(1.0, total_load_magnitude(model))
    for expected, actual in zip(oracle.entries, got.entries):
        assert abs(actual.vertical_kN - expected.vertical_kN) <= 1e-8 * scale


class TestSolveDocument:
    def test_plain_problem_document(self, ss_point_model):
        text = document.serialize(ss_point_model)
        model, reactions = fem.solve_document(text)
        assert model == ss_point_model
        assert reactions.entries[0].vertical_kN == pytest.approx(6.0)

    def test_mesh_overrides(self, ss_point_model):
        obj = json.loads(document.serialize(ss_point_model))
        obj["mesh"] = {"section": {"E": 70e6, "A": 0.5, "I": 2e-3}, "extra_nodes": [3.0, 7.5]}
        model, reactions = fem.solve_document(json.dumps(obj))
        assert reactions.entries[1].vertical_kN == pytest.approx(4.0, abs=1e-8)

    def test_bad_mesh_key(self, ss_point_model):
        obj = json.loads(document.serialize(ss_point_model))
        obj["mesh"] = "fine"
        with pytest.raises(document.ParseError):
            fem.solve_document(json.dumps(obj))
