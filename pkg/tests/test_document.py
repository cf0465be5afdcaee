import random

import pytest
from hypothesis import given, strategies as st

from beambench import document
from beambench.model import BeamModel, Direction, PointLoad, Support, SupportKind, Udl

from conftest import make_random_model


def test_round_trip_identity(ss_point_model):
    text = document.serialize(ss_point_model)
    assert document.parse(text) == ss_point_model


def test_missing_span_locus():
    with pytest.raises(document.ParseError) as err:
        document.parse('{"id": "x", "supports": [], "loads": []}')
    assert "span_m" in str(err.value)


def test_invalid_json_reports_line():
    with pytest.raises(document.ParseError) as err:
        document.parse('{"id": "x",\n  "span_m": }')
    assert "line 2" in str(err.value)


def test_bad_support_kind_locus():
    text = (
        '{"id": "x", "span_m": 10.0, '
        '"supports": [{"kind": "hinge", "position_m": 0.0}], "loads": []}'
    )
    with pytest.raises(document.ParseError) as err:
        document.parse(text)
    assert "supports[0].kind" in str(err.value)


def test_bad_load_type_locus():
    text = (
        '{"id": "x", "span_m": 10.0, "supports": [], '
        '"loads": [{"type": "torque"}]}'
    )
    with pytest.raises(document.ParseError) as err:
        document.parse(text)
    assert "loads[0].type" in str(err.value)


def test_semantically_equal_models_serialize_identically():
    a = BeamModel(
        id="t",
        span_m=10,
        supports=(Support(SupportKind.ROLLER, 10), Support(SupportKind.PINNED, 0)),
        loads=(Udl(10, 1, 2, Direction.DOWN), PointLoad(10, 4, Direction.DOWN)),
    )
    b = BeamModel(
        id="t",
        span_m=10.0,
        supports=(Support(SupportKind.PINNED, 0.0), Support(SupportKind.ROLLER, 10.0)),
        loads=(PointLoad(10.0, 4.0, Direction.DOWN), Udl(10.0, 1.0, 2.0, Direction.DOWN)),
    )
    assert document.serialize(a) == document.serialize(b)


def test_serialization_is_stable_across_calls(overhang_model):
    assert document.serialize(overhang_model) == document.serialize(overhang_model)


def test_unknown_top_level_keys_are_ignored(ss_point_model):
    text = document.serialize(ss_point_model)
    with_extra = text.rstrip()[:-1] + ', "mesh": {"extra_nodes": [1.5]}}'
    assert document.parse(with_extra) == ss_point_model


@given(seed=st.integers(0, 10_000))
def test_round_trip_on_random_models(seed):
    model = make_random_model(random.Random(seed), f"rand-{seed}")
    assert document.parse(document.serialize(model)) == model
