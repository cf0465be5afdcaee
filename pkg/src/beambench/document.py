"""Canonical problem-document serialization.

The problem-document is the interchange format between all modules and
the CLI: one JSON object with fields {id, span_m, supports[], loads[]}.
Serialization is canonical (fixed key order, shortest-round-trip float
repr, two-space indent, trailing newline), so two semantically equal
models serialize to identical bytes and the round trip is the identity.

A model-document is the same schema plus an optional "mesh" key with
overrides for the FE solver; parse_document ignores unknown top-level
keys so both formats pass through here.
"""

from __future__ import annotations

import json
from typing import Any

from .model import BeamModel, Direction, Load, PointLoad, Support, SupportKind, Udl, validate


class ParseError(ValueError):
    """A problem-document could not be parsed; locus names the bad field."""

    def __init__(self, locus: str, message: str):
        super().__init__(f"{locus}: {message}")
        self.locus = locus


def _load_to_dict(load: Load) -> dict[str, Any]:
    if isinstance(load, PointLoad):
        return {
            "type": "point",
            "magnitude_kN": load.magnitude_kN,
            "position_m": load.position_m,
            "direction": load.direction.value,
        }
    return {
        "type": "udl",
        "intensity_kN_per_m": load.intensity_kN_per_m,
        "start_m": load.start_m,
        "end_m": load.end_m,
        "direction": load.direction.value,
    }


def model_to_dict(model: BeamModel) -> dict[str, Any]:
    return {
        "id": model.id,
        "span_m": model.span_m,
        "supports": [
            {"kind": s.kind.value, "position_m": s.position_m} for s in model.supports
        ],
        "loads": [_load_to_dict(ld) for ld in model.loads],
    }


def serialize(model: BeamModel) -> str:
    """Render a validated model as its canonical problem-document."""
    validate(model)
    return json.dumps(model_to_dict(model), indent=2, ensure_ascii=True) + "\n"


def _require(obj: dict, key: str, locus: str) -> Any:
    if key not in obj:
        raise ParseError(f"{locus}{key}", "missing required field")
    return obj[key]


def _number(value: Any, locus: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(locus, f"expected a number, got {value!r}")
    return float(value)


def _parse_support(obj: Any, locus: str) -> Support:
    if not isinstance(obj, dict):
        raise ParseError(locus, "expected an object")
    kind_raw = _require(obj, "kind", f"{locus}.")
    try:
        kind = SupportKind(kind_raw)
    except ValueError:
        raise ParseError(f"{locus}.kind", f"unknown support kind {kind_raw!r}") from None
    return Support(kind, _number(_require(obj, "position_m", f"{locus}."), f"{locus}.position_m"))


def _parse_direction(value: Any, locus: str) -> Direction:
    try:
        return Direction(value)
    except ValueError:
        raise ParseError(locus, f"unknown direction {value!r}") from None


def _parse_load(obj: Any, locus: str) -> Load:
    if not isinstance(obj, dict):
        raise ParseError(locus, "expected an object")
    kind = _require(obj, "type", f"{locus}.")
    if kind == "point":
        return PointLoad(
            magnitude_kN=_number(_require(obj, "magnitude_kN", f"{locus}."), f"{locus}.magnitude_kN"),
            position_m=_number(_require(obj, "position_m", f"{locus}."), f"{locus}.position_m"),
            direction=_parse_direction(_require(obj, "direction", f"{locus}."), f"{locus}.direction"),
        )
    if kind == "udl":
        return Udl(
            intensity_kN_per_m=_number(
                _require(obj, "intensity_kN_per_m", f"{locus}."), f"{locus}.intensity_kN_per_m"
            ),
            start_m=_number(_require(obj, "start_m", f"{locus}."), f"{locus}.start_m"),
            end_m=_number(_require(obj, "end_m", f"{locus}."), f"{locus}.end_m"),
            direction=_parse_direction(_require(obj, "direction", f"{locus}."), f"{locus}.direction"),
        )
    raise ParseError(f"{locus}.type", f"unknown load type {kind!r}")


def dict_to_model(obj: dict[str, Any]) -> BeamModel:
    if not isinstance(obj, dict):
        raise ParseError("document", "expected a JSON object")
    ident = _require(obj, "id", "")
    if not isinstance(ident, str):
        raise ParseError("id", "expected a string")
    span = _number(_require(obj, "span_m", ""), "span_m")
    supports_raw = _require(obj, "supports", "")
    if not isinstance(supports_raw, list):
        raise ParseError("supports", "expected a list")
    loads_raw = _require(obj, "loads", "")
    if not isinstance(loads_raw, list):
        raise ParseError("loads", "expected a list")
    supports = tuple(_parse_support(s, f"supports[{i}]") for i, s in enumerate(supports_raw))
    loads = tuple(_parse_load(ld, f"loads[{i}]") for i, ld in enumerate(loads_raw))
    return BeamModel(id=ident, span_m=span, supports=supports, loads=loads)


def parse(text: str) -> BeamModel:
    """Parse a problem-document back into a BeamModel (inverse of serialize)."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}", f"invalid JSON: {exc.msg}") from None
    return dict_to_model(obj)
