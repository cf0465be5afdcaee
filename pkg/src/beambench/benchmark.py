"""Deterministic benchmark generator: 8 beam families, sweeps, extended tasks.

Two beam types (simply supported: pinned at 0 / roller at the right end;
overhang: pinned at 0 / roller at mid-span) times four load conditions:

  I    a 10 kN point load
  II   a 10 kN/m udl over a 1 m segment
  III  a point load plus a full-span udl (the point load moves)
  IV   a point load riding the midpoint of a 1 m udl (the pair moves)

Sweeps move the load from the right end to the left end in 1 m steps:
point sweeps visit 11 positions {10..0}, 1 m-udl sweeps visit 10 start
positions {9..0} (clamped so the udl stays on the span).  Condition IV
moves the udl+point pair together, so it counts as a udl sweep.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .model import BeamModel, Direction, PointLoad, Support, SupportKind, Udl

SPAN_M = 10.0
POINT_KN = 10.0
UDL_KN_PER_M = 10.0
UDL_LENGTH_M = 1.0

BEAM_TYPES = ("SS", "OH")
CONDITIONS = ("I", "II", "III", "IV")
FAMILY_IDS = tuple(f"{b}-{c}" for b in BEAM_TYPES for c in CONDITIONS)

# Conditions that move a udl start rather than a point position.
_UDL_SWEPT = ("II", "IV")


def format_position(x: float) -> str:
    return f"{x:g}"


@dataclass(frozen=True)
class SweepSpec:
    """One benchmark family and its load-position sweep."""

    family: str
    beam_type: str
    condition: str
    positions: tuple[float, ...]
    span_m: float = SPAN_M
    point_kN: float = POINT_KN
    udl_kN_per_m: float = UDL_KN_PER_M
    udl_length_m: float = UDL_LENGTH_M

    def supports(self) -> tuple[Support, ...]:
        roller_at = self.span_m if self.beam_type == "SS" else self.span_m / 2.0
        return (
            Support(SupportKind.PINNED, 0.0),
            Support(SupportKind.ROLLER, roller_at),
        )

    def loads_at(self, position: float) -> tuple:
        down = Direction.DOWN
        if self.condition == "I":
            return (PointLoad(self.point_kN, position, down),)
        if self.condition == "II":
            return (Udl(self.udl_kN_per_m, position, position + self.udl_length_m, down),)
        if self.condition == "III":
            return (
                PointLoad(self.point_kN, position, down),
                Udl(self.udl_kN_per_m, 0.0, self.span_m, down),
            )
        return (
            PointLoad(self.point_kN, position + self.udl_length_m / 2.0, down),
            Udl(self.udl_kN_per_m, position, position + self.udl_length_m, down),
        )

    def case_id(self, position: float) -> str:
        return f"{self.family}-x{format_position(position)}"

    def model_at(self, position: float) -> BeamModel:
        return BeamModel(
            id=self.case_id(position),
            span_m=self.span_m,
            supports=self.supports(),
            loads=self.loads_at(position),
        )


def _sweep_positions(condition: str, span_m: float, udl_length_m: float) -> tuple[float, ...]:
    if condition in _UDL_SWEPT:
        top = int(span_m - udl_length_m)
    else:
        top = int(span_m)
    return tuple(float(p) for p in range(top, -1, -1))


def sweep_spec(family: str) -> SweepSpec:
    if family not in FAMILY_IDS:
        raise KeyError(f"unknown benchmark family {family!r}")
    beam_type, condition = family.split("-")
    return SweepSpec(
        family=family,
        beam_type=beam_type,
        condition=condition,
        positions=_sweep_positions(condition, SPAN_M, UDL_LENGTH_M),
    )


def generate_benchmark() -> list[tuple[str, BeamModel]]:
    """The 8 family-representative models (load at its rightmost position)."""
    out = []
    for family in FAMILY_IDS:
        spec = sweep_spec(family)
        model = spec.model_at(spec.positions[0])
        out.append((family, replace(model, id=family)))
    return out


def generate_sweep(family: str) -> list[tuple[float, BeamModel]]:
    spec = sweep_spec(family)
    return [(pos, spec.model_at(pos)) for pos in spec.positions]


@dataclass(frozen=True)
class Case:
    """One graded benchmark unit: a model plus what the answer must contain."""

    case_id: str
    model: BeamModel
    family: str | None = None
    position: float | None = None
    required_outputs: tuple[str, ...] = ("reactions",)


def benchmark_cases() -> list[Case]:
    """Every sweep position of every family, the full graded benchmark."""
    cases = []
    for family in FAMILY_IDS:
        for pos, model in generate_sweep(family):
            cases.append(Case(case_id=model.id, model=model, family=family, position=pos))
    return cases


def extended_tasks(
    point_kN: float = POINT_KN, udl_kN_per_m: float = UDL_KN_PER_M
) -> list[tuple[str, BeamModel, tuple[str, ...]]]:
    """The three generalization tasks (magnitudes are artifact defaults)."""
    up, down = Direction.UP, Direction.DOWN
    tasks = [
        (
            "EXT-A",
            BeamModel(
                id="EXT-A",
                span_m=SPAN_M,
                supports=(Support(SupportKind.PINNED, 0.0), Support(SupportKind.ROLLER, 5.0)),
                loads=(
                    PointLoad(point_kN, 9.0, up),
                    Udl(udl_kN_per_m, 7.5, 9.5, up),
                ),
            ),
            ("reactions",),
        ),
        (
            "EXT-B",
            BeamModel(
                id="EXT-B",
                span_m=SPAN_M,
                supports=(Support(SupportKind.PINNED, 0.0), Support(SupportKind.ROLLER, 7.0)),
                loads=(
                    PointLoad(point_kN, 8.5, down),
                    Udl(udl_kN_per_m, 8.2, 9.7, down),
                ),
            ),
            ("reactions",),
        ),
        (
            "EXT-C",
            BeamModel(
                id="EXT-C",
                span_m=SPAN_M,
                supports=(Support(SupportKind.FIXED, 0.0),),
                loads=(
                    PointLoad(point_kN, 9.0, down),
                    Udl(udl_kN_per_m, 2.5, 7.5, down),
                ),
            ),
            ("reactions", "moment"),
        ),
    ]
    return tasks


def extended_cases() -> list[Case]:
    return [
        Case(case_id=task_id, model=model, required_outputs=required)
        for task_id, model, required in extended_tasks()
    ]


def _describe_load(load) -> str:
    word = "downward" if load.direction is Direction.DOWN else "upward"
    if isinstance(load, PointLoad):
        return (
            f"a {format_position(load.magnitude_kN)} kN {word} point load"
            f" at {format_position(load.position_m)} m"
        )
    return (
        f"a {format_position(load.intensity_kN_per_m)} kN/m {word} uniformly"
        f" distributed load from {format_position(load.start_m)} m"
        f" to {format_position(load.end_m)} m"
    )


def render_problem_text(
    model: BeamModel, required_outputs: tuple[str, ...] = ("reactions",)
) -> str:
    """Natural-language problem statement: geometry, supports, loads, outputs.

    The template is deterministic, so the same model always renders to
    identical bytes and distinct benchmark cases render distinct texts.
    """
    support_parts = [
        f"a {s.kind.value} support at {format_position(s.position_m)} m"
        for s in model.supports
    ]
    load_parts = [_describe_load(ld) for ld in model.loads]
    requests = [
        "Determine the reaction forces at every support, giving each magnitude"
        " in kN and its direction (upward or downward)."
    ]
    if "moment" in required_outputs:
        requests.append(
            "Also determine the reaction moment at the fixed support, in kN*m,"
            " stating its direction (counterclockwise or clockwise)."
        )
    lines = [
        f"Consider a horizontal beam with a span of {format_position(model.span_m)} m."
        " Positions are measured in meters from the left end of the beam.",
        "Supports: " + "; ".join(support_parts) + ".",
        "Loads: " + "; ".join(load_parts) + ".",
        " ".join(requests),
    ]
    return "\n".join(lines) + "\n"
