"""Domain types for planar beam problems.

Conventions, fixed globally for the whole package:

* positions are measured in meters from the left end of the beam,
* forces are in kN, upward positive,
* moments are in kN*m, counterclockwise positive,
* loads store a strictly positive magnitude plus an explicit direction;
  the direction carries the sign.

All types are immutable after construction and safe to share across
concurrent evaluation workers.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Union


class SupportKind(str, Enum):
    PINNED = "pinned"
    ROLLER = "roller"
    FIXED = "fixed"


# Reaction components each support kind provides, in canonical order.
REACTION_COMPONENTS: dict[SupportKind, tuple[str, ...]] = {
    SupportKind.ROLLER: ("vertical",),
    SupportKind.PINNED: ("vertical", "horizontal"),
    SupportKind.FIXED: ("vertical", "horizontal", "moment"),
}


class Direction(str, Enum):
    UP = "up"
    DOWN = "down"

    @property
    def sign(self) -> float:
        return 1.0 if self is Direction.UP else -1.0


class ValidationError(ValueError):
    """A beam model violates one of its invariants."""


class OutOfBoundsError(ValidationError):
    """A support or load position lies outside [0, span]."""


class DuplicateSupportError(ValidationError):
    """Two supports share the same position."""


class IndeterminateError(ValidationError):
    """Reaction-component count differs from 3."""


class EmptyLoadsError(ValidationError):
    """The model carries no loads."""


@dataclass(frozen=True)
class Support:
    kind: SupportKind
    position_m: float

    def __post_init__(self):
        object.__setattr__(self, "kind", SupportKind(self.kind))
        object.__setattr__(self, "position_m", float(self.position_m))

    @property
    def components(self) -> tuple[str, ...]:
        return REACTION_COMPONENTS[self.kind]


@dataclass(frozen=True)
class PointLoad:
    magnitude_kN: float
    position_m: float
    direction: Direction

    def __post_init__(self):
        object.__setattr__(self, "magnitude_kN", float(self.magnitude_kN))
        object.__setattr__(self, "position_m", float(self.position_m))
        object.__setattr__(self, "direction", Direction(self.direction))


@dataclass(frozen=True)
class Udl:
    """Uniformly distributed load over [start_m, end_m]."""

    intensity_kN_per_m: float
    start_m: float
    end_m: float
    direction: Direction

    def __post_init__(self):
        object.__setattr__(self, "intensity_kN_per_m", float(self.intensity_kN_per_m))
        object.__setattr__(self, "start_m", float(self.start_m))
        object.__setattr__(self, "end_m", float(self.end_m))
        object.__setattr__(self, "direction", Direction(self.direction))


Load = Union[PointLoad, Udl]


def _load_sort_key(load: Load) -> tuple:
    if isinstance(load, PointLoad):
        return (0, load.position_m, load.position_m, load.magnitude_kN, load.direction.value)
    return (1, load.start_m, load.end_m, load.intensity_kN_per_m, load.direction.value)


@dataclass(frozen=True)
class BeamModel:
    """Geometry, supports and loads of one planar beam problem.

    Supports are kept sorted by position and loads in a canonical order,
    so two models describing the same physical problem compare equal and
    serialize to identical bytes.
    """

    id: str
    span_m: float
    supports: tuple[Support, ...]
    loads: tuple[Load, ...]

    def __post_init__(self):
        object.__setattr__(self, "span_m", float(self.span_m))
        supports = tuple(sorted(self.supports, key=lambda s: s.position_m))
        loads = tuple(sorted(self.loads, key=_load_sort_key))
        object.__setattr__(self, "supports", supports)
        object.__setattr__(self, "loads", loads)

    @property
    def reaction_component_count(self) -> int:
        return sum(len(s.components) for s in self.supports)


@dataclass(frozen=True)
class Reaction:
    """Reactions at one support; only components the kind provides are set.

    vertical_kN is upward positive, moment_kNm counterclockwise positive.
    """

    support_index: int
    vertical_kN: float
    horizontal_kN: float | None = None
    moment_kNm: float | None = None

    def components(self) -> dict[str, float]:
        out = {"vertical": self.vertical_kN}
        if self.horizontal_kN is not None:
            out["horizontal"] = self.horizontal_kN
        if self.moment_kNm is not None:
            out["moment"] = self.moment_kNm
        return out


@dataclass(frozen=True)
class ReactionSet:
    entries: tuple[Reaction, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))

    def entry_for(self, support_index: int) -> Reaction:
        for entry in self.entries:
            if entry.support_index == support_index:
                return entry
        raise KeyError(f"no reaction entry for support {support_index}")


@dataclass(frozen=True)
class Resultant:
    """Signed force (kN, up positive) and its centroid along the beam."""

    force_kN: float
    centroid_m: float


def resultant(load: Load) -> Resultant:
    """Reduce a load to its signed resultant force and centroid."""
    if isinstance(load, PointLoad):
        return Resultant(load.direction.sign * load.magnitude_kN, load.position_m)
    force = load.direction.sign * load.intensity_kN_per_m * (load.end_m - load.start_m)
    return Resultant(force, 0.5 * (load.start_m + load.end_m))


def total_resultant(loads: tuple[Load, ...] | list[Load]) -> Resultant:
    """Combined resultant of a load list (force sum, force-weighted centroid).

    The centroid is reported as 0.0 when the net force vanishes.
    """
    parts = [resultant(ld) for ld in loads]
    force = sum(p.force_kN for p in parts)
    if abs(force) < 1e-15:
        return Resultant(force, 0.0)
    centroid = sum(p.force_kN * p.centroid_m for p in parts) / force
    return Resultant(force, centroid)


def _check_load(load: Load, span_m: float) -> None:
    if isinstance(load, PointLoad):
        if load.magnitude_kN <= 0:
            raise ValidationError(f"point load magnitude must be positive, got {load.magnitude_kN}")
        if not (0.0 <= load.position_m <= span_m):
            raise OutOfBoundsError(
                f"point load at {load.position_m} m lies outside [0, {span_m}]"
            )
        return
    if load.intensity_kN_per_m <= 0:
        raise ValidationError(f"udl intensity must be positive, got {load.intensity_kN_per_m}")
    if not (load.start_m < load.end_m):
        raise ValidationError(
            f"udl interval [{load.start_m}, {load.end_m}] is empty or reversed"
        )
    if load.start_m < 0.0 or load.end_m > span_m:
        raise OutOfBoundsError(
            f"udl [{load.start_m}, {load.end_m}] extends beyond [0, {span_m}]"
        )


def validate(model: BeamModel) -> None:
    """Check all BeamModel invariants; raise a ValidationError otherwise.

    A model is accepted exactly when positions are in range, supports are
    distinct, at least one load is present, and the supports provide
    exactly 3 reaction components (statically determinate planar beam).
    """
    if model.span_m <= 0:
        raise ValidationError(f"span_m must be positive, got {model.span_m}")
    for support in model.supports:
        if not (0.0 <= support.position_m <= model.span_m):
            raise OutOfBoundsError(
                f"support at {support.position_m} m lies outside [0, {model.span_m}]"
            )
    for a, b in zip(model.supports, model.supports[1:]):
        if a.position_m == b.position_m:
            raise DuplicateSupportError(f"two supports at {a.position_m} m")
    count = model.reaction_component_count
    if count != 3:
        raise IndeterminateError(
            f"model provides {count} reaction components, need exactly 3"
        )
    if not model.loads:
        raise EmptyLoadsError("model carries no loads")
    for load in model.loads:
        _check_load(load, model.span_m)
