"""Closed-form statics for statically determinate beams: the answer key.

Reactions come from load reduction plus an explicit 2x2 (pinned+roller)
or single-support (fixed) equilibrium solve. No matrix machinery is used
here on purpose, so agreement with the direct-stiffness solver in
``fem.py`` is a meaningful cross-check rather than a tautology.

Internal-force diagrams use the usual left-segment convention:

* shear V(x) is the sum of upward forces left of x (so dV/dx equals the
  signed distributed intensity),
* bending moment M(x) integrates shear (sagging positive); a
  counterclockwise concentrated/reaction moment at x drops M by that
  amount.  A tip-loaded cantilever therefore shows M = -PL (hogging) at
  the wall while its reaction moment is reported as +PL counterclockwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .model import (
    BeamModel,
    PointLoad,
    Reaction,
    ReactionSet,
    Support,
    SupportKind,
    Udl,
    resultant,
    validate,
)


class SingularConfiguration(ValueError):
    """Support layout admits no unique equilibrium solution."""


def _entry(index: int, support: Support, vertical: float, moment: float | None) -> Reaction:
    if support.kind is SupportKind.ROLLER:
        return Reaction(index, vertical)
    if support.kind is SupportKind.PINNED:
        return Reaction(index, vertical, horizontal_kN=0.0)
    return Reaction(index, vertical, horizontal_kN=0.0, moment_kNm=moment if moment is not None else 0.0)


@lru_cache(maxsize=4096)
def solve_reactions(model: BeamModel) -> ReactionSet:
    """Solve support reactions from static equilibrium.

    Loads are transverse only, so horizontal reactions are identically
    zero and reported as such where the support provides the component.
    """
    validate(model)
    parts = [resultant(ld) for ld in model.loads]
    total_force = sum(p.force_kN for p in parts)

    def load_moment_about(a: float) -> float:
        return sum(p.force_kN * (p.centroid_m - a) for p in parts)

    supports = model.supports
    kinds = sorted(s.kind for s in supports)

    if len(supports) == 1 and supports[0].kind is SupportKind.FIXED:
        x_s = supports[0].position_m
        vertical = -total_force
        moment = -load_moment_about(x_s)
        return ReactionSet((_entry(0, supports[0], vertical, moment),))

    if len(supports) == 2 and kinds == [SupportKind.PINNED, SupportKind.ROLLER]:
        x_a = supports[0].position_m
        x_b = supports[1].position_m
        if x_a == x_b:  # excluded by validation; kept as an explicit guard
            raise SingularConfiguration("both vertical reactions act at the same point")
        v_b = -load_moment_about(x_a) / (x_b - x_a)
        v_a = -total_force - v_b
        return ReactionSet(
            (_entry(0, supports[0], v_a, None), _entry(1, supports[1], v_b, None))
        )

    raise SingularConfiguration(
        "unsupported determinate layout: need pinned+roller or a single fixed support"
    )


def equilibrium_residual(model: BeamModel, reactions: ReactionSet) -> tuple[float, float]:
    """Return (|sum F|, |sum M about 0|) of applied loads plus reactions."""
    parts = [resultant(ld) for ld in model.loads]
    sum_f = sum(p.force_kN for p in parts)
    sum_m = sum(p.force_kN * p.centroid_m for p in parts)
    for entry in reactions.entries:
        support = model.supports[entry.support_index]
        sum_f += entry.vertical_kN
        sum_m += entry.vertical_kN * support.position_m
        if entry.moment_kNm is not None:
            sum_m += entry.moment_kNm
    return abs(sum_f), abs(sum_m)


def total_load_magnitude(model: BeamModel) -> float:
    """Sum of absolute load resultants, the scale for residual tolerances."""
    return sum(abs(resultant(ld).force_kN) for ld in model.loads)


def describe_reactions(model: BeamModel, reactions: ReactionSet) -> str:
    """Human-readable reaction summary; direction words derive from sign."""
    parts = []
    for entry in reactions.entries:
        support = model.supports[entry.support_index]
        word = "up" if entry.vertical_kN >= 0 else "down"
        text = (
            f"{support.kind.value} support at {support.position_m:g} m:"
            f" {abs(entry.vertical_kN):g} kN {word}"
        )
        if entry.moment_kNm is not None:
            turn = "ccw" if entry.moment_kNm >= 0 else "cw"
            text += f", moment {abs(entry.moment_kNm):g} kN*m {turn}"
        parts.append(text)
    return "; ".join(parts)


@dataclass(frozen=True)
class Piece:
    """One polynomial piece of the internal-force diagrams over [x0, x1].

    Within the piece, with s = x - x0:
      shear  V(s) = v0 + w * s           (piecewise linear)
      moment M(s) = m0 + v0*s + w*s^2/2  (piecewise quadratic, dM/dx = V)
    """

    x0: float
    x1: float
    v0: float
    m0: float
    w: float

    def shear_at(self, x: float) -> float:
        return self.v0 + self.w * (x - self.x0)

    def moment_at(self, x: float) -> float:
        s = x - self.x0
        return self.m0 + self.v0 * s + 0.5 * self.w * s * s


@dataclass(frozen=True)
class DiagramSet:
    """Axial, shear and moment diagrams as piecewise polynomials.

    Axial force is identically zero (transverse loads only) but is kept
    in the exports so downstream consumers see all three diagrams.
    """

    span_m: float
    pieces: tuple[Piece, ...]
    default_samples: int = 20

    def axial_at(self, x: float) -> float:
        return 0.0

    def shear_at(self, x: float, side: int = 1) -> float:
        """Shear just right (side=+1) or just left (side=-1) of x.

        Outside the loaded span the shear is zero: nothing acts left of
        0- and equilibrium closes the diagram right of the span.
        """
        if side < 0:
            for piece in self.pieces:
                if piece.x0 < x <= piece.x1:
                    return piece.shear_at(x)
            return 0.0
        for piece in self.pieces:
            if piece.x0 <= x < piece.x1:
                return piece.shear_at(x)
        return 0.0

    def moment_at(self, x: float) -> float:
        # moment is continuous except at concentrated moments; evaluate
        # from the right-hand piece at breakpoints
        for piece in self.pieces:
            if piece.x0 <= x < piece.x1:
                return piece.moment_at(x)
        if x >= self.pieces[-1].x1:
            return self.pieces[-1].moment_at(x)
        return self.pieces[0].moment_at(x)

    def sample(self, samples_per_piece: int | None = None) -> list[tuple[float, float, float, float]]:
        """Rows of (position, axial, shear, moment), per-piece sampled."""
        rows: list[tuple[float, float, float, float]] = []
        for piece in self.pieces:
            n = max(2, samples_per_piece or self.default_samples)
            for k in range(n):
                x = piece.x0 + (piece.x1 - piece.x0) * k / (n - 1)
                rows.append((x, 0.0, piece.shear_at(x), piece.moment_at(x)))
        return rows

    def to_table(self, samples_per_piece: int | None = None) -> str:
        lines = ["position_m\taxial_kN\tshear_kN\tmoment_kNm"]
        for x, a, v, m in self.sample(samples_per_piece):
            lines.append(f"{x!r}\t{a!r}\t{v!r}\t{m!r}")
        return "\n".join(lines) + "\n"

    def extreme_moment(self) -> tuple[float, float]:
        """(position, moment) of the extreme-magnitude bending moment."""
        best_x, best_m = 0.0, 0.0
        for piece in self.pieces:
            candidates = [piece.x0, piece.x1]
            if abs(piece.w) > 1e-15:
                x_star = piece.x0 - piece.v0 / piece.w
                if piece.x0 < x_star < piece.x1:
                    candidates.append(x_star)
            for x in candidates:
                m = piece.moment_at(x)
                if abs(m) > abs(best_m):
                    best_x, best_m = x, m
        return best_x, best_m


def _breakpoints(model: BeamModel) -> list[float]:
    points = {0.0, model.span_m}
    for s in model.supports:
        points.add(s.position_m)
    for ld in model.loads:
        if isinstance(ld, PointLoad):
            points.add(ld.position_m)
        else:
            points.add(ld.start_m)
            points.add(ld.end_m)
    return sorted(points)


def diagrams(model: BeamModel, samples_per_piece: int = 20) -> DiagramSet:
    """Build shear/moment diagrams from the solved reactions.

    ``samples_per_piece`` sets the default export density; the piecewise
    polynomials themselves are exact.
    """
    reactions = solve_reactions(model)

    point_forces: dict[float, float] = {}
    point_moments: dict[float, float] = {}

    def add_force(x: float, f: float) -> None:
        point_forces[x] = point_forces.get(x, 0.0) + f

    for ld in model.loads:
        if isinstance(ld, PointLoad):
            add_force(ld.position_m, ld.direction.sign * ld.magnitude_kN)
    for entry in reactions.entries:
        support = model.supports[entry.support_index]
        add_force(support.position_m, entry.vertical_kN)
        if entry.moment_kNm is not None:
            point_moments[support.position_m] = (
                point_moments.get(support.position_m, 0.0) + entry.moment_kNm
            )

    def intensity_over(x0: float, x1: float) -> float:
        w = 0.0
        for ld in model.loads:
            if isinstance(ld, Udl) and ld.start_m <= x0 and ld.end_m >= x1:
                w += ld.direction.sign * ld.intensity_kN_per_m
        return w

    breaks = _breakpoints(model)
    pieces: list[Piece] = []
    v = 0.0
    m = 0.0
    for x0, x1 in zip(breaks, breaks[1:]):
        v += point_forces.get(x0, 0.0)
        m -= point_moments.get(x0, 0.0)
        w = intensity_over(x0, x1)
        pieces.append(Piece(x0=x0, x1=x1, v0=v, m0=m, w=w))
        length = x1 - x0
        v += w * length
        m += pieces[-1].v0 * length + 0.5 * w * length * length

    # closing jumps at the right end should return both diagrams to zero
    v += point_forces.get(breaks[-1], 0.0)
    m -= point_moments.get(breaks[-1], 0.0)
    scale = max(1.0, total_load_magnitude(model) * max(1.0, model.span_m))
    if not (math.isfinite(v) and math.isfinite(m)):
        raise ArithmeticError("diagram accumulation produced non-finite values")
    assert abs(v) <= 1e-9 * scale and abs(m) <= 1e-9 * scale, (
        f"diagram closure failed: V(end)={v}, M(end)={m}"
    )
    return DiagramSet(span_m=model.span_m, pieces=tuple(pieces), default_samples=samples_per_piece)
