import random

import pytest

from beambench.model import (
    BeamModel,
    Direction,
    PointLoad,
    Support,
    SupportKind,
    Udl,
)


@pytest.fixture
def ss_point_model() -> BeamModel:
    """Simply supported 10 m, 10 kN point load at 4 m (family I at x=4)."""
    return BeamModel(
        id="SS-I-x4",
        span_m=10.0,
        supports=(Support(SupportKind.PINNED, 0.0), Support(SupportKind.ROLLER, 10.0)),
        loads=(PointLoad(10.0, 4.0, Direction.DOWN),),
    )


@pytest.fixture
def overhang_model() -> BeamModel:
    """Overhang: pinned at 0, roller at 5, 10 kN at 9 m (cantilevered region)."""
    return BeamModel(
        id="OH-I-x9",
        span_m=10.0,
        supports=(Support(SupportKind.PINNED, 0.0), Support(SupportKind.ROLLER, 5.0)),
        loads=(PointLoad(10.0, 9.0, Direction.DOWN),),
    )


@pytest.fixture
def cantilever_model() -> BeamModel:
    """Fixed at 0, tip load: the classic hogging-moment check."""
    return BeamModel(
        id="cantilever-tip",
        span_m=10.0,
        supports=(Support(SupportKind.FIXED, 0.0),),
        loads=(PointLoad(10.0, 10.0, Direction.DOWN),),
    )


def make_random_model(rng: random.Random, ident: str) -> BeamModel:
    """A random statically determinate beam with 1-4 mixed loads.

    Breakpoints keep a minimum separation of 1% of the span (matching
    the benchmark's geometry scale); sliver elements would push the
    stiffness matrix condition number past float64.
    """
    span = rng.uniform(5.0, 20.0)
    min_gap = 0.01 * span

    def spaced(candidate: float, taken: list[float]) -> bool:
        return all(abs(candidate - t) > min_gap or candidate == t for t in taken)

    def draw_position(taken: list[float]) -> float:
        while True:
            # endpoints and existing breakpoints are allowed exactly
            x = rng.choice([0.0, span, rng.uniform(0.0, span)])
            if spaced(x, taken):
                return x

    breakpoints: list[float] = [0.0, span]
    if rng.random() < 0.5:
        a = rng.uniform(0.0, 0.4 * span)
        b = rng.uniform(a + 0.2 * span, span)
        kinds = [SupportKind.PINNED, SupportKind.ROLLER]
        rng.shuffle(kinds)
        if not (spaced(a, breakpoints) and spaced(b, [*breakpoints, a])):
            a, b = 0.1 * span, 0.9 * span
        supports = (Support(kinds[0], a), Support(kinds[1], b))
    else:
        x = draw_position(breakpoints)
        supports = (Support(SupportKind.FIXED, x),)
    breakpoints.extend(s.position_m for s in supports)

    loads = []
    for _ in range(rng.randint(1, 4)):
        direction = rng.choice([Direction.UP, Direction.DOWN])
        if rng.random() < 0.5:
            x = draw_position(breakpoints)
            breakpoints.append(x)
            loads.append(PointLoad(rng.uniform(1.0, 50.0), x, direction))
        else:
            start = draw_position(breakpoints)
            breakpoints.append(start)
            end = start
            while end == start:
                end = draw_position(breakpoints)
            breakpoints.append(end)
            if end < start:
                start, end = end, start
            loads.append(Udl(rng.uniform(1.0, 30.0), start, end, direction))
    return BeamModel(id=ident, span_m=span, supports=supports, loads=tuple(loads))
