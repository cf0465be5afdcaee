"""Scripted mock backend reproducing the observed LLM failure modes.

Five named error generators are provided: equal sharing of the total
load between supports, an algebra slip in one reaction, a flipped
reaction direction, a hallucinated extra roller support, and an extended
distributed-load range.  A mock samples error/no-error from a Bernoulli
draw at the configured rate, then picks an applicable mode from a
seeded categorical distribution, so the overall error probability is
exactly the configured rate.

All randomness derives from (seed, case_id, run_index); parallel
execution order can never change a sampled outcome.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, replace
from typing import Callable

from .. import fem
from ..document import model_to_dict, serialize
from ..model import (
    BeamModel,
    ReactionSet,
    Support,
    SupportKind,
    Udl,
    ValidationError,
    total_resultant,
    validate,
)
from ..protocol import render_result_block
from ..statics import solve_reactions
from .base import Backend, BackendRequest, BackendResponse


def derive_seed(master_seed: int, case_id: str, run_index: int) -> int:
    tag = f"{master_seed}:{case_id}:{run_index}".encode()
    return int.from_bytes(hashlib.sha256(tag).digest()[:8], "big")


@dataclass(frozen=True)
class MockAnswer:
    reactions: ReactionSet
    # the model the (simulated) answer was computed from; differs from the
    # problem model for the structural-hallucination modes
    answer_model: BeamModel


ErrorMode = Callable[[BeamModel, ReactionSet, random.Random], MockAnswer | None]


def _copy_structure(oracle: ReactionSet, verticals: list[float]) -> ReactionSet:
    entries = []
    for entry, v in zip(oracle.entries, verticals):
        entries.append(replace(entry, vertical_kN=v))
    return ReactionSet(tuple(entries))


def equal_sharing(model: BeamModel, oracle: ReactionSet, rng: random.Random) -> MockAnswer | None:
    """Split the total load equally instead of taking moments."""
    if len(model.supports) < 2:
        return None
    total = total_resultant(model.loads).force_kN
    share = -total / len(model.supports)
    answer = _copy_structure(oracle, [share] * len(oracle.entries))
    if answer == oracle:
        return None  # symmetric case: sharing happens to be right
    return MockAnswer(answer, model)


def algebra_perturbation(model: BeamModel, oracle: ReactionSet, rng: random.Random) -> MockAnswer | None:
    """One reaction magnitude corrupted by a manipulation slip."""
    index = rng.randrange(len(oracle.entries))
    verticals = [e.vertical_kN for e in oracle.entries]
    if abs(verticals[index]) > 1e-9:
        verticals[index] *= rng.choice([0.5, 0.75, 1.25, 1.5, 2.0])
    else:
        verticals[index] += rng.choice([-5.0, -2.0, 2.0, 5.0])
    return MockAnswer(_copy_structure(oracle, verticals), model)


def direction_flip(model: BeamModel, oracle: ReactionSet, rng: random.Random) -> MockAnswer | None:
    """Correct magnitudes, one reaction direction reported the wrong way."""
    candidates = [i for i, e in enumerate(oracle.entries) if abs(e.vertical_kN) > 1e-9]
    if not candidates:
        return None
    index = rng.choice(candidates)
    verticals = [e.vertical_kN for e in oracle.entries]
    verticals[index] = -verticals[index]
    return MockAnswer(_copy_structure(oracle, verticals), model)


def _free_roller_position(model: BeamModel) -> float | None:
    taken = [s.position_m for s in model.supports]
    for candidate in (model.span_m, model.span_m / 2.0, model.span_m / 4.0, 3 * model.span_m / 4.0):
        if all(abs(candidate - t) > 1e-6 for t in taken):
            return candidate
    return None


def extra_support(model: BeamModel, oracle: ReactionSet, rng: random.Random) -> MockAnswer | None:
    """Hallucinate an additional roller and solve the wrong structure.

    The perturbed model is statically indeterminate, so its reactions
    come from the FE solver (which, like the real agent's runtime, is
    happy to solve it).
    """
    position = _free_roller_position(model)
    if position is None:
        return None
    supports = model.supports + (Support(SupportKind.ROLLER, position),)
    perturbed = replace(model, supports=supports)
    meshed = fem.mesh(perturbed, check=False)
    reactions = fem.solve(meshed).reactions
    return MockAnswer(reactions, perturbed)


def udl_extension(model: BeamModel, oracle: ReactionSet, rng: random.Random) -> MockAnswer | None:
    """Extend a distributed load's range and solve the perturbed problem."""
    udls = [ld for ld in model.loads if isinstance(ld, Udl)]
    if not udls:
        return None
    target = udls[0]
    if target.start_m > 0.0:
        extended = replace(target, start_m=0.0)
    elif target.end_m < model.span_m:
        extended = replace(target, end_m=model.span_m)
    else:
        return None
    loads = tuple(extended if ld is target else ld for ld in model.loads)
    perturbed = replace(model, loads=loads)
    return MockAnswer(solve_reactions(perturbed), perturbed)


def mock_profiles() -> dict[str, ErrorMode]:
    """The named error generators, keyed by grader-facing mode name."""
    return {
        "equal_sharing": equal_sharing,
        "algebra_perturbation": algebra_perturbation,
        "direction_flip": direction_flip,
        "extra_support": extra_support,
        "udl_extension": udl_extension,
    }


def _render_response_text(answer: MockAnswer) -> str:
    doc = serialize(answer.answer_model) if _is_valid(answer.answer_model) else (
        json.dumps(model_to_dict(answer.answer_model), indent=2) + "\n"
    )
    return (
        "Interpreting the beam, applying vertical-force and moment equilibrium.\n\n"
        "```model-document\n" + doc + "```\n\n"
        + render_result_block(answer.answer_model, answer.reactions, include_model=True)
    )


def _is_valid(model: BeamModel) -> bool:
    try:
        validate(model)
    except ValidationError:
        return False
    return True


class MockBackend(Backend):
    """Simulates a backend with a configurable per-case error rate."""

    def __init__(
        self,
        error_rate: float = 0.0,
        rates: dict[str, float] | None = None,
        mode_weights: dict[str, float] | None = None,
        seed: int = 0,
    ):
        if not 0.0 <= error_rate <= 1.0:
            raise ValueError("error_rate must be in [0, 1]")
        self.error_rate = error_rate
        self.rates = dict(rates or {})
        self.seed = seed
        modes = mock_profiles()
        if mode_weights is None:
            mode_weights = {name: 1.0 for name in modes}
        unknown = set(mode_weights) - set(modes)
        if unknown:
            raise ValueError(f"unknown mock error modes: {sorted(unknown)}")
        self.mode_weights = {k: float(v) for k, v in mode_weights.items() if v > 0}

    def rate_for(self, case_id: str) -> float:
        return self.rates.get(case_id, self.error_rate)

    def _wrong_answer(self, model: BeamModel, oracle: ReactionSet, rng: random.Random) -> MockAnswer:
        modes = mock_profiles()
        names = sorted(self.mode_weights)
        while names:
            pick = rng.choices(names, weights=[self.mode_weights[n] for n in names])[0]
            answer = modes[pick](model, oracle, rng)
            if answer is not None:
                return answer
            names.remove(pick)
        # every configured mode inapplicable: fall back to an algebra slip
        answer = algebra_perturbation(model, oracle, rng)
        assert answer is not None
        return answer

    def invoke(self, request: BackendRequest) -> BackendResponse:
        if request.model is None:
            raise ValueError("MockBackend needs the problem model on the request")
        oracle = solve_reactions(request.model)
        rng = random.Random(derive_seed(self.seed, request.case_id, request.run_index))
        if rng.random() < self.rate_for(request.case_id):
            answer = self._wrong_answer(request.model, oracle, rng)
        else:
            answer = MockAnswer(oracle, request.model)
        return BackendResponse(
            raw_text=_render_response_text(answer),
            structured_answer=answer.reactions,
            artifacts={"model_document": json.dumps(model_to_dict(answer.answer_model))},
        )
