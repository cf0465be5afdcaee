"""beambench: benchmark, oracle and evaluation harness for beam statics."""

from .model import (
    BeamModel,
    Direction,
    Load,
    PointLoad,
    Reaction,
    ReactionSet,
    Support,
    SupportKind,
    Udl,
    ValidationError,
    resultant,
    validate,
)
from .statics import DiagramSet, diagrams, solve_reactions
from .metrics import reliability, robustness

__version__ = "0.1.0"

__all__ = [
    "BeamModel",
    "DiagramSet",
    "Direction",
    "Load",
    "PointLoad",
    "Reaction",
    "ReactionSet",
    "Support",
    "SupportKind",
    "Udl",
    "ValidationError",
    "__version__",
    "diagrams",
    "reliability",
    "resultant",
    "robustness",
    "solve_reactions",
    "validate",
]
