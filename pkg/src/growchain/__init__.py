"""Steady degree distributions of growing-network Markov chains."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConvergenceError,
    DomainError,
    GrowchainError,
    ModelError,
    ParameterError,
    SimulationError,
)
from .models import MODELS, ModelSpec, build_model, list_models  # noqa: E402
from .rates import AffineLimit, BirthDistribution, ChainClass, StepRate, classify  # noqa: E402
from .steady import (  # noqa: E402
    DegreeDistribution,
    steady_by_recurrence,
    steady_closed_form_affine,
)

__all__ = [
    "AffineLimit",
    "BirthDistribution",
    "ChainClass",
    "ConvergenceError",
    "DegreeDistribution",
    "DomainError",
    "GrowchainError",
    "MODELS",
    "ModelError",
    "ModelSpec",
    "ParameterError",
    "SimulationError",
    "StepRate",
    "build_model",
    "classify",
    "list_models",
    "steady_by_recurrence",
    "steady_closed_form_affine",
]
