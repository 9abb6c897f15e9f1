"""Quantum Fisher information of continuously monitored Gaussian bosonic sensors."""

from .core import (
    DynamicsClass,
    DynamicsTag,
    GaussianState,
    Generators,
    ModelSpec,
    assemble_generators,
    classify_dynamics,
    symplectic_form,
)
from .dynamics import (
    IntegratorConfig,
    TrajectoryState,
    excitation_number,
    info_difference,
    run_trajectory,
)
from .models import (
    CavityArrayParams,
    TrappedArrayParams,
    build_cavity_array,
    build_model,
    build_trapped_array,
)
from . import spectral

__version__ = "0.1.0"

__all__ = [
    "CavityArrayParams",
    "DynamicsClass",
    "DynamicsTag",
    "GaussianState",
    "Generators",
    "IntegratorConfig",
    "ModelSpec",
    "TrajectoryState",
    "TrappedArrayParams",
    "assemble_generators",
    "build_cavity_array",
    "build_model",
    "build_trapped_array",
    "classify_dynamics",
    "excitation_number",
    "info_difference",
    "run_trajectory",
    "spectral",
    "symplectic_form",
]
