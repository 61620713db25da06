"""Spin-mechanical gravimetry simulator.

Exact branch dynamics for conditional-displacement spin-oscillator
probes, quantum/classical Fisher information across four measurement
channels, Lindblad open-system dynamics, and SI sensitivity prediction.
"""

from .branches import (
    CSS,
    GHZ,
    BranchedState,
    CoherentBranch,
    DickeAmplitudes,
    ProbeConfig,
    ProductAmplitudes,
    evolve,
)
from .fisher import FisherResult, QuadratureGrid, SpinPovm
from .hilbert import DenseState, DensityMatrix, DickeSpace, FockSpace
from .lindblad import LindbladParams

__all__ = [
    "BranchedState",
    "CoherentBranch",
    "CSS",
    "DenseState",
    "DensityMatrix",
    "DickeAmplitudes",
    "DickeSpace",
    "evolve",
    "FisherResult",
    "FockSpace",
    "GHZ",
    "LindbladParams",
    "ProbeConfig",
    "ProductAmplitudes",
    "QuadratureGrid",
    "SpinPovm",
]

__version__ = "0.1.0"
