"""Numerics for an exactly solvable spin chain with three- and four-spin interactions.

Subpackages cover the momentum-space model (dispersion, phases, critical
lines), the quantum information metric and its geodesics, static and
time-dependent Nielsen complexity with the Loschmidt echo, real-space
free-fermion and exact-diagonalization oracles, and a from-scratch DMRG.
"""

__version__ = "0.1.0"

from .params import GeneralCouplings, ModeGrid, ReducedParams, mode_grid
from .model import (
    CriticalLines,
    PhasePoint,
    QuasiParticle,
    classify,
    critical_fields,
    critical_momenta,
    dispersion,
    ground_energy,
    magnetization,
    magnetization_thermo,
    three_spin_lines,
)

__all__ = [
    "__version__",
    "GeneralCouplings",
    "ReducedParams",
    "ModeGrid",
    "mode_grid",
    "QuasiParticle",
    "PhasePoint",
    "CriticalLines",
    "dispersion",
    "critical_fields",
    "critical_momenta",
    "classify",
    "ground_energy",
    "magnetization",
    "magnetization_thermo",
    "three_spin_lines",
]
