"""Coupling parametrizations and the quasi-momentum grid.

Two parametrizations of the same alternating two-sublattice chain are used:

* ``GeneralCouplings`` carries the full set of couplings (field with two
  magneton factors, alternating nearest-neighbour XY couplings J1/J2,
  alternating three-spin couplings J13/J23, four-spin couplings J14/J24).
  J24 must vanish for every analytic path supported here.
* ``ReducedParams`` is the working three-parameter point (h, J, J3) with the
  fixed substitution mu1 = 3 mu, mu2 = mu, mu H = h/2, J1 = 2J, J2 = -1,
  J13 = 5 J3, J23 = J3, J14 = 4, J24 = 0.

Momenta live on k = 2 pi lambda / N.  For odd N (the intended regime) lambda
runs over -(N-1)/2 .. (N-1)/2, giving a grid symmetric about k = 0.  Even N
is accepted for real-space cross-checks; its grid includes k = pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = ["GeneralCouplings", "ReducedParams", "ModeGrid", "mode_grid"]


def _require_finite(name, value):
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class GeneralCouplings:
    """Full coupling set of the alternating chain (energies; magnetons dimensionless)."""

    mu1: float = 1.0
    mu2: float = 1.0
    H_field: float = 0.0
    J1: float = 0.0
    J2: float = 0.0
    J13: float = 0.0
    J23: float = 0.0
    J14: float = 0.0
    J24: float = 0.0

    def __post_init__(self):
        for name in ("mu1", "mu2", "H_field", "J1", "J2", "J13", "J23", "J14", "J24"):
            _require_finite(name, getattr(self, name))
        if self.J24 != 0.0:
            raise ValueError("J24 != 0 is unsupported (no analytic path); set J24 = 0")


@dataclass(frozen=True)
class ReducedParams:
    """Reduced parameter point (h, J, J3) with N unit cells (two sites per cell).

    Odd N >= 3 reproduces the symmetric momentum grid used throughout; other
    positive N are accepted for real-space / exact-diagonalization work.
    """

    h: float
    J3: float = 0.0
    J: float = 1.0
    N: int = 101

    def __post_init__(self):
        for name in ("h", "J3", "J"):
            _require_finite(name, getattr(self, name))
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N!r}")
        object.__setattr__(self, "N", int(self.N))

    def to_general(self) -> GeneralCouplings:
        """Map to the full coupling set (mu = 1 convention, so H = h/2)."""
        return GeneralCouplings(
            mu1=3.0,
            mu2=1.0,
            H_field=self.h / 2.0,
            J1=2.0 * self.J,
            J2=-1.0,
            J13=5.0 * self.J3,
            J23=self.J3,
            J14=4.0,
            J24=0.0,
        )

    def replace(self, **kwargs) -> "ReducedParams":
        values = {"h": self.h, "J3": self.J3, "J": self.J, "N": self.N}
        values.update(kwargs)
        return ReducedParams(**values)


@dataclass(frozen=True)
class ModeGrid:
    """Quasi-momenta k = 2 pi lambda / N and their integer labels lambda."""

    N: int
    lambdas: np.ndarray = field(repr=False)
    k_values: np.ndarray = field(repr=False)

    def __len__(self):
        return self.N

    def index_of(self, lam: int) -> int:
        """Array index of the mode with integer label lam."""
        offset = int(self.lambdas[0])
        idx = int(lam) - offset
        if not 0 <= idx < self.N:
            raise IndexError(f"lambda={lam} outside grid of N={self.N}")
        return idx


def mode_grid(N: int, sector: str = "periodic") -> ModeGrid:
    """Build the momentum grid for N cells.

    sector="periodic" gives k = 2 pi lambda / N (integer lambda); "antiperiodic"
    shifts lambda by 1/2, which is the grid of the even-fermion-parity sector
    of the periodic spin chain.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if N % 2 == 1:
        lambdas = np.arange(-(N - 1) // 2, (N - 1) // 2 + 1)
    else:
        lambdas = np.arange(-N // 2 + 1, N // 2 + 1)
    if sector == "periodic":
        shift = 0.0
    elif sector == "antiperiodic":
        shift = 0.5
    else:
        raise ValueError(f"unknown sector {sector!r}")
    k = 2.0 * np.pi * (lambdas + shift) / N
    k = np.where(k > np.pi + 1e-15, k - 2.0 * np.pi, k)
    return ModeGrid(N=N, lambdas=lambdas, k_values=k)
