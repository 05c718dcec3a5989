"""Quasiparticle dispersion, critical lines and phase classification.

Conventions (J > 0 is the intra-cell scale, usually J = 1):

    eps_k    = h/2 - J3 cos k
    Lambda_k = sqrt(eps_k^2 + J^2 + sin^2 k)            (gap function, >= |J|)
    E_{k,1,2} = (h - (3 J3 / 2) cos k) -/+ ... i.e. E1 = mean - Lambda, E2 = mean + Lambda
    cos theta_k = eps_k / Lambda_k,  theta_k in [0, pi]
    u_k = cos(theta_k/2), v_k = sin(theta_k/2)
    exp(-i phi_k) = (J - i sin k) / sqrt(J^2 + sin^2 k)

The ground state fills every mode with negative energy.  Because
E2 = E1 + 2 Lambda_k, the branch-2 occupied set is always contained in the
branch-1 set; modes occupied in exactly one branch carry all the parameter
dependence of the ground state, modes occupied in both (or neither) branches
are parameter-independent product states.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import DegenerateGapError, NoGaplessModesError
from .params import ModeGrid, ReducedParams, mode_grid

__all__ = [
    "QuasiParticle",
    "PhasePoint",
    "CriticalLines",
    "dispersion",
    "dispersion_arrays",
    "critical_fields",
    "critical_momenta",
    "classify",
    "ground_energy",
    "magnetization",
    "magnetization_thermo",
    "three_spin_lines",
]

BOUNDARY_TOL = 1e-12  # |E| below this counts as sitting on a phase boundary


@dataclass(frozen=True)
class QuasiParticle:
    """Bogoliubov data of a single mode."""

    k: float
    Lambda: float
    theta: float
    u: float
    v: float
    phi: float
    E1: float
    E2: float


@dataclass(frozen=True)
class PhasePoint:
    """Region label plus the occupied mode labels (integer lambda) per branch."""

    region: str
    occupied1: frozenset
    occupied2: frozenset
    k_c1: float | None = None
    k_c2: float | None = None
    boundary_modes: frozenset = frozenset()


@dataclass(frozen=True)
class CriticalLines:
    """Critical fields of the four-spin model plus the three-spin-model lines."""

    h1: float
    h2: float
    h3: float
    h13: float
    k_m: float
    km_from_formula: bool
    Hc1: float
    Hc2: float
    Hs: float


def _check_J(J):
    if J == 0.0:
        raise DegenerateGapError("J = 0 closes the gap identically; phi_k undefined at k = 0")


def dispersion_arrays(p: ReducedParams, k):
    """Vectorized dispersion data; returns dict of arrays over k."""
    _check_J(p.J)
    k = np.asarray(k, dtype=float)
    eps = p.h / 2.0 - p.J3 * np.cos(k)
    s2 = p.J**2 + np.sin(k) ** 2
    lam = np.sqrt(eps**2 + s2)
    mean = p.h - 1.5 * p.J3 * np.cos(k)
    theta = np.arctan2(np.sqrt(s2), eps)
    return {
        "k": k,
        "eps": eps,
        "Lambda": lam,
        "theta": theta,
        "E1": mean - lam,
        "E2": mean + lam,
        "u": np.cos(theta / 2.0),
        "v": np.sin(theta / 2.0),
        # d(theta)/dh and d(theta)/dJ3, used by the information metric
        "dtheta_dh": -np.sqrt(s2) / (2.0 * lam**2),
        "dtheta_dJ3": np.cos(k) * np.sqrt(s2) / lam**2,
    }


def dispersion(p: ReducedParams, k: float) -> QuasiParticle:
    """Single-mode Bogoliubov data at momentum k in [-pi, pi]."""
    if not -np.pi - 1e-12 <= k <= np.pi + 1e-12:
        raise ValueError(f"k = {k} outside [-pi, pi]")
    d = dispersion_arrays(p, np.array([k]))
    phi = -cmath.phase((p.J - 1j * math.sin(k)) / math.sqrt(p.J**2 + math.sin(k) ** 2))
    return QuasiParticle(
        k=float(k),
        Lambda=float(d["Lambda"][0]),
        theta=float(d["theta"][0]),
        u=float(d["u"][0]),
        v=float(d["v"][0]),
        phi=phi,
        E1=float(d["E1"][0]),
        E2=float(d["E2"][0]),
    )


# --- critical lines -------------------------------------------------------

def _root_field_upper(J, J3, cos_k):
    """Larger h-root of E_{k,1} = 0 at fixed cos k.

    E_{k,1} = 0 is quadratic in h:
        3 h^2 - 8 h J3 c + (5 J3^2 + 4) c^2 - 4 (J^2 + 1) = 0, c = cos k,
    whose larger root is (4 J3 c + sqrt((J3^2 - 12) c^2 + 12 (J^2 + 1))) / 3.
    """
    rad = (J3**2 - 12.0) * cos_k**2 + 12.0 * (J**2 + 1.0)
    return (4.0 * J3 * cos_k + np.sqrt(rad)) / 3.0


def _km_formula(J, J3):
    """Closed-form maximizing momentum; None when outside its real domain."""
    inner = (J**2 + 1.0) * (56.0 * J3**4 + 48.0 * J3**2 - 5.0 * J3**6)
    if inner < 0.0:
        return None
    a = -64.0 * J**2 * J3**2 + 5.0 * J3**4 - 120.0 * J3**2 - 48.0
    b = 16.0 * math.sqrt(inner)
    c = 64.0 * J**2 * J3**2 + 5.0 * J3**4 + 8.0 * J3**2 - 48.0
    if c == 0.0:
        return None
    ratio = (a + b) / c
    if ratio < 0.0:
        return None
    km = -2.0 * math.atan(math.sqrt(ratio))
    return abs(km)


def _km_numeric(J, J3):
    """Maximize the upper root field over k in [0, pi] (interior vs k = 0 endpoint)."""
    res = minimize_scalar(
        lambda k: -_root_field_upper(J, J3, math.cos(k)),
        bounds=(0.0, np.pi),
        method="bounded",
        options={"xatol": 1e-12},
    )
    k_int, h_int = float(res.x), float(-res.fun)
    h_edge = float(_root_field_upper(J, J3, 1.0))
    if h_edge >= h_int:
        return 0.0, h_edge
    return k_int, h_int


def critical_fields(J: float, J3: float) -> CriticalLines:
    """Critical field values at coupling (J, J3 >= 0).

    h1, h2, h3 close the gap at k = 0 or pi; h13 is the maximum over k of the
    field solving E_{k,1} = 0, evaluated with the closed-form maximizer where
    that expression is real and by direct maximization otherwise.
    """
    _check_J(J)
    if J3 < 0.0:
        raise ValueError("J3 must be >= 0")
    root = math.sqrt(12.0 * J**2 + J3**2)
    h1 = (root + 4.0 * J3) / 3.0
    h2 = (-root + 4.0 * J3) / 3.0
    h3 = (root - 4.0 * J3) / 3.0

    km = _km_formula(J, J3)
    from_formula = km is not None
    if from_formula:
        c, c2 = math.cos(km), math.cos(2.0 * km)
        h13 = (
            math.sqrt(24.0 * J**2 + J3**2 * c2 + J3**2 - 12.0 * c2 + 12.0) / (3.0 * math.sqrt(2.0))
            + 4.0 / 3.0 * J3 * c
        )
        # the closed form covers one stationary branch only; discard it if the
        # direct maximum beats it
        km_n, h13_n = _km_numeric(J, J3)
        if h13_n > h13 + 1e-9:
            km, h13, from_formula = km_n, h13_n, False
    else:
        km, h13 = _km_numeric(J, J3)

    three = three_spin_lines(2.0, 1.0, J3)
    return CriticalLines(
        h1=h1, h2=h2, h3=h3, h13=h13, k_m=km, km_from_formula=from_formula,
        Hc1=three[0], Hc2=three[1], Hs=three[2],
    )


def critical_momenta(p: ReducedParams) -> tuple[float, float]:
    """Gapless momenta k_c1 >= k_c2 on [0, pi] where a branch crosses zero.

    Both come from the single quadratic in cos k shared by E_{k,1} = 0 and
    E_{k,2} = 0.  k_c1 always closes branch 1; k_c2 closes branch 1 on the
    annulus phases (region III) but branch 2 when the band mean is negative
    there (region IV).  Raises NoGaplessModesError when the radicand is
    negative (no real zeros).
    """
    _check_J(p.J)
    h, J, J3 = p.h, p.J, p.J3
    denom = 5.0 * J3**2 + 4.0
    rad = (
        h**2 * J3**2 - 12.0 * h**2 + 20.0 * J**2 * J3**2 + 16.0 * J**2 + 20.0 * J3**2 + 16.0
    )
    if rad < 0.0:
        raise NoGaplessModesError(f"E_(k,1) has no real zero at (h={h}, J3={J3})")
    root = math.sqrt(rad)
    c1 = (4.0 * h * J3 - root) / denom
    c2 = (4.0 * h * J3 + root) / denom
    if not (-1.0 <= c1 <= 1.0) and not (-1.0 <= c2 <= 1.0):
        raise NoGaplessModesError("both zeros of E_(k,1) lie outside the Brillouin zone")
    kc1 = math.acos(np.clip(c1, -1.0, 1.0))
    kc2 = math.acos(np.clip(c2, -1.0, 1.0))
    return kc1, kc2


def classify(p: ReducedParams, grid: ModeGrid | None = None, tol: float = BOUNDARY_TOL) -> PhasePoint:
    """Assign a phase-diagram region from the signs of E_{k,1,2} on the grid.

    Occupation is strictly sign-based: a mode enters a branch's occupied set
    iff its energy is below -tol.  Modes with |E| < tol stay unoccupied and
    are reported in boundary_modes.
    """
    grid = grid or mode_grid(p.N)
    d = dispersion_arrays(p, grid.k_values)
    occ1 = grid.lambdas[d["E1"] < -tol]
    occ2 = grid.lambdas[d["E2"] < -tol]
    boundary = grid.lambdas[(np.abs(d["E1"]) < tol) | (np.abs(d["E2"]) < tol)]

    n1, n2 = len(occ1), len(occ2)
    if n1 == 0 and n2 == 0:
        region = "V"
    elif n2 > 0:
        region = "IV"
    elif n1 == grid.N:
        region = "I"
    elif 0 in occ1:
        region = "II"
    else:
        region = "III"

    try:
        kc1, kc2 = critical_momenta(p)
    except NoGaplessModesError:
        kc1 = kc2 = None
    return PhasePoint(
        region=region,
        occupied1=frozenset(int(x) for x in occ1),
        occupied2=frozenset(int(x) for x in occ2),
        k_c1=kc1,
        k_c2=kc2,
        boundary_modes=frozenset(int(x) for x in boundary),
    )


def ground_energy(p: ReducedParams, grid: ModeGrid | None = None) -> float:
    """Ground-state energy: occupied-mode energies plus the -N h offset."""
    grid = grid or mode_grid(p.N)
    d = dispersion_arrays(p, grid.k_values)
    e1 = d["E1"][d["E1"] < -BOUNDARY_TOL].sum()
    e2 = d["E2"][d["E2"] < -BOUNDARY_TOL].sum()
    return float(e1 + e2 - p.N * p.h)


def magnetization(p: ReducedParams, grid: ModeGrid | None = None) -> float:
    """Ground-state magnetization per cell, m = 1 - (1/N) sum_occ dE/dh.

    dE_{k,1,2}/dh = 1 -/+ cos(theta_k)/2; region V gives exactly 1.
    """
    grid = grid or mode_grid(p.N)
    d = dispersion_arrays(p, grid.k_values)
    cos_t = np.cos(d["theta"])
    occ1 = d["E1"] < -BOUNDARY_TOL
    occ2 = d["E2"] < -BOUNDARY_TOL
    total = np.sum(1.0 - cos_t[occ1] / 2.0) + np.sum(1.0 + cos_t[occ2] / 2.0)
    return float(1.0 - total / p.N)


def occupied_intervals_thermo(p: ReducedParams, branch: int) -> list[tuple[float, float]]:
    """Sub-intervals of [0, pi] where E_{k,branch} < 0 in the thermodynamic limit."""
    sign = -1.0 if branch == 1 else 1.0

    def energy(k):
        eps = p.h / 2.0 - p.J3 * math.cos(k)
        lam = math.sqrt(eps**2 + p.J**2 + math.sin(k) ** 2)
        return p.h - 1.5 * p.J3 * math.cos(k) + sign * lam

    ks = np.linspace(0.0, np.pi, 2001)
    d = dispersion_arrays(p, ks)
    vals = d["E1"] if branch == 1 else d["E2"]
    neg = vals < 0.0
    intervals = []
    i = 0
    while i < len(ks):
        if neg[i]:
            j = i
            while j + 1 < len(ks) and neg[j + 1]:
                j += 1
            lo = ks[i] if i == 0 else brentq(energy, ks[i - 1], ks[i], xtol=1e-14)
            hi = ks[j] if j == len(ks) - 1 else brentq(energy, ks[j], ks[j + 1], xtol=1e-14)
            intervals.append((float(lo), float(hi)))
            i = j + 1
        else:
            i += 1
    return intervals


def magnetization_thermo(h: float, J3: float, J: float = 1.0) -> float:
    """Thermodynamic-limit magnetization per cell (grid sum -> integral)."""
    from scipy.integrate import quad

    p = ReducedParams(h=h, J3=J3, J=J, N=3)

    def de_dh(k, branch):
        eps = h / 2.0 - J3 * math.cos(k)
        lam = math.sqrt(eps**2 + J**2 + math.sin(k) ** 2)
        return 1.0 + (0.5 if branch == 2 else -0.5) * (eps / lam)

    total = 0.0
    for branch in (1, 2):
        for lo, hi in occupied_intervals_thermo(p, branch):
            val, _ = quad(lambda k: de_dh(k, branch), lo, hi, epsrel=1e-10, limit=200)
            total += 2.0 * val  # intervals live on [0, pi]; integrand even in k
    return 1.0 - total / (2.0 * np.pi)


def three_spin_lines(J1: float, J2: float, J3: float) -> tuple[float, float, float]:
    """Second-order critical lines of the three-spin model (mu1 = mu2 = 1).

    Hc1 = (|J1 - J2| - J3)/2, Hc2 = (J3 - (J1 + J2))/2, Hs = (J3 + J1 + J2)/2;
    at (J1, J2) = (2, 1) these are (1 - J3)/2, (J3 - 3)/2, (J3 + 3)/2.  The
    first-order line at H = 0 starts at J3 = |J1 - J2| and meets Hc2 = 0 at
    J3 = J1 + J2.
    """
    diff = abs(J1 - J2)
    tot = abs(J1 + J2)
    return (diff - J3) / 2.0, (J3 - tot) / 2.0, (J3 + tot) / 2.0
