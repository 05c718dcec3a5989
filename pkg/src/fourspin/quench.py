"""Static Nielsen complexity, sudden-quench dynamics and the Loschmidt echo.

Statics.  Between two parameter points the per-mode cost is the squared
arccos of the ground-configuration overlap: ((theta^T - theta^R)/2)^2 when
the mode is singly occupied on both sides, (pi/2)^2 when the configurations
disagree (orthogonal number sectors), zero when both sides are the same
trivial configuration.  Summed over the grid this reduces to the plain
sum of ((theta^T - theta^R)/2)^2 whenever both points lie in region I.

Dynamics.  A sudden field shift h -> h + delta rotates each mode's
two-dimensional singly-occupied subspace by

    Omega_k = [theta_k(h, J3) - theta_k(h + delta, J3)] / 2,

after which the instantaneous eigenbasis only contributes the phase
difference (E2 - E1) t = 2 Lambda_k t.  The generic engine alternates basis
rotations and diagonal phases across arbitrary piecewise-constant field
schedules; one- and two-segment protocols reproduce the closed forms

    C_N(t) = sum_k arccos^2 sqrt(1 - sin^2(2 Omega_k) sin^2(Lambda_k t)),
    L(t)   = prod_k [1 - sin^2(2 Omega_k) sin^2(Lambda_k t)].

Modes whose initial configuration is trivial (empty or doubly occupied) are
stationary up to a global phase and drop out; the mode set is therefore the
singly-occupied set of the initial ground state (the full grid in region I).

The same engine drives the transverse XY chain through its own mode angles
cos theta_k = (h - cos k)/sqrt((h - cos k)^2 + gamma^2 sin^2 k) on the
positive-momentum half grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGapError
from .model import dispersion_arrays
from .params import ReducedParams, mode_grid

__all__ = [
    "QuenchSegment",
    "QuenchProtocol",
    "ModeState",
    "NCRecord",
    "static_nc",
    "static_nc_derivative",
    "quench_angles",
    "nc_of_t",
    "loschmidt",
    "ChainModes",
    "XYModes",
    "evolve",
    "evolve_modes",
    "multi_quench_protocol",
    "multi_quench_scan",
    "xy_mode_angle",
]


@dataclass(frozen=True)
class QuenchSegment:
    """Field shift relative to the base point, held for `duration` (inf allowed last)."""

    delta: float
    duration: float

    def __post_init__(self):
        if self.duration < 0.0:
            raise ValueError("segment duration must be >= 0")


@dataclass(frozen=True)
class QuenchProtocol:
    base: ReducedParams
    segments: tuple[QuenchSegment, ...]

    def __post_init__(self):
        segs = tuple(
            s if isinstance(s, QuenchSegment) else QuenchSegment(*s) for s in self.segments
        )
        object.__setattr__(self, "segments", segs)

    @property
    def horizon(self) -> float:
        return sum(s.duration for s in self.segments)


@dataclass(frozen=True)
class ModeState:
    k: float
    amp1: complex
    amp2: complex


@dataclass(frozen=True)
class NCRecord:
    t: float
    C_N: float
    L: float


# --- static complexity ------------------------------------------------------

def _mode_configs(p: ReducedParams, grid):
    """Per-mode ground configuration over the grid: 1 single, 0 empty, 2 double."""
    d = dispersion_arrays(p, grid.k_values)
    occ1 = d["E1"] < -1e-12
    occ2 = d["E2"] < -1e-12
    cfg = np.zeros(grid.N, dtype=int)
    cfg[occ1 & ~occ2] = 1
    cfg[occ2] = 2
    return cfg, d["theta"]


def _check_pair(ref: ReducedParams, tgt: ReducedParams):
    if ref.N != tgt.N:
        raise ValueError("reference and target need the same cell count")
    if ref.J != tgt.J:
        raise ValueError("reference and target need the same J (Bogoliubov phases differ)")


def static_nc(ref: ReducedParams, tgt: ReducedParams) -> float:
    """Nielsen complexity between the ground states at two parameter points."""
    _check_pair(ref, tgt)
    grid = mode_grid(ref.N)
    cfg_r, th_r = _mode_configs(ref, grid)
    cfg_t, th_t = _mode_configs(tgt, grid)
    both = (cfg_r == 1) & (cfg_t == 1)
    mismatch = cfg_r != cfg_t
    cost = np.sum(((th_t[both] - th_r[both]) / 2.0) ** 2)
    cost += np.count_nonzero(mismatch) * (np.pi / 2.0) ** 2
    return float(cost)


def static_nc_derivative(ref: ReducedParams, tgt: ReducedParams) -> float:
    """d C_N / d h^T at fixed reference (analytic, piecewise in h^T)."""
    _check_pair(ref, tgt)
    grid = mode_grid(ref.N)
    cfg_r, th_r = _mode_configs(ref, grid)
    cfg_t, th_t = _mode_configs(tgt, grid)
    both = (cfg_r == 1) & (cfg_t == 1)
    d_t = dispersion_arrays(tgt, grid.k_values)
    return float(np.sum((th_t[both] - th_r[both]) / 2.0 * d_t["dtheta_dh"][both]))


# --- closed-form single quench ----------------------------------------------

def _contributing_k(p: ReducedParams):
    grid = mode_grid(p.N)
    d = dispersion_arrays(p, grid.k_values)
    mask = (d["E1"] < -1e-12) & ~(d["E2"] < -1e-12)
    return grid.k_values[mask]


def quench_angles(h: float, delta: float, J3: float, N: int, J: float = 1.0) -> np.ndarray:
    """Rotation angles Omega_k between the pre- and post-quench Bogoliubov bases."""
    grid = mode_grid(N)
    th0 = dispersion_arrays(ReducedParams(h=h, J3=J3, J=J, N=N), grid.k_values)["theta"]
    th1 = dispersion_arrays(ReducedParams(h=h + delta, J3=J3, J=J, N=N), grid.k_values)["theta"]
    return (th0 - th1) / 2.0


def _quench_tables(h, delta, J3, N, J):
    p0 = ReducedParams(h=h, J3=J3, J=J, N=N)
    k = _contributing_k(p0)
    th0 = dispersion_arrays(p0, k)["theta"]
    d1 = dispersion_arrays(ReducedParams(h=h + delta, J3=J3, J=J, N=N), k)
    omega = (th0 - d1["theta"]) / 2.0
    return np.sin(2.0 * omega) ** 2, d1["Lambda"]


def nc_of_t(h: float, delta: float, J3: float, t, N: int, J: float = 1.0):
    """Time-dependent Nielsen complexity after a single sudden quench."""
    s2, lam = _quench_tables(h, delta, J3, N, J)
    t = np.asarray(t, dtype=float)
    s = s2 * np.sin(np.multiply.outer(t, lam)) ** 2
    phi = np.arccos(np.sqrt(np.clip(1.0 - s, 0.0, 1.0)))
    out = (phi**2).sum(axis=-1)
    return float(out) if out.ndim == 0 else out


def loschmidt(h: float, delta: float, J3: float, t, N: int, J: float = 1.0):
    """Loschmidt echo after a single sudden quench."""
    s2, lam = _quench_tables(h, delta, J3, N, J)
    t = np.asarray(t, dtype=float)
    factors = 1.0 - s2 * np.sin(np.multiply.outer(t, lam)) ** 2
    out = np.prod(factors, axis=-1)
    return float(out) if out.ndim == 0 else out


def le_nc_residual_bound(h: float, delta: float, J3: float, t, N: int, J: float = 1.0):
    """sum_k s_k^2 with s_k = sin^2(2 Omega_k) sin^2(Lambda_k t): bounds |-ln L - C_N|."""
    s2, lam = _quench_tables(h, delta, J3, N, J)
    t = np.asarray(t, dtype=float)
    s = s2 * np.sin(np.multiply.outer(t, lam)) ** 2
    out = (s**2).sum(axis=-1)
    return float(out) if out.ndim == 0 else out


# --- generic multi-segment engine ---------------------------------------------

class ChainModes:
    """Mode table of the chain: angles/energies as functions of the field shift."""

    def __init__(self, base: ReducedParams):
        self.base = base
        self.k = _contributing_k(base)
        self._cache = {}

    def tables(self, delta: float):
        """(theta, E1, E2) arrays at field base.h + delta."""
        hit = self._cache.get(delta)
        if hit is None:
            p = self.base.replace(h=self.base.h + delta)
            d = dispersion_arrays(p, self.k)
            hit = (d["theta"], d["E1"], d["E2"])
            self._cache[delta] = hit
        return hit


def xy_mode_angle(h: float, gamma: float, k: float) -> float:
    """Bogoliubov angle of the transverse XY chain at momentum k."""
    if abs(gamma) > 1.0:
        raise ValueError("|gamma| must be <= 1")
    num = gamma * math.sin(k)
    den = h - math.cos(k)
    if num == 0.0 and den == 0.0:
        raise DegenerateGapError(f"XY gap closes at (h={h}, gamma={gamma}, k={k})")
    return math.atan2(num, den)


class XYModes:
    """Positive-momentum mode table of the transverse XY chain."""

    def __init__(self, h0: float, gamma: float, N: int):
        if abs(gamma) > 1.0:
            raise ValueError("|gamma| must be <= 1")
        if N % 2 == 0:
            raise ValueError("XY mode table uses the odd-N symmetric grid")
        self.h0 = h0
        self.gamma = gamma
        lam = np.arange(1, (N - 1) // 2 + 1)
        self.k = 2.0 * np.pi * lam / N
        self._cache = {}

    def tables(self, delta: float):
        hit = self._cache.get(delta)
        if hit is None:
            h = self.h0 + delta
            num = self.gamma * np.sin(self.k)
            den = h - np.cos(self.k)
            lam = np.hypot(num, den)
            if np.any(lam < 1e-12):
                raise DegenerateGapError("XY quasiparticle energy vanishes on a grid mode")
            theta = np.arctan2(num, den)
            hit = (theta, -lam, lam)
            self._cache[delta] = hit
        return hit


def _segments_until(protocol_segments, t: float):
    """(delta, dwell) pieces covering [0, t]; final segment may be infinite."""
    pieces = []
    remaining = t
    for seg in protocol_segments:
        dwell = min(seg.duration, remaining)
        pieces.append((seg.delta, dwell))
        remaining -= dwell
        if remaining <= 0.0:
            return pieces
    raise ValueError(f"t={t} exceeds the protocol horizon")


def evolve_modes(modes, segments, t: float):
    """Amplitudes in the base basis after evolving the schedule up to time t."""
    n = len(modes.k)
    amps = np.zeros((n, 2), dtype=complex)
    amps[:, 0] = 1.0
    th_cur = modes.tables(0.0)[0]
    for delta, dwell in _segments_until(segments, t):
        theta, e1, e2 = modes.tables(delta)
        omega = (th_cur - theta) / 2.0
        c, s = np.cos(omega), np.sin(omega)
        a1 = c * amps[:, 0] - s * amps[:, 1]
        a2 = s * amps[:, 0] + c * amps[:, 1]
        amps[:, 0] = a1 * np.exp(-1j * e2 * dwell)
        amps[:, 1] = a2 * np.exp(-1j * e1 * dwell)
        th_cur = theta
    theta0 = modes.tables(0.0)[0]
    omega = (th_cur - theta0) / 2.0
    c, s = np.cos(omega), np.sin(omega)
    a1 = c * amps[:, 0] - s * amps[:, 1]
    a2 = s * amps[:, 0] + c * amps[:, 1]
    return np.stack([a1, a2], axis=1)


def evolve(protocol: QuenchProtocol, t: float) -> tuple[list[ModeState], NCRecord]:
    """Evolve the chain through the protocol; returns mode states and (C_N, L)."""
    modes = ChainModes(protocol.base)
    amps = evolve_modes(modes, protocol.segments, t)
    overlap = np.abs(amps[:, 0])
    phi = np.arccos(np.clip(overlap, 0.0, 1.0))
    C_N = float(np.sum(phi**2))
    L = float(np.prod(overlap**2))
    states = [ModeState(k=float(k), amp1=complex(a1), amp2=complex(a2))
              for k, (a1, a2) in zip(modes.k, amps)]
    return states, NCRecord(t=t, C_N=C_N, L=L)


def multi_quench_protocol(base: ReducedParams, delta: float, T: float,
                          n_cycles: int) -> QuenchProtocol:
    """Alternating quench-on / quench-off schedule; the last on-segment is held."""
    if n_cycles < 1:
        raise ValueError("n_cycles must be >= 1")
    if T <= 0.0:
        raise ValueError("T must be > 0")
    segs = []
    for _ in range(n_cycles - 1):
        segs.append(QuenchSegment(delta, T))
        segs.append(QuenchSegment(0.0, T))
    segs.append(QuenchSegment(delta, math.inf))
    return QuenchProtocol(base=base, segments=tuple(segs))


def multi_quench_scan(h0: float, delta: float, J3: float, N: int, T: float,
                      n_cycles: int, t_max: float | None = None, dt: float = 0.05,
                      J: float = 1.0) -> list[NCRecord]:
    """NC/LE time series for the alternating protocol (checkpointed per segment)."""
    base = ReducedParams(h=h0, J3=J3, J=J, N=N)
    protocol = multi_quench_protocol(base, delta, T, n_cycles)
    if t_max is None:
        t_max = (2 * n_cycles + 1) * T
    times = np.arange(0.0, t_max + 0.5 * dt, dt)

    modes = ChainModes(base)
    theta0 = modes.tables(0.0)[0]
    # amplitudes at each segment start, expressed in that segment's basis
    seg_start_amps, seg_start_times = [], []
    amps = np.zeros((len(modes.k), 2), dtype=complex)
    amps[:, 0] = 1.0
    th_cur, t_acc = theta0, 0.0
    for seg in protocol.segments:
        theta, e1, e2 = modes.tables(seg.delta)
        omega = (th_cur - theta) / 2.0
        c, s = np.cos(omega), np.sin(omega)
        amps = np.stack([c * amps[:, 0] - s * amps[:, 1],
                         s * amps[:, 0] + c * amps[:, 1]], axis=1)
        seg_start_amps.append(amps.copy())
        seg_start_times.append(t_acc)
        if not math.isinf(seg.duration):
            amps = np.stack([amps[:, 0] * np.exp(-1j * e2 * seg.duration),
                             amps[:, 1] * np.exp(-1j * e1 * seg.duration)], axis=1)
            t_acc += seg.duration
        th_cur = theta

    records = []
    seg_edges = np.cumsum([s.duration for s in protocol.segments])
    for t in times:
        i = int(np.searchsorted(seg_edges, t, side="left"))
        i = min(i, len(protocol.segments) - 1)
        seg = protocol.segments[i]
        theta, e1, e2 = modes.tables(seg.delta)
        tau = t - seg_start_times[i]
        a = seg_start_amps[i]
        a1 = a[:, 0] * np.exp(-1j * e2 * tau)
        a2 = a[:, 1] * np.exp(-1j * e1 * tau)
        omega = (theta - theta0) / 2.0
        c, s = np.cos(omega), np.sin(omega)
        overlap = np.abs(c * a1 - s * a2)
        phi = np.arccos(np.clip(overlap, 0.0, 1.0))
        records.append(NCRecord(t=float(t), C_N=float(np.sum(phi**2)),
                                L=float(np.prod(overlap**2))))
    return records
