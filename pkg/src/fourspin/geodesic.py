"""Geodesics of the information metric and the Fubini-Study complexity.

Geodesics solve x''^i + Gamma^i_jl x'^j x'^l = 0 with fixed-step RK4; the
Christoffel symbols come from clamped finite differences of a MetricField.
With the affine normalization g_ij x'^i x'^j = 1 the affine parameter tau is
the Fubini-Study complexity of the path, so C_FS(h) is just tau(h) inverted
along a segment where h is monotone, and dC_FS/dh = 1/h'(tau).

Integration stops when the metric degenerates (det g below threshold), when
no in-patch stencil exists, or when the point leaves the caller's domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import CurvatureUndefinedError
from .metric import MetricField, christoffel

__all__ = [
    "GeodesicState",
    "Trajectory",
    "geodesic",
    "normalized_h_velocity",
    "constant_J3_path",
    "fsc_tau_of_h",
    "fsc_derivative",
]


@dataclass(frozen=True)
class GeodesicState:
    """Point plus velocity in the (h, J3) plane at affine parameter tau."""

    h: float
    J3: float
    dh: float
    dJ3: float
    tau: float = 0.0


@dataclass
class Trajectory:
    tau: np.ndarray
    h: np.ndarray
    J3: np.ndarray
    dh: np.ndarray
    dJ3: np.ndarray
    norm: np.ndarray  # g_ij x'^i x'^j along the path
    exit_reason: str = "completed"
    exit_tau: float = math.nan

    def state(self, i: int) -> GeodesicState:
        return GeodesicState(h=float(self.h[i]), J3=float(self.J3[i]),
                             dh=float(self.dh[i]), dJ3=float(self.dJ3[i]),
                             tau=float(self.tau[i]))


def _norm(field: MetricField, h, J3, dh, dJ3) -> float:
    g = field(h, J3)
    return float(g[0] * dh * dh + 2.0 * g[1] * dh * dJ3 + g[2] * dJ3 * dJ3)


def normalized_h_velocity(field: MetricField, h, J3, dJ3) -> float:
    """Positive dh/dtau making g_ij x'^i x'^j = 1 at fixed dJ3/dtau."""
    g = field(h, J3)
    a, b, c = g[0], 2.0 * g[1] * dJ3, g[2] * dJ3 * dJ3 - 1.0
    disc = b * b - 4.0 * a * c
    if a <= 0.0 or disc < 0.0:
        raise ValueError("cannot normalize: metric too small along h at this point")
    return (-b + math.sqrt(disc)) / (2.0 * a)


def geodesic(start: GeodesicState, steps: int, dtau: float, *,
             metric: MetricField, fd_step: float = 1e-4,
             domain=None, norm_check: float = 1e-8) -> Trajectory:
    """Integrate the geodesic equation from `start` for `steps` RK4 steps.

    `domain` is an optional callable (h, J3) -> bool; leaving it stops the
    integration.  The start must satisfy the unit-norm condition within
    norm_check (pass norm_check=None to skip).
    """
    n0 = _norm(metric, start.h, start.J3, start.dh, start.dJ3)
    if norm_check is not None and abs(n0 - 1.0) > norm_check:
        raise ValueError(f"initial velocity not normalized: g(v,v) = {n0}")

    def rhs(y):
        h, J3, dh, dJ3 = y
        gam = christoffel(metric, h, J3, step=fd_step)
        v = np.array([dh, dJ3])
        acc = -np.einsum("ijl,j,l->i", gam, v, v)
        return np.array([dh, dJ3, acc[0], acc[1]])

    y = np.array([start.h, start.J3, start.dh, start.dJ3], dtype=float)
    taus = [start.tau]
    rows = [y.copy()]
    norms = [n0]
    reason, exit_tau = "completed", math.nan
    for i in range(steps):
        try:
            k1 = rhs(y)
            k2 = rhs(y + 0.5 * dtau * k1)
            k3 = rhs(y + 0.5 * dtau * k2)
            k4 = rhs(y + dtau * k3)
        except CurvatureUndefinedError:
            reason, exit_tau = "degenerate_metric", taus[-1]
            break
        y_new = y + (dtau / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        h, J3 = y_new[0], y_new[1]
        if domain is not None and not domain(h, J3):
            reason, exit_tau = "domain_exit", taus[-1] + dtau
            break
        g = metric(h, J3)
        det = g[0] * g[2] - g[1] ** 2
        if det < 1e-14:
            # the step ran into (nearly) degenerate territory; truncate before it
            reason, exit_tau = "degenerate_metric", taus[-1] + dtau
            break
        n = float(g[0] * y_new[2] ** 2 + 2 * g[1] * y_new[2] * y_new[3] + g[2] * y_new[3] ** 2)
        y = y_new
        taus.append(start.tau + (i + 1) * dtau)
        rows.append(y.copy())
        norms.append(n)
    arr = np.array(rows)
    return Trajectory(tau=np.array(taus), h=arr[:, 0], J3=arr[:, 1],
                      dh=arr[:, 2], dJ3=arr[:, 3], norm=np.array(norms),
                      exit_reason=reason, exit_tau=exit_tau)


def constant_J3_path(field: MetricField, h0: float, J3: float, h1: float,
                     n_points: int = 400) -> Trajectory:
    """Unit-speed path along the h-line at fixed J3 (d tau = sqrt(g_hh) dh).

    This is the curve whose length realizes C_FS between points differing
    only in h; tau accumulates by trapezoidal quadrature of sqrt(g_hh).
    """
    hs = np.linspace(h0, h1, n_points)
    root = np.array([math.sqrt(max(field(h, J3)[0], 0.0)) for h in hs])
    sign = 1.0 if h1 >= h0 else -1.0
    tau = np.concatenate(
        [[0.0], sign * np.cumsum(0.5 * (root[1:] + root[:-1]) * np.diff(hs))])
    with np.errstate(divide="ignore"):
        dh = sign / root
    return Trajectory(tau=tau, h=hs, J3=np.full_like(hs, J3), dh=dh,
                      dJ3=np.zeros_like(hs), norm=np.ones_like(hs))


def _monotone_prefix(h: np.ndarray) -> int:
    """Length of the maximal strictly monotone prefix of h."""
    if len(h) < 2:
        return len(h)
    sign = np.sign(h[1] - h[0])
    if sign == 0:
        return 1
    diffs = np.sign(np.diff(h))
    bad = np.nonzero(diffs != sign)[0]
    return int(bad[0]) + 1 if len(bad) else len(h)


def _hermite(tau0, tau1, h0, h1, s0, s1):
    dt = tau1 - tau0

    def value(t):
        x = (t - tau0) / dt
        h00 = 2 * x**3 - 3 * x**2 + 1
        h10 = x**3 - 2 * x**2 + x
        h01 = -2 * x**3 + 3 * x**2
        h11 = x**3 - x**2
        return h00 * h0 + h10 * dt * s0 + h01 * h1 + h11 * dt * s1

    def deriv(t):
        x = (t - tau0) / dt
        d00 = (6 * x**2 - 6 * x) / dt
        d10 = 3 * x**2 - 4 * x + 1
        d01 = (-6 * x**2 + 6 * x) / dt
        d11 = 3 * x**2 - 2 * x
        return d00 * h0 + d10 * s0 + d01 * h1 + d11 * s1

    return value, deriv


def _invert_one(traj: Trajectory, n_mono: int, h_target: float):
    h = traj.h[:n_mono]
    increasing = h[-1] >= h[0]
    hs = h if increasing else -h
    target = h_target if increasing else -h_target
    if not hs[0] <= target <= hs[-1]:
        raise ValueError(f"h_target={h_target} outside the monotone segment "
                         f"[{min(h[0], h[-1])}, {max(h[0], h[-1])}]")
    j = int(np.searchsorted(hs, target))
    j = max(1, min(j, n_mono - 1))
    val, der = _hermite(traj.tau[j - 1], traj.tau[j], traj.h[j - 1], traj.h[j],
                        traj.dh[j - 1], traj.dh[j])
    f = lambda t: val(t) - h_target
    t0, t1 = traj.tau[j - 1], traj.tau[j]
    if f(t0) * f(t1) > 0:  # Hermite overshoot; fall back to linear bracket
        val = lambda t: np.interp(t, traj.tau[:n_mono], traj.h[:n_mono])
        der = lambda t: traj.dh[j]
        f = lambda t: val(t) - h_target
    tau_star = brentq(f, t0, t1, xtol=1e-14)
    return float(tau_star), float(der(tau_star))


def fsc_tau_of_h(traj: Trajectory, h_targets) -> np.ndarray:
    """C_FS(h): affine parameter where the path first reaches each target field.

    Queries must fall inside the maximal strictly monotone-in-h prefix of the
    trajectory; anything beyond it is rejected.
    """
    n_mono = _monotone_prefix(traj.h)
    targets = np.atleast_1d(np.asarray(h_targets, dtype=float))
    return np.array([_invert_one(traj, n_mono, t)[0] for t in targets])


def fsc_derivative(traj: Trajectory, h_targets) -> np.ndarray:
    """dC_FS/dh = 1/h'(tau) at tau(h) for each target field."""
    n_mono = _monotone_prefix(traj.h)
    targets = np.atleast_1d(np.asarray(h_targets, dtype=float))
    return np.array([1.0 / _invert_one(traj, n_mono, t)[1] for t in targets])
