"""Quantum information metric on the (h, J3) plane and its Ricci scalar.

The metric is the pullback of the Fubini-Study metric onto the parameter
manifold: g_ab = (1/4) sum_k (d theta_k / d a)(d theta_k / d b), with the sum
running over the modes whose ground-state configuration actually depends on
the parameters, i.e. modes occupied in branch 1 but not in branch 2 (full
grid in region I, |k| < k_c1 in region II, the annulus in regions III/IV,
empty in region V).

Finite N keeps the extensive sum (qim); thermodynamic work and all geometry
(curvature, geodesics) use per-cell components, where sum_k -> N/(2 pi) int dk.

The Ricci scalar comes from the Brioschi formula applied to finite
differences of the metric.  Because the metric is only piecewise smooth
(occupied sets change discretely), stencils are clamped: every node of a
difference window must share the centre's smoothness fingerprint, falling
back to one-sided windows and smaller steps near a boundary.  The
fingerprint granularity is selectable: "occupation" treats every
integer-cutoff step as a boundary (smooth within-patch curvature, the right
choice for geodesics), while "region" clamps only at the phase-diagram
lines, letting the differences expose the finite-N discontinuity mechanism
behind the oscillatory, divergent curvature near h13.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CurvatureUndefinedError
from .model import dispersion_arrays
from .params import ModeGrid, ReducedParams, mode_grid

__all__ = [
    "MetricTensor2",
    "MetricField",
    "qim",
    "qim_thermo",
    "ricci",
    "christoffel",
]

DET_TOL = 1e-14


@dataclass(frozen=True)
class MetricTensor2:
    """Symmetric 2x2 metric at a parameter point; N = None marks per-cell values."""

    g_hh: float
    g_hJ3: float
    g_J3J3: float
    point: tuple[float, float]
    N: int | None = None

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.g_hh, self.g_hJ3], [self.g_hJ3, self.g_J3J3]])

    @property
    def det(self) -> float:
        return self.g_hh * self.g_J3J3 - self.g_hJ3**2


def _region_label(occ1, occ2, N, has_k0):
    n1 = int(occ1.sum())
    if n1 == 0 and not occ2.any():
        return "V"
    if occ2.any():
        return "IV"
    if n1 == N:
        return "I"
    return "II" if has_k0 else "III"


def _finite_components(h, J3, J, grid: ModeGrid, granularity: str):
    """Extensive metric components and a smoothness fingerprint at (h, J3).

    granularity "occupation" fingerprints the exact occupied sets (every
    integer-cutoff step is a patch boundary); "region" only separates the
    phase-diagram regions, so differencing rides across the finite-N steps
    exactly like an unclamped scheme would.
    """
    p = ReducedParams(h=h, J3=J3, J=J, N=grid.N)
    d = dispersion_arrays(p, grid.k_values)
    occ1 = d["E1"] < -1e-12
    occ2 = d["E2"] < -1e-12
    contrib = occ1 & ~occ2
    dth = d["dtheta_dh"][contrib]
    dtJ = d["dtheta_dJ3"][contrib]
    g = np.array([np.dot(dth, dth), np.dot(dth, dtJ), np.dot(dtJ, dtJ)]) / 4.0
    if granularity == "occupation":
        fp = (occ1.tobytes(), occ2.tobytes())
    else:
        has_k0 = bool(contrib[grid.index_of(0)]) if grid.N % 2 == 1 else False
        fp = _region_label(occ1, occ2, grid.N, has_k0)
    return g, fp


def qim(p: ReducedParams, grid: ModeGrid | None = None) -> MetricTensor2:
    """Finite-N information metric (extensive mode sum)."""
    grid = grid or mode_grid(p.N)
    g, _ = _finite_components(p.h, p.J3, p.J, grid, "region")
    return MetricTensor2(g_hh=float(g[0]), g_hJ3=float(g[1]), g_J3J3=float(g[2]),
                         point=(p.h, p.J3), N=p.N)


def _contributing_intervals(p: ReducedParams):
    """k-intervals on [0, pi] occupied in branch 1 but not branch 2.

    Both E1 and E2 only vanish where the shared quadratic
    3 h^2 - 8 h J3 c + (5 J3^2 + 4) c^2 - 4 (J^2 + 1) = 0 (c = cos k) holds,
    so its real roots in [-1, 1] are the only possible interval endpoints.
    """
    h, J, J3 = p.h, p.J, p.J3
    aa = 5.0 * J3**2 + 4.0
    bb = -8.0 * h * J3
    cc = 3.0 * h**2 - 4.0 * (J**2 + 1.0)
    disc = bb * bb - 4.0 * aa * cc
    breakpoints = [0.0, np.pi]
    if disc >= 0.0:
        for c in ((-bb - math.sqrt(disc)) / (2 * aa), (-bb + math.sqrt(disc)) / (2 * aa)):
            if -1.0 <= c <= 1.0:
                breakpoints.append(math.acos(c))
    breakpoints = sorted(set(breakpoints))
    out = []
    for lo, hi in zip(breakpoints[:-1], breakpoints[1:]):
        if hi - lo < 1e-14:
            continue
        mid = 0.5 * (lo + hi)
        d = dispersion_arrays(p, np.array([mid]))
        if d["E1"][0] < 0.0 <= d["E2"][0]:
            out.append((lo, hi))
    return out


def _integrand_products(p, k):
    d = dispersion_arrays(p, k)
    return np.stack([
        d["dtheta_dh"] * d["dtheta_dh"],
        d["dtheta_dh"] * d["dtheta_dJ3"],
        d["dtheta_dJ3"] * d["dtheta_dJ3"],
    ])


def qim_thermo(h: float, J3: float, J: float = 1.0, rel_tol: float = 1e-10) -> MetricTensor2:
    """Per-cell metric in the thermodynamic limit via adaptive quadrature."""
    from scipy.integrate import quad

    p = ReducedParams(h=h, J3=J3, J=J, N=3)
    comps = np.zeros(3)
    for lo, hi in _contributing_intervals(p):
        for i in range(3):
            val, _ = quad(
                lambda k, i=i: float(_integrand_products(p, np.array([k]))[i, 0]),
                lo, hi, epsrel=rel_tol, epsabs=1e-15, limit=200,
            )
            comps[i] += val
    comps /= 4.0 * np.pi  # (1/2pi) * 2 (even integrand, intervals on [0, pi]) * (1/4)
    return MetricTensor2(g_hh=float(comps[0]), g_hJ3=float(comps[1]),
                         g_J3J3=float(comps[2]), point=(h, J3), N=None)


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(96)


def _thermo_components_fast(h, J3, J):
    """Per-cell thermodynamic components by fixed-order Gauss-Legendre."""
    p = ReducedParams(h=h, J3=J3, J=J, N=3)
    intervals = _contributing_intervals(p)
    comps = np.zeros(3)
    for lo, hi in intervals:
        half = 0.5 * (hi - lo)
        k = lo + half * (_GL_NODES + 1.0)
        comps += half * (_integrand_products(p, k) @ _GL_WEIGHTS)
    comps /= 4.0 * np.pi
    fp = (len(intervals), intervals[0][0] > 1e-12 if intervals else False)
    return comps, fp


class MetricField:
    """Callable metric g(h, J3) -> length-3 array, with occupation fingerprints.

    The fingerprint identifies the smooth patch a point belongs to; finite
    differencing never mixes patches.  Evaluations are cached.
    """

    def __init__(self, fn, fingerprint=None, label="custom"):
        self._fn = fn
        self._fingerprint = fingerprint or (lambda h, J3: 0)
        self.label = label
        self._cache = {}

    @classmethod
    def finite(cls, N: int, J: float = 1.0, per_cell: bool = True,
               granularity: str = "occupation") -> "MetricField":
        if granularity not in ("occupation", "region"):
            raise ValueError(f"unknown granularity {granularity!r}")
        grid = mode_grid(N)
        scale = 1.0 / N if per_cell else 1.0

        def fn(h, J3):
            g, fp = _finite_components(h, J3, J, grid, granularity)
            return g * scale, fp

        return cls(fn, label=f"finite-N={N}" + ("/cell" if per_cell else ""))

    @classmethod
    def thermodynamic(cls, J: float = 1.0) -> "MetricField":
        return cls(lambda h, J3: _thermo_components_fast(h, J3, J), label="thermodynamic")

    @classmethod
    def constant(cls, g_hh, g_hJ3, g_J3J3) -> "MetricField":
        g = np.array([g_hh, g_hJ3, g_J3J3], dtype=float)
        return cls(lambda h, J3: (g.copy(), 0), label="constant")

    def components(self, h: float, J3: float):
        key = (h, J3)
        hit = self._cache.get(key)
        if hit is None:
            hit = self._fn(h, J3)
            self._cache[key] = hit
        return hit

    def __call__(self, h: float, J3: float) -> np.ndarray:
        return self.components(h, J3)[0]

    def fingerprint(self, h: float, J3: float):
        return self.components(h, J3)[1]

    def tensor(self, h: float, J3: float) -> MetricTensor2:
        g = self(h, J3)
        return MetricTensor2(float(g[0]), float(g[1]), float(g[2]), (h, J3), None)


# --- clamped finite differences -------------------------------------------

_WINDOWS = ((-1, 0, 1), (0, 1, 2), (-2, -1, 0))


def _fd_weights(offsets, order):
    """Weights for d^order/dx^order at 0 from nodes at the given offsets."""
    n = len(offsets)
    A = np.vander(np.asarray(offsets, dtype=float), n, increasing=True).T
    b = np.zeros(n)
    b[order] = math.factorial(order)
    return np.linalg.solve(A, b)


def _select_windows(field, h, J3, step):
    """Pick offset windows along h and J3 whose 3x3 product stays in-patch."""
    fp0 = field.fingerprint(h, J3)

    def ok(i, j):
        return field.fingerprint(h + i * step, J3 + j * step) == fp0

    for wh in _WINDOWS:
        if not all(ok(i, 0) for i in wh):
            continue
        for wv in _WINDOWS:
            if all(ok(i, j) for i in wh for j in wv):
                return wh, wv
    return None


def _metric_derivatives(field, h, J3, step):
    """E,F,G and their clamped first/second derivatives; None if no window fits."""
    sel = _select_windows(field, h, J3, step)
    if sel is None:
        return None
    wh, wv = sel
    grid = {(i, j): field(h + i * step, J3 + j * step) for i in wh for j in wv}
    w1h = _fd_weights(wh, 1) / step
    w2h = _fd_weights(wh, 2) / step**2
    w1v = _fd_weights(wv, 1) / step
    w2v = _fd_weights(wv, 2) / step**2

    g0 = field(h, J3)
    d_h = sum(w1h[a] * field(h + i * step, J3) for a, i in enumerate(wh))
    d_v = sum(w1v[a] * field(h, J3 + j * step) for a, j in enumerate(wv))
    d_hh = sum(w2h[a] * field(h + i * step, J3) for a, i in enumerate(wh))
    d_vv = sum(w2v[a] * field(h, J3 + j * step) for a, j in enumerate(wv))
    d_hv = sum(
        w1h[a] * w1v[b] * grid[(i, j)]
        for a, i in enumerate(wh)
        for b, j in enumerate(wv)
    )
    centered = wh == (-1, 0, 1) and wv == (-1, 0, 1)
    return g0, d_h, d_v, d_hh, d_vv, d_hv, centered


def _brioschi(g0, d_h, d_v, d_hh, d_vv, d_hv):
    """Gaussian curvature of a 2D metric from its derivatives (Brioschi)."""
    E, F, G = g0
    E_u, F_u, G_u = d_h
    E_v, F_v, G_v = d_v
    G_uu = d_hh[2]
    E_vv = d_vv[0]
    F_uv = d_hv[1]
    det_g = E * G - F * F
    if det_g <= DET_TOL:
        raise CurvatureUndefinedError(f"metric degenerate: det g = {det_g}")
    m1 = np.array([
        [-0.5 * E_vv + F_uv - 0.5 * G_uu, 0.5 * E_u, F_u - 0.5 * E_v],
        [F_v - 0.5 * G_u, E, F],
        [0.5 * G_v, F, G],
    ])
    m2 = np.array([
        [0.0, 0.5 * E_v, 0.5 * G_u],
        [0.5 * E_v, E, F],
        [0.5 * G_u, F, G],
    ])
    return (np.linalg.det(m1) - np.linalg.det(m2)) / det_g**2


def ricci(h: float, J3: float, *, N: int | None = None, J: float = 1.0,
          metric: MetricField | None = None, step: float = 1e-4,
          richardson: bool = True) -> float:
    """Ricci scalar R = 2K of the information metric at (h, J3).

    metric overrides the default field (finite per-cell for given N, else
    thermodynamic).  The default finite field clamps stencils at region
    boundaries only, so inside a gapless region the differences ride across
    the integer-cutoff steps of the mode sums, which is what produces the
    oscillatory, divergent curvature signal approaching h13/h1.  Stencils
    shrink (step halving, up to 4 times) when no in-region window exists;
    raises CurvatureUndefinedError when the metric is degenerate or no usable
    stencil remains.
    """
    if metric is None:
        metric = (MetricField.finite(N, J=J, granularity="region") if N is not None
                  else MetricField.thermodynamic(J=J))

    def eval_at(s):
        for _ in range(5):
            got = _metric_derivatives(metric, h, J3, s)
            if got is not None:
                return _brioschi(*got[:-1]), got[-1]
            s *= 0.5
        raise CurvatureUndefinedError(
            f"no in-patch stencil near (h={h}, J3={J3}); metric patch too narrow")

    K, centered = eval_at(step)
    if not richardson:
        return 2.0 * K
    K_half, centered_half = eval_at(step / 2.0)
    if centered and centered_half:
        return 2.0 * (4.0 * K_half - K) / 3.0
    return 2.0 * K_half


def christoffel(field: MetricField, h: float, J3: float, step: float = 1e-4,
                retries: int = 4) -> np.ndarray:
    """Christoffel symbols Gamma[i, j, l] from clamped first differences.

    Shrinks the stencil (step halving, `retries` times) when the smooth patch
    around the point is narrower than the stencil.
    """
    sel = _select_windows(field, h, J3, step)
    while sel is None and retries > 0:
        step *= 0.5
        retries -= 1
        sel = _select_windows(field, h, J3, step)
    if sel is None:
        raise CurvatureUndefinedError(f"no in-patch stencil near (h={h}, J3={J3})")
    wh, wv = sel
    w1h = _fd_weights(wh, 1) / step
    w1v = _fd_weights(wv, 1) / step
    d_h = sum(w1h[a] * field(h + i * step, J3) for a, i in enumerate(wh))
    d_v = sum(w1v[a] * field(h, J3 + j * step) for a, j in enumerate(wv))
    g0 = field(h, J3)
    g = np.array([[g0[0], g0[1]], [g0[1], g0[2]]])
    det = g[0, 0] * g[1, 1] - g[0, 1] ** 2
    if det <= DET_TOL:
        raise CurvatureUndefinedError(f"metric degenerate: det g = {det}")
    ginv = np.array([[g[1, 1], -g[0, 1]], [-g[0, 1], g[0, 0]]]) / det
    dg = np.empty((2, 2, 2))  # dg[m, a, b] = d g_ab / d x^m
    dg[0] = [[d_h[0], d_h[1]], [d_h[1], d_h[2]]]
    dg[1] = [[d_v[0], d_v[1]], [d_v[1], d_v[2]]]
    gamma = np.empty((2, 2, 2))
    for i in range(2):
        for j in range(2):
            for l in range(2):
                gamma[i, j, l] = 0.5 * sum(
                    ginv[i, m] * (dg[j][m, l] + dg[l][m, j] - dg[m][j, l])
                    for m in range(2)
                )
    return gamma
