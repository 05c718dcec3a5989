"""Shared test oracles, independent of the implementation paths they check."""

import numpy as np

from fourspin import ReducedParams, classify, mode_grid
from fourspin.model import dispersion_arrays


def ground_overlap_infidelity(p_a: ReducedParams, p_b: ReducedParams) -> float:
    """1 - |<Psi(a)|Psi(b)>|^2 from per-mode Bogoliubov-angle overlaps.

    Requires identical occupation structure at both points (the overlap
    formula per mode is |cos((theta_b - theta_a)/2)| on singly occupied
    modes and 1 on matching trivial modes).
    """
    grid = mode_grid(p_a.N)
    ca, cb = classify(p_a), classify(p_b)
    if (ca.occupied1, ca.occupied2) != (cb.occupied1, cb.occupied2):
        raise ValueError("occupation structure changed between the two points")
    contrib = sorted(ca.occupied1 - ca.occupied2)
    idx = [grid.index_of(lam) for lam in contrib]
    th_a = dispersion_arrays(p_a, grid.k_values)["theta"][idx]
    th_b = dispersion_arrays(p_b, grid.k_values)["theta"][idx]
    # |<a|b>|^2 = prod cos^2 = prod (1 - sin^2): log1p keeps full relative
    # precision for the tiny per-mode infidelities
    log_f = np.sum(np.log1p(-np.sin((th_b - th_a) / 2.0) ** 2))
    return float(-np.expm1(log_f))


def fidelity_metric_oracle(p: ReducedParams, eps: float = 1e-4) -> np.ndarray:
    """(g_hh, g_hJ3, g_J3J3) from ground-state overlaps at displaced points.

    Forward displacements with two-stage Richardson extrapolation (eps, eps/2,
    eps/4) to clear both the odd and even error terms of the quotient
    (1 - F)/eps^2; the cross component comes from the polarization identity.
    """

    def quad_form(da, db, e):
        q = ground_overlap_infidelity(
            p, ReducedParams(h=p.h + da * e, J3=p.J3 + db * e, J=p.J, N=p.N)
        )
        return q / e**2

    def richardson(da, db):
        f1 = quad_form(da, db, eps)
        f2 = quad_form(da, db, eps / 2.0)
        f4 = quad_form(da, db, eps / 4.0)
        g2 = 2.0 * f2 - f1
        g4 = 2.0 * f4 - f2
        return (4.0 * g4 - g2) / 3.0

    g_hh = richardson(1.0, 0.0)
    g_JJ = richardson(0.0, 1.0)
    g_pp = richardson(1.0, 1.0)   # g_hh + 2 g_hJ3 + g_J3J3
    g_pm = richardson(1.0, -1.0)  # g_hh - 2 g_hJ3 + g_J3J3
    return np.array([g_hh, (g_pp - g_pm) / 4.0, g_JJ])
