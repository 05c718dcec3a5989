"""Static NC, quench engine vs closed forms, Loschmidt echo, multi-quench, XY."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fourspin import ReducedParams, critical_fields
from fourspin.model import dispersion_arrays
from fourspin.quench import (

    QuenchProtocol,
    QuenchSegment,
    XYModes,
    evolve,
    evolve_modes,
    le_nc_residual_bound,
    loschmidt,

    multi_quench_scan,
    nc_of_t,
    quench_angles,
    static_nc,
    static_nc_derivative,
    xy_mode_angle,
)
from fourspin.quench import _contributing_k


def test_static_nc_identical_points():
    p = ReducedParams(h=0.7, J3=0.3, N=51)
    assert static_nc(p, p) == 0.0


def test_static_nc_single_mode_chain():
    ref = ReducedParams(h=0.2, J3=0.1, N=1)
    tgt = ReducedParams(h=0.9, J3=0.1, N=1)
    d_r = dispersion_arrays(ref, np.array([0.0]))
    d_t = dispersion_arrays(tgt, np.array([0.0]))
    expected = ((d_t["theta"][0] - d_r["theta"][0]) / 2.0) ** 2
    assert static_nc(ref, tgt) == pytest.approx(expected, abs=1e-14)


def test_static_nc_reduces_to_plain_sum_in_region_I():
    ref = ReducedParams(h=0.2, J3=0.1, N=31)
    tgt = ReducedParams(h=0.5, J3=0.15, N=31)
    from fourspin.params import mode_grid

    k = mode_grid(31).k_values
    th_r = dispersion_arrays(ref, k)["theta"]
    th_t = dispersion_arrays(tgt, k)["theta"]
    assert static_nc(ref, tgt) == pytest.approx(float(np.sum(((th_t - th_r) / 2) ** 2)))


def test_static_nc_requires_matching_grid_and_J():
    with pytest.raises(ValueError):
        static_nc(ReducedParams(h=0.2, N=11), ReducedParams(h=0.3, N=13))
    with pytest.raises(ValueError):
        static_nc(ReducedParams(h=0.2, N=11, J=1.0), ReducedParams(h=0.3, N=11, J=1.1))


def test_static_nc_derivative_vanishes_at_h13():
    # reference in region I at J3 = 0.1; the target scans h at J3 = 0.3
    ref = ReducedParams(h=0.2, J3=0.1, N=101)
    h13 = critical_fields(1.0, 0.3).h13
    gaps = (0.15, 0.1, 0.05, 0.01, 1e-3, 1e-4)
    ders = [static_nc_derivative(ref, ReducedParams(h=h13 - d, J3=0.3, N=101))
            for d in gaps]
    assert all(b < a for a, b in zip(ders, ders[1:]))  # decays towards the line
    assert ders[-1] == pytest.approx(0.0, abs=1e-12)  # annulus finally empty
    assert abs(ders[0]) > 1.0


def test_static_nc_derivative_finite_discontinuous_not_divergent():
    ref = ReducedParams(h=0.2, J3=0.1, N=101)
    hs = np.arange(0.05, 2.2, 0.001)
    ders = np.array([static_nc_derivative(ref, ReducedParams(h=h, J3=0.3, N=101))
                     for h in hs])
    assert np.all(np.isfinite(ders))
    assert np.max(np.abs(ders)) < 50.0  # bounded
    jumps = np.abs(np.diff(ders))
    assert jumps.max() > 20 * np.median(jumps)  # genuinely discontinuous steps


def test_quench_angles_trivial_and_antisymmetric():
    assert np.allclose(quench_angles(1.0, 0.0, 0.2, 51), 0.0)
    om_fwd = quench_angles(1.0, 0.3, 0.2, 51)
    om_bwd = quench_angles(1.3, -0.3, 0.2, 51)
    np.testing.assert_allclose(om_fwd, -om_bwd, atol=1e-14)


def test_quench_angles_small_everywhere_for_small_delta():
    om = quench_angles(1.0, 0.1, 0.2, 101)
    assert np.max(np.sin(2 * om) ** 2) < 0.02


def test_nc_of_t_trivial_cases():
    assert nc_of_t(0.5, 0.1, 0.2, 0.0, 101) == 0.0
    assert nc_of_t(0.5, 0.0, 0.2, 17.3, 101) == 0.0
    assert loschmidt(0.5, 0.1, 0.2, 0.0, 101) == 1.0


def test_loschmidt_in_unit_interval_and_oscillation_persists():
    t = np.arange(0.0, 120.0, 0.05)
    L = loschmidt(0.5, 0.1, 0.2, t, 101)
    assert np.all((L >= 0.0) & (L <= 1.0))
    for h in (0.5, 1.0, 1.4):
        C = nc_of_t(h, 0.1, 0.2, t, 101) / 101

        def spread(lo, hi, C=C):
            w = C[(t >= lo) & (t < hi)]
            return w.max() - w.min()

        # oscillations do not die out to a time-independent value
        assert spread(100, 120) > 0.3 * spread(10, 30)
        assert spread(100, 120) > 0.2 * C[t > 100].mean()


@given(
    h=st.floats(min_value=0.1, max_value=2.5),
    delta=st.floats(min_value=-0.4, max_value=0.4),
    J3=st.floats(min_value=0.0, max_value=2.0),
    t=st.floats(min_value=0.0, max_value=40.0),
)
@settings(max_examples=40, deadline=None)
def test_phi_bounded_by_two_omega(h, delta, J3, t):
    p = ReducedParams(h=h, J3=J3, N=31)
    k = _contributing_k(p)
    th0 = dispersion_arrays(p, k)["theta"]
    d1 = dispersion_arrays(ReducedParams(h=h + delta, J3=J3, N=31), k)
    om = (th0 - d1["theta"]) / 2.0
    s = np.sin(2 * om) ** 2 * np.sin(d1["Lambda"] * t) ** 2
    phi = np.arccos(np.sqrt(np.clip(1 - s, 0.0, 1.0)))
    # 3e-8 absorbs the arccos noise floor sqrt(2 eps) near overlap 1
    assert np.all(phi <= np.abs(2 * om) + 3e-8)


def test_engine_reproduces_single_quench_closed_form():
    rng = np.random.default_rng(11)
    for _ in range(200):
        h = rng.uniform(0.1, 2.5)
        delta = rng.uniform(-0.5, 0.5)
        J3 = rng.uniform(0.0, 2.5)
        t = rng.uniform(0.0, 60.0)
        p = ReducedParams(h=h, J3=J3, N=51)
        _, rec = evolve(QuenchProtocol(base=p, segments=((delta, math.inf),)), t)
        assert rec.C_N == pytest.approx(nc_of_t(h, delta, J3, t, 51), abs=1e-12)
        assert rec.L == pytest.approx(loschmidt(h, delta, J3, t, 51), abs=1e-12)


def test_engine_reproduces_two_segment_closed_form():
    rng = np.random.default_rng(23)
    for _ in range(200):
        h = rng.uniform(0.1, 2.5)
        delta = rng.uniform(-0.5, 0.5)
        J3 = rng.uniform(0.0, 2.5)
        t1, t2 = rng.uniform(0.0, 30.0, size=2)
        p = ReducedParams(h=h, J3=J3, N=51)
        k = _contributing_k(p)
        th0 = dispersion_arrays(p, k)["theta"]
        d1 = dispersion_arrays(ReducedParams(h=h + delta, J3=J3, N=51), k)
        om = (th0 - d1["theta"]) / 2.0
        Y = (np.exp(-1j * d1["E2"] * t1) * np.cos(om) ** 2
             + np.exp(-1j * d1["E1"] * t1) * np.sin(om) ** 2)
        c_closed = float(np.sum(np.arccos(np.clip(np.abs(Y), 0.0, 1.0)) ** 2))
        proto = QuenchProtocol(base=p, segments=((delta, t1), (0.0, math.inf)))
        _, rec = evolve(proto, t1 + t2)
        assert rec.C_N == pytest.approx(c_closed, abs=1e-12)


def test_mode_norms_preserved_through_protocol():
    p = ReducedParams(h=0.8, J3=0.6, N=101)
    proto = QuenchProtocol(base=p, segments=((0.3, 4.0), (-0.1, 7.0), (0.2, math.inf)))
    states, _ = evolve(proto, 23.0)
    for s in states:
        assert abs(s.amp1) ** 2 + abs(s.amp2) ** 2 == pytest.approx(1.0, abs=1e-12)


def test_evolve_rejects_negative_duration_and_beyond_horizon():
    p = ReducedParams(h=0.8, J3=0.6, N=11)
    with pytest.raises(ValueError):
        QuenchProtocol(base=p, segments=((0.1, -1.0),))
    with pytest.raises(ValueError):
        evolve(QuenchProtocol(base=p, segments=((0.1, 2.0),)), 3.0)


def test_multi_quench_constant_on_off_segments():
    recs = multi_quench_scan(h0=1.0, delta=-0.2, J3=1.5, N=101, T=15.0,
                             n_cycles=4, t_max=105.0, dt=0.05)
    t = np.array([r.t for r in recs])
    C = np.array([r.C_N for r in recs])
    for lo, hi in ((15.0, 30.0), (45.0, 60.0), (75.0, 90.0)):
        window = C[(t >= lo + 1e-9) & (t <= hi + 1e-9)]
        assert window.max() - window.min() < 1e-10


def test_multi_quench_zero_delta_identically_zero():
    recs = multi_quench_scan(h0=1.0, delta=0.0, J3=1.5, N=51, T=15.0,
                             n_cycles=2, t_max=60.0, dt=0.5)
    assert max(r.C_N for r in recs) < 1e-12  # arccos noise floor near overlap 1


def test_multi_quench_amplitude_decreases_then_plateaus():
    recs = multi_quench_scan(h0=1.0, delta=-0.2, J3=1.5, N=501, T=15.0,
                             n_cycles=4, t_max=405.0, dt=0.05)
    t = np.array([r.t for r in recs])
    C = np.array([r.C_N for r in recs])

    def amp(lo, hi):
        w = C[(t >= lo) & (t <= hi)]
        return w.max() - w.min()

    first = amp(0.0, 15.0)
    windows = [amp(90.0 + i * 15.0, 105.0 + i * 15.0) for i in range(20)]
    late = windows[-6:]
    assert min(windows) < first  # initial decrease
    assert max(late) / min(late) < 2.0  # late-time plateau
    assert 0.1 * first < np.mean(late) < first  # settles at a finite fraction


def test_multi_quench_onto_critical_line_stays_smooth():
    # h0 = 3, delta = 0.2, J3 = 1.5 lands near h1; C_N(t) stays analytic
    recs = multi_quench_scan(h0=3.0, delta=0.2, J3=1.5, N=501, T=15.0,
                             n_cycles=4, t_max=105.0, dt=0.01)
    t = np.array([r.t for r in recs])
    C = np.array([r.C_N for r in recs])
    inside = (t > 0.05) & (t < 14.95)  # stay off the protocol switch points
    d2 = np.abs(np.diff(C, 2)) / 0.01**2
    assert np.all(np.isfinite(C))
    assert d2[inside[1:-1]].max() < 1e3


def test_xy_mode_angle_reference_values():
    assert xy_mode_angle(0.0, 1.0, np.pi / 2) == pytest.approx(np.pi / 2)
    with pytest.raises(ValueError):
        xy_mode_angle(0.5, 1.5, 0.3)


def test_xy_zero_delta_protocol_trivial():
    modes = XYModes(h0=0.8, gamma=1.0, N=101)
    amps = evolve_modes(modes, (QuenchSegment(0.0, math.inf),), 12.0)
    phi = np.arccos(np.clip(np.abs(amps[:, 0]), 0.0, 1.0))
    assert np.sum(phi**2) < 1e-12


def test_xy_quench_dominant_frequency_distinguishes_critical_target():
    # quench onto the critical field h = 1 vs an off-critical target with the
    # same |delta|: the gapless target funnels spectral weight into the slow
    # modes, so the dominant C_N(t) frequency drops by an order of magnitude
    def dominant_freq(h0, delta):
        modes = XYModes(h0=h0, gamma=1.0, N=201)
        segs = (QuenchSegment(delta, math.inf),)
        ts = np.arange(0.0, 120.0, 0.05)
        C = np.array([
            float(np.sum(np.arccos(np.clip(np.abs(
                evolve_modes(modes, segs, float(t))[:, 0]), 0, 1)) ** 2))
            for t in ts
        ])
        spec = np.abs(np.fft.rfft(C - C.mean()))
        freqs = np.fft.rfftfreq(len(ts), d=0.05)
        return freqs[1 + np.argmax(spec[1:])]

    f_crit = dominant_freq(0.6, 0.4)    # onto h = 1
    f_off = dominant_freq(0.6, -0.4)    # onto h = 0.2
    assert f_crit < 0.1 * f_off


def test_le_nc_relation_residual_within_bound():
    t = np.arange(0.0, 50.0 + 1e-9, 0.05)
    for h in (0.5, 1.0, 1.4):
        C = nc_of_t(h, 0.1, 0.2, t, 101)
        L = loschmidt(h, 0.1, 0.2, t, 101)
        bound = le_nc_residual_bound(h, 0.1, 0.2, t, 101)
        resid = np.abs(-np.log(L) - C)
        assert np.all(resid <= bound + 1e-12)
