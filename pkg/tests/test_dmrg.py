"""Two-site DMRG against exact diagonalization and the free-fermion oracle."""

import numpy as np
import pytest

from fourspin import GeneralCouplings, ReducedParams
from fourspin.dmrg import (
    SweepConfig,
    dmrg_ground,
    dmrg_ground_best,
    ee_center,
    random_mps,
)
from fourspin.ed import exact_ground, spin_hamiltonian
from fourspin.fermions import build_hopping, ee_correlation, free_fermion_ground_energy
from fourspin.mpo import chain_strings, compile_mpo


def _mpo_for(p, n_cells=None):
    n = n_cells if n_cells is not None else p.N
    return compile_mpo(chain_strings(p, n_cells=n_cells), 2 * n)


def test_random_mps_canonical():
    mps = random_mps(10, 8, seed=1)
    assert mps.center == 0
    assert mps.canonical_residuals() < 1e-12
    assert mps.norm() == pytest.approx(1.0, abs=1e-12)


def test_product_state_field_only():
    # all couplings zero, field on: ground state is the fully polarized
    # product state with energy -(sum of on-site terms) and bond dimension 1
    g = GeneralCouplings(mu1=3.0, mu2=1.0, H_field=0.4)
    mpo = compile_mpo(chain_strings(g, n_cells=3), 6)
    res = dmrg_ground(mpo, SweepConfig(chi_max=8, energy_tol=1e-12, init_bond=2))
    assert res.energy == pytest.approx(-3 * 0.4 * (3 + 1) / 2, abs=1e-10)
    assert max(res.mps.bond_dims) == 1
    assert ee_center(res.mps) == pytest.approx(0.0, abs=1e-12)


def test_dmrg_matches_ed_six_cells():
    p = ReducedParams(h=0.5, J3=0.2, J=1.0, N=6)
    res = dmrg_ground(_mpo_for(p), SweepConfig(chi_max=64, energy_tol=1e-10))
    e_ed, _ = exact_ground(spin_hamiltonian(p, boundary="open"))
    assert res.energy >= e_ed - 1e-12  # variational
    assert res.energy == pytest.approx(e_ed, abs=1e-8)


def test_dmrg_energy_monotone_and_canonical():
    p = ReducedParams(h=1.0, J3=1.0, J=1.0, N=6)
    res = dmrg_ground(_mpo_for(p), SweepConfig(chi_max=48, energy_tol=1e-10))
    halves = res.half_sweep_energies
    assert all(b <= a + 1e-8 for a, b in zip(halves, halves[1:]))
    assert res.mps.canonical_residuals() < 1e-10
    for s in res.mps.bond_singulars.values():
        s = np.asarray(s)
        assert np.all(s >= 0.0) and np.all(np.diff(s) <= 1e-14)


def test_dmrg_ee_matches_oracles_eight_cells():
    p = ReducedParams(h=0.25, J3=0.9, J=1.0, N=8)
    res = dmrg_ground(_mpo_for(p), SweepConfig(chi_max=96, energy_tol=1e-11))
    s_ff = ee_correlation(p)
    assert ee_center(res.mps) == pytest.approx(s_ff, abs=1e-6)


def test_dmrg_best_of_two_seeds_reports_both():
    p = ReducedParams(h=0.5, J3=0.2, J=1.0, N=5)
    best, energies = dmrg_ground_best(_mpo_for(p), SweepConfig(chi_max=32), seeds=(0, 1))
    assert len(energies) == 2
    assert best.energy == min(energies)
    assert abs(energies[0] - energies[1]) < 1e-7


def test_dmrg_three_spin_truncation_convergence():
    # 3-spin chain beyond the first-order onset (gapless): energy per site
    # stable between two bond-dimension caps once the discard cutoff, not the
    # cap, limits the bond growth
    g = GeneralCouplings(mu1=1.0, mu2=1.0, H_field=0.0, J1=1.2, J2=0.8,
                        J13=0.5, J23=0.5)
    mpo = compile_mpo(chain_strings(g, n_cells=25), 50)
    cfg = dict(svd_cutoff=1e-10, energy_tol=1e-9, lanczos_tol=1e-9)
    e_small = dmrg_ground(mpo, SweepConfig(chi_max=200, **cfg)).energy
    e_large = dmrg_ground(mpo, SweepConfig(chi_max=300, **cfg)).energy
    assert abs(e_small - e_large) / 50 < 1e-8
    e_ff = free_fermion_ground_energy(build_hopping(g, n_cells=25, boundary="open"))
    assert e_large == pytest.approx(e_ff, abs=1e-6)


def test_dmrg_variational_above_ed_on_small_instances():
    for p in (ReducedParams(h=0.5, J3=0.2, J=1.0, N=5),
              ReducedParams(h=1.0, J3=1.0, J=1.0, N=5),
              ReducedParams(h=2.6, J3=1.4, J=1.0, N=5)):
        res = dmrg_ground(_mpo_for(p), SweepConfig(chi_max=64, energy_tol=1e-11))
        e_ed, _ = exact_ground(spin_hamiltonian(p, boundary="open"))
        assert res.energy >= e_ed - 1e-12
        assert res.energy - e_ed <= 1e-8


def test_dmrg_requires_four_sites():
    p = ReducedParams(h=0.5, J3=0.2, J=1.0, N=1)
    with pytest.raises(ValueError):
        dmrg_ground(_mpo_for(p), SweepConfig())
