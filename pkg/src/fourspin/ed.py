"""Sparse exact diagonalization of the spin Hamiltonian (oracle for everything).

Builds the spin-1/2 chain directly from Kronecker products of local
operators, independent of both the Jordan-Wigner quadratic form and the MPO
compiler, so it can arbitrate between them.  Site ordering is cell by cell
(sublattice 1, then 2); basis bit 0 = spin up.

Sizes are capped at 16 spins (8 cells); ground states come from Lanczos
(dense for very small chains), entanglement from a central Schmidt cut.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import eigsh

from .params import GeneralCouplings, ReducedParams

__all__ = ["EDResult", "spin_hamiltonian", "exact_ground", "exact_diag", "parity_masks"]

MAX_SPINS = 16

_SZ = sp.csr_matrix(np.diag([0.5, -0.5]))
_SP = sp.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]]))
_SM = sp.csr_matrix(np.array([[0.0, 0.0], [1.0, 0.0]]))
_ID = sp.identity(2, format="csr")


def _embed(ops: dict, n_sites: int) -> sp.csr_matrix:
    """Kronecker product with `ops[site]` inserted and identities elsewhere."""
    out = None
    for j in range(n_sites):
        factor = ops.get(j, _ID)
        out = factor if out is None else sp.kron(out, factor, format="csr")
    return out


def _resolve(params, n_cells):
    if isinstance(params, ReducedParams):
        g = params.to_general()
        n = n_cells if n_cells is not None else params.N
    elif isinstance(params, GeneralCouplings):
        if n_cells is None:
            raise ValueError("n_cells is required with GeneralCouplings")
        g, n = params, n_cells
    else:
        raise TypeError(f"unsupported parameter type {type(params)!r}")
    if 2 * n > MAX_SPINS:
        raise ValueError(f"{2 * n} spins exceed the {MAX_SPINS}-spin cap")
    return g, n


def spin_hamiltonian(params, *, n_cells: int | None = None,
                     boundary: str = "open") -> sp.csr_matrix:
    """Sparse Hamiltonian of the alternating chain with 3- and 4-spin terms."""
    g, N = _resolve(params, n_cells)
    if g.J24 != 0.0:
        raise ValueError("J24 != 0 unsupported")
    n_sites = 2 * N
    dim = 2**n_sites
    H = sp.csr_matrix((dim, dim))

    def sites_ok(*sites):
        if boundary == "periodic":
            return True
        return all(s < n_sites for s in sites)

    def wrap(s):
        return s % n_sites

    def add_xy_string(coeff, first, span, middle_z):
        """coeff * (S+ [Sz...] S- + S- [Sz...] S+)/2 over `span` consecutive sites."""
        last = first + span - 1
        if coeff == 0.0 or not sites_ok(first, last):
            return
        nonlocal H
        for lead, tail in ((_SP, _SM), (_SM, _SP)):
            ops = {wrap(first): lead, wrap(last): tail}
            for m in middle_z:
                ops[wrap(m)] = _SZ
            H = H + (coeff / 2.0) * _embed(ops, n_sites)

    for n in range(N):
        a, b = 2 * n, 2 * n + 1
        H = H - g.H_field * g.mu1 * _embed({a: _SZ}, n_sites)
        H = H - g.H_field * g.mu2 * _embed({b: _SZ}, n_sites)
        add_xy_string(-g.J1, a, 2, middle_z=())
        add_xy_string(-g.J2, b, 2, middle_z=())
        add_xy_string(-g.J13, a, 3, middle_z=(a + 1,))
        add_xy_string(-g.J23, b, 3, middle_z=(b + 1,))
        add_xy_string(-g.J14, a, 4, middle_z=(a + 1, a + 2))
    return H


def parity_masks(n_sites: int):
    """Boolean masks over the computational basis for even/odd down-spin count."""
    idx = np.arange(2**n_sites, dtype=np.uint32)
    pop = np.zeros_like(idx)
    for b in range(n_sites):
        pop += (idx >> b) & 1
    odd = (pop % 2).astype(bool)
    return ~odd, odd


def exact_ground(H: sp.csr_matrix, restrict_mask=None):
    """Lowest eigenpair, optionally restricted to a basis subset."""
    if restrict_mask is not None:
        keep = np.flatnonzero(restrict_mask)
        H = H[keep][:, keep]
    dim = H.shape[0]
    if dim <= 512:
        w, v = np.linalg.eigh(H.toarray())
        energy, vec = float(w[0]), v[:, 0]
    else:
        w, v = eigsh(H, k=1, which="SA", maxiter=20000)
        energy, vec = float(w[0]), v[:, 0]
    if restrict_mask is not None:
        full = np.zeros(len(restrict_mask))
        full[keep] = vec
        vec = full
    return energy, vec


def entanglement_entropy(vec: np.ndarray, n_left_sites: int, n_sites: int) -> float:
    """Von Neumann entropy of the first n_left_sites spins (Schmidt cut)."""
    psi = vec.reshape(2**n_left_sites, 2 ** (n_sites - n_left_sites))
    s = np.linalg.svd(psi, compute_uv=False)
    p = s**2
    p = p[p > 1e-16]
    return float(-(p * np.log(p)).sum())


@dataclass(frozen=True)
class EDResult:
    energy: float
    entropy: float
    m_z: float
    n_cells: int
    boundary: str


def exact_diag(params, *, n_cells: int | None = None, boundary: str = "open",
               cut: int | None = None) -> EDResult:
    """Ground energy, central-cut entropy and magnetization per cell.

    Magnetization is the field conjugate per cell, <sum_n (mu1 Sz_1 + mu2 Sz_2)> / N,
    which equals <3 Sz_1 + Sz_2>/(2N) in reduced units.
    """
    g, N = _resolve(params, n_cells)
    n_sites = 2 * N
    H = spin_hamiltonian(params, n_cells=n_cells, boundary=boundary)
    energy, vec = exact_ground(H)
    ent = entanglement_entropy(vec, cut if cut is not None else n_sites // 2, n_sites)
    mz_op = sp.csr_matrix((2**n_sites, 2**n_sites))
    for n in range(N):
        mz_op = mz_op + g.mu1 * _embed({2 * n: _SZ}, n_sites)
        mz_op = mz_op + g.mu2 * _embed({2 * n + 1: _SZ}, n_sites)
    scale = 2.0 if isinstance(params, ReducedParams) else (g.mu1 + g.mu2) / 2.0
    m_z = float(vec @ (mz_op @ vec)) / (N * scale)
    return EDResult(energy=energy, entropy=ent, m_z=m_z, n_cells=N, boundary=boundary)
