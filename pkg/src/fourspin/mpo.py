"""Operator strings and their finite-state-machine MPO compilation.

A Hamiltonian is a list of OperatorString terms: a coefficient and local
operators on consecutive sites (span <= 4 here).  XY-type pairs are always
expressed through ladder operators, (S+ ... S- + S- ... S+)/2, so every
matrix element is real.

The compiler builds one automaton state per partially-placed string and
bond, plus the shared "ready" and "done" states traversed by identities;
bond dimensions stay small because strings are short.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import GeneralCouplings, ReducedParams

__all__ = [
    "LOCAL_OPS",
    "OperatorString",
    "MPO",
    "compile_mpo",
    "chain_strings",
    "strings_to_dense",
    "mpo_to_dense",
]

LOCAL_OPS = {
    "Id": np.eye(2),
    "Sz": np.diag([0.5, -0.5]),
    "S+": np.array([[0.0, 1.0], [0.0, 0.0]]),
    "S-": np.array([[0.0, 0.0], [1.0, 0.0]]),
}


@dataclass(frozen=True)
class OperatorString:
    """coefficient * op_0(start) op_1(start+1) ... on consecutive sites."""

    coefficient: float
    start: int
    ops: tuple[str, ...]

    def __post_init__(self):
        for name in self.ops:
            if name not in LOCAL_OPS:
                raise ValueError(f"unsupported local operator {name!r}")
        if len(self.ops) == 0:
            raise ValueError("empty operator string")

    @property
    def span(self) -> int:
        return len(self.ops)

    @property
    def last(self) -> int:
        return self.start + self.span - 1


def xy_pair(coefficient: float, start: int, middle: tuple[str, ...] = ()) -> list[OperatorString]:
    """coefficient * (Sx [mid] Sx + Sy [mid] Sy) rewritten through ladder operators."""
    return [
        OperatorString(coefficient / 2.0, start, ("S+",) + middle + ("S-",)),
        OperatorString(coefficient / 2.0, start, ("S-",) + middle + ("S+",)),
    ]


def chain_strings(params, n_cells: int | None = None) -> list[OperatorString]:
    """Open-chain operator strings of the alternating 2/3/4-spin Hamiltonian."""
    if isinstance(params, ReducedParams):
        g = params.to_general()
        N = n_cells if n_cells is not None else params.N
    else:
        g = params
        if n_cells is None:
            raise ValueError("n_cells is required with GeneralCouplings")
        N = n_cells
    if g.J24 != 0.0:
        raise ValueError("J24 != 0 unsupported")
    L = 2 * N
    strings = []

    def add(coeff, start, ops):
        if coeff != 0.0 and start + len(ops) <= L:
            strings.append(OperatorString(coeff, start, tuple(ops)))

    def add_xy(coeff, start, middle):
        if coeff != 0.0 and start + len(middle) + 2 <= L:
            strings.extend(xy_pair(coeff, start, middle))

    for n in range(N):
        a, b = 2 * n, 2 * n + 1
        add(-g.H_field * g.mu1, a, ("Sz",))
        add(-g.H_field * g.mu2, b, ("Sz",))
        add_xy(-g.J1, a, ())
        add_xy(-g.J2, b, ())
        add_xy(-g.J13, a, ("Sz",))
        add_xy(-g.J23, b, ("Sz",))
        add_xy(-g.J14, a, ("Sz", "Sz"))
    return strings


@dataclass
class MPO:
    """Per-site tensors W[i] with shape (Dl, Dr, d, d)."""

    tensors: list

    @property
    def n_sites(self) -> int:
        return len(self.tensors)

    @property
    def bond_dims(self) -> list:
        return [w.shape[0] for w in self.tensors] + [self.tensors[-1].shape[1]]


def compile_mpo(strings: list[OperatorString], n_sites: int) -> MPO:
    """Compile operator strings into an MPO via a finite-state machine."""
    for s in strings:
        if s.start < 0 or s.last >= n_sites:
            raise ValueError(f"string {s} outside the {n_sites}-site chain")

    # per-bond automaton states: 0 = ready, 1 = done, then one per in-flight string
    active = [[] for _ in range(n_sites + 1)]
    for idx, s in enumerate(strings):
        for bond in range(s.start + 1, s.last + 1):
            active[bond].append(idx)
    dims = [2 + len(a) for a in active]  # boundary bonds carry no in-flight strings
    index = [
        {sid: 2 + pos for pos, sid in enumerate(a)} for a in active
    ]

    tensors = []
    for site in range(n_sites):
        W = np.zeros((dims[site], dims[site + 1], 2, 2))
        W[0, 0] = LOCAL_OPS["Id"]
        W[1, 1] = LOCAL_OPS["Id"]
        tensors.append(W)
    for sid, s in enumerate(strings):
        for off, name in enumerate(s.ops):
            site = s.start + off
            op = LOCAL_OPS[name]
            left = 0 if off == 0 else index[site][sid]
            right = 1 if off == s.span - 1 else index[site + 1][sid]
            coeff = s.coefficient if off == 0 else 1.0
            tensors[site][left, right] += coeff * op

    tensors[0] = tensors[0][0:1, :, :, :]
    tensors[-1] = tensors[-1][:, 1:2, :, :]
    return MPO(tensors=tensors)


def strings_to_dense(strings, n_sites: int) -> np.ndarray:
    """Dense sum of the operator strings (small chains only)."""
    dim = 2**n_sites
    H = np.zeros((dim, dim))
    for s in strings:
        ops = [LOCAL_OPS["Id"]] * n_sites
        for off, name in enumerate(s.ops):
            ops[s.start + off] = LOCAL_OPS[name]
        term = np.array([[s.coefficient]])
        for op in ops:
            term = np.kron(term, op)
        H += term
    return H


def mpo_to_dense(mpo: MPO) -> np.ndarray:
    """Contract all MPO tensors into a dense matrix (small chains only)."""
    out = mpo.tensors[0]  # (1, D, d, d)
    for W in mpo.tensors[1:]:
        # (l, r, a, b) x (r, q, c, d) -> (l, q, a, c, b, d) -> merged physical legs
        out = np.einsum("lrab,rqcd->lqacbd", out, W)
        l, q, a, c, b, d = out.shape
        out = out.reshape(l, q, a * c, b * d)
    return out[0, 0]
