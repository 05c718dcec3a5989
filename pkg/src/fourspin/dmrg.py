"""Two-site DMRG ground-state search over real MPS/MPO tensors.

MPS tensors are (Dl, d, Dr); the orthogonality centre moves with the sweep,
everything left of it left-canonical, everything right of it right-canonical.
Local two-site problems are solved by Lanczos (ARPACK, warm-started with the
current tensor pair; dense eigh for tiny blocks), then split by SVD with a
relative discarded-weight cutoff and a hard chi_max cap.

The Hamiltonian is real symmetric after the ladder-operator rewrite, so all
tensors stay float64.  Bond dimension ramps up over the first sweeps; with a
truncation cutoff the working chi usually stays well below the cap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse.linalg import LinearOperator, eigsh

from .errors import NonConvergenceError
from .mpo import MPO

__all__ = ["SweepConfig", "MPS", "DMRGResult", "random_mps", "dmrg_ground",
           "dmrg_ground_best", "ee_center", "entropy_from_singulars"]


@dataclass(frozen=True)
class SweepConfig:
    chi_max: int = 300
    svd_cutoff: float = 1e-10
    max_sweeps: int = 20
    energy_tol: float = 1e-9
    lanczos_tol: float = 1e-10
    seed: int = 0
    init_bond: int = 8
    ramp: bool = True

    def __post_init__(self):
        if self.chi_max < 1:
            raise ValueError("chi_max must be >= 1")

    def chi_at_sweep(self, sweep: int) -> int:
        if not self.ramp:
            return self.chi_max
        return min(self.chi_max, 32 * 2**sweep)


@dataclass
class MPS:
    """Finite matrix-product state; tensors[i] has shape (Dl, d, Dr)."""

    tensors: list
    center: int = 0
    bond_singulars: dict = field(default_factory=dict)

    @property
    def n_sites(self) -> int:
        return len(self.tensors)

    @property
    def bond_dims(self) -> list:
        return [t.shape[2] for t in self.tensors[:-1]]

    def norm(self) -> float:
        c = self.tensors[self.center]
        return float(np.sqrt(np.tensordot(c, c, axes=3)))

    def canonical_residuals(self):
        """Max deviation from left/right isometry away from the centre."""
        res = 0.0
        for i, t in enumerate(self.tensors):
            dl, d, dr = t.shape
            if i < self.center:
                m = t.reshape(dl * d, dr)
                res = max(res, float(np.max(np.abs(m.T @ m - np.eye(dr)))))
            elif i > self.center:
                m = t.reshape(dl, d * dr)
                res = max(res, float(np.max(np.abs(m @ m.T - np.eye(dl)))))
        return res


def random_mps(n_sites: int, bond: int, seed: int = 0) -> MPS:
    """Random real MPS, right-canonicalized with the centre at site 0."""
    rng = np.random.default_rng(seed)
    dims = [1] + [min(bond, 2 ** min(i, n_sites - i)) for i in range(1, n_sites)] + [1]
    tensors = [rng.standard_normal((dims[i], 2, dims[i + 1])) for i in range(n_sites)]
    mps = MPS(tensors=tensors, center=n_sites - 1)
    for i in range(n_sites - 1, 0, -1):
        _move_center_left(mps)
    c = mps.tensors[0]
    mps.tensors[0] = c / np.sqrt(np.tensordot(c, c, axes=3))
    return mps


def _move_center_right(mps: MPS):
    i = mps.center
    t = mps.tensors[i]
    dl, d, dr = t.shape
    q, r = np.linalg.qr(t.reshape(dl * d, dr))
    mps.tensors[i] = q.reshape(dl, d, q.shape[1])
    mps.tensors[i + 1] = np.tensordot(r, mps.tensors[i + 1], axes=(1, 0))
    mps.center = i + 1


def _move_center_left(mps: MPS):
    i = mps.center
    t = mps.tensors[i]
    dl, d, dr = t.shape
    q, r = np.linalg.qr(t.reshape(dl, d * dr).T)
    mps.tensors[i] = q.T.reshape(q.shape[1], d, dr)
    mps.tensors[i - 1] = np.tensordot(mps.tensors[i - 1], r.T, axes=(2, 0))
    mps.center = i - 1


def entropy_from_singulars(s: np.ndarray) -> float:
    p = s**2
    p = p[p > 1e-20]
    p = p / p.sum()
    return float(-(p * np.log(p)).sum())


def ee_center(mps: MPS) -> float:
    """Von Neumann entropy across the central bond (n_sites // 2 sites left)."""
    bond = mps.n_sites // 2  # bond index b sits between sites b-1 and b
    s = mps.bond_singulars.get(bond)
    if s is None:
        work = MPS([t.copy() for t in mps.tensors], mps.center, dict(mps.bond_singulars))
        while work.center < bond - 1:
            _move_center_right(work)
        while work.center > bond - 1:
            _move_center_left(work)
        t = work.tensors[bond - 1]
        dl, d, dr = t.shape
        s = np.linalg.svd(t.reshape(dl * d, dr), compute_uv=False)
        s = s / np.linalg.norm(s)
    return entropy_from_singulars(np.asarray(s))


# --- environments and the local problem -------------------------------------

def _left_edge(mps, mpo):
    return np.ones((1, 1, 1))


def _contract_left(env, A, W):
    # env (al, w, ab), A (ab, d, rb), W (w, w2, du, dd) -> (ru, w2, rb)
    t = np.tensordot(env, A, axes=(2, 0))          # (al, w, d, rb)
    t = np.tensordot(t, W, axes=((1, 2), (0, 3)))  # (al, rb, w2, du)
    t = np.tensordot(t, A.conj(), axes=((0, 3), (0, 1)))  # (rb, w2, ru)
    return t.transpose(2, 1, 0)


def _contract_right(env, A, W):
    # env (ru, w, rb), A (lb, d, rb), W (w, ... ) contracted from the right
    t = np.tensordot(A, env, axes=(2, 2))          # (lb, d, ru, w)
    t = np.tensordot(t, W, axes=((3, 1), (1, 3)))  # (lb, ru, lw, du)
    t = np.tensordot(t, A.conj(), axes=((3, 1), (1, 2)))  # (lb, lw, lu)
    return t.transpose(2, 1, 0)


class _TwoSiteProblem:
    def __init__(self, left, W1, W2, right):
        self.left = left
        self.right = right
        self.LW = np.tensordot(left, W1, axes=(1, 0))    # (al, ab, w2, du, dd)
        self.RW = np.tensordot(right, W2, axes=(1, 1))   # (ru, rb, w2, du, dd)
        self.shape = (left.shape[2], 2, 2, right.shape[2])
        n = int(np.prod(self.shape))
        self.op = LinearOperator((n, n), matvec=self._matvec, dtype=np.float64)

    def _matvec(self, x):
        theta = x.reshape(self.shape)                     # (lb, d1, d2, rb)
        t = np.tensordot(self.LW, theta, axes=((1, 4), (0, 1)))  # (al, w2, du1, d2, rb)
        t = np.tensordot(t, self.RW, axes=((1, 3, 4), (2, 4, 1)))  # (al, du1, ru, du2)
        return t.transpose(0, 1, 3, 2).reshape(-1)


def _solve_two_site(problem, theta0, tol):
    n = problem.op.shape[0]
    if n <= 128:
        dense = np.empty((n, n))
        eye = np.eye(n)
        for j in range(n):
            dense[:, j] = problem.op.matvec(eye[:, j])
        w, v = np.linalg.eigh(0.5 * (dense + dense.T))
        return float(w[0]), v[:, 0]
    v0 = theta0.reshape(-1)
    try:
        w, v = eigsh(problem.op, k=1, which="SA", v0=v0, tol=tol,
                     ncv=min(n, 24), maxiter=4000)
    except Exception as exc:  # ArpackNoConvergence and friends
        raise NonConvergenceError(f"local eigensolve failed: {exc}") from exc
    return float(w[0]), v[:, 0]


def _truncate(theta, chi_max, cutoff):
    dl = theta.shape[0] * theta.shape[1]
    dr = theta.shape[2] * theta.shape[3]
    u, s, vt = np.linalg.svd(theta.reshape(dl, dr), full_matrices=False)
    norm2 = float((s**2).sum())
    keep = len(s)
    if cutoff > 0.0:
        tail = np.cumsum((s**2)[::-1])[::-1] / norm2
        keep = int(np.searchsorted(-tail, -cutoff, side="right"))
        keep = max(keep, 1)
    keep = min(keep, chi_max)
    discarded = float((s[keep:] ** 2).sum()) / norm2
    s = s[:keep] / np.linalg.norm(s[:keep])
    return u[:, :keep], s, vt[:keep, :], discarded


@dataclass
class DMRGResult:
    energy: float
    mps: MPS
    converged: bool
    n_sweeps: int
    last_delta: float
    sweep_energies: list
    half_sweep_energies: list
    max_discarded: float
    seed: int


def dmrg_ground(mpo: MPO, config: SweepConfig = SweepConfig()) -> DMRGResult:
    """Two-site sweeps until the per-sweep energy change drops below tolerance."""
    L = mpo.n_sites
    if L < 4:
        raise ValueError("two-site DMRG needs at least 4 sites")
    mps = random_mps(L, config.init_bond, seed=config.seed)
    left_envs = [None] * (L + 1)
    right_envs = [None] * (L + 1)
    left_envs[0] = _left_edge(mps, mpo)
    right_envs[L] = _left_edge(mps, mpo)
    for i in range(L - 1, 1, -1):
        right_envs[i] = _contract_right(right_envs[i + 1], mps.tensors[i], mpo.tensors[i])

    energy = math.inf
    sweep_energies = []
    half_energies = []
    max_discarded = 0.0
    converged = False
    delta = math.inf

    for sweep in range(config.max_sweeps):
        chi = config.chi_at_sweep(sweep)
        half_min = math.inf

        def update(i, moving_right):
            nonlocal half_min, max_discarded
            theta0 = np.tensordot(mps.tensors[i], mps.tensors[i + 1], axes=(2, 0))
            problem = _TwoSiteProblem(left_envs[i], mpo.tensors[i], mpo.tensors[i + 1],
                                      right_envs[i + 2])
            e, vec = _solve_two_site(problem, theta0, config.lanczos_tol)
            theta = vec.reshape(theta0.shape)
            u, s, vt, disc = _truncate(theta, chi, config.svd_cutoff)
            max_discarded = max(max_discarded, disc)
            keep = len(s)
            dl, _, _, dr = theta0.shape
            if moving_right:
                mps.tensors[i] = u.reshape(dl, 2, keep)
                mps.tensors[i + 1] = (np.diag(s) @ vt).reshape(keep, 2, dr)
                mps.center = i + 1
                left_envs[i + 1] = _contract_left(left_envs[i], mps.tensors[i],
                                                  mpo.tensors[i])
            else:
                mps.tensors[i] = (u @ np.diag(s)).reshape(dl, 2, keep)
                mps.tensors[i + 1] = vt.reshape(keep, 2, dr)
                mps.center = i
                right_envs[i + 1] = _contract_right(right_envs[i + 2], mps.tensors[i + 1],
                                                    mpo.tensors[i + 1])
            mps.bond_singulars = {i + 1: s}
            half_min = min(half_min, e)
            return e

        for i in range(L - 1):  # rightward half-sweep
            update(i, moving_right=True)
        half_energies.append(half_min)
        half_min = math.inf
        for i in range(L - 2, -1, -1):  # leftward half-sweep
            update(i, moving_right=False)
        half_energies.append(half_min)

        sweep_min = min(half_energies[-2:])
        sweep_energies.append(sweep_min)
        delta = abs(energy - sweep_min)
        energy = sweep_min
        # the chi ramp must not be the binding constraint when we stop
        ramp_done = chi >= config.chi_max or max(mps.bond_dims) < chi
        if delta < config.energy_tol and sweep > 0 and ramp_done:
            converged = True
            break

    if not converged:
        raise NonConvergenceError(
            f"DMRG not converged after {config.max_sweeps} sweeps "
            f"(last energy change {delta:.3e})", last_delta=delta)
    return DMRGResult(energy=energy, mps=mps, converged=converged,
                      n_sweeps=len(sweep_energies), last_delta=delta,
                      sweep_energies=sweep_energies, half_sweep_energies=half_energies,
                      max_discarded=max_discarded, seed=config.seed)


def dmrg_ground_best(mpo: MPO, config: SweepConfig = SweepConfig(),
                     seeds=(0, 1)) -> tuple[DMRGResult, list]:
    """Run several seeds, keep the lowest energy; useful near level crossings.

    Returns (best result, list of all energies).
    """
    import dataclasses

    results = []
    for seed in seeds:
        results.append(dmrg_ground(mpo, dataclasses.replace(config, seed=seed)))
    best = min(results, key=lambda r: r.energy)
    return best, [r.energy for r in results]
