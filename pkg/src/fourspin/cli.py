"""Command-line scan drivers with self-describing CSV output.

Every run writes a single UTF-8 CSV: a '#'-prefixed header block (tool
version, subcommand, full parameter echo, seed), one column-header row, then
data rows at 17 significant digits.  Identical configurations reproduce
byte-identical files.

Exit codes: 0 success, 2 argument error, 3 numerical failure.

A flat "key = value" config file can seed any subcommand's defaults
(--config); explicit command-line flags win.  Scan points can be dispatched
to a process pool sized by the FOURSPIN_WORKERS environment variable; output
order is the scan order either way.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import __version__
from .errors import NumericsError
from .params import ReducedParams, GeneralCouplings

FLOAT_FMT = "%.17g"


def _fmt(value) -> str:
    if isinstance(value, float):
        return FLOAT_FMT % (value + 0.0)  # normalizes -0.0
    return str(value)


def write_csv(path, command: str, params: dict, columns, rows, seed=0):
    lines = [f"# fourspin {__version__}", f"# command = {command}"]
    for key in sorted(params):
        lines.append(f"# {key} = {_fmt(params[key])}")
    lines.append(f"# seed = {_fmt(seed)}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    text = "\n".join(lines) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _worker_count() -> int:
    raw = os.environ.get("FOURSPIN_WORKERS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _map_points(fn, points):
    """Map fn over scan points, preserving order; pool size from the environment."""
    n = _worker_count()
    if n == 1 or len(points) < 4:
        return [fn(x) for x in points]
    import multiprocessing as mp

    with mp.Pool(n) as pool:
        return pool.map(fn, points)


def _scan_values(lo, hi, step):
    if step <= 0:
        raise ValueError("step must be > 0")
    if hi < lo:
        raise ValueError("scan minimum exceeds maximum")
    n = int(round((hi - lo) / step))
    return [lo + i * step for i in range(n + 1) if lo + i * step <= hi + 1e-12]


# --- subcommand implementations ---------------------------------------------

def _run_phase_diagram(args):
    from .model import critical_fields

    rows = []
    for J3 in _scan_values(args.J3_min, args.J3_max, args.step):
        cl = critical_fields(args.J, J3)
        rows.append((J3, cl.h1, cl.h2, cl.h3, cl.h13, cl.Hc1, cl.Hc2, cl.Hs))
    return ["J3", "h1", "h2", "h3", "h13", "Hc1", "Hc2", "Hs"], rows


def _run_dispersion(args):
    from .model import dispersion_arrays
    from .params import mode_grid

    p = ReducedParams(h=args.h, J3=args.J3, J=args.J, N=args.N)
    grid = mode_grid(args.N)
    d = dispersion_arrays(p, grid.k_values)
    rows = [
        (int(lam), float(k), float(l), float(th), float(e1), float(e2))
        for lam, k, l, th, e1, e2 in zip(
            grid.lambdas, grid.k_values, d["Lambda"], d["theta"], d["E1"], d["E2"])
    ]
    return ["lambda", "k", "Lambda", "theta", "E1", "E2"], rows


def _run_metric(args):
    from .metric import qim, qim_thermo
    from .model import classify

    rows = []
    for h in _scan_values(args.h_min, args.h_max, args.step):
        if args.thermo:
            g = qim_thermo(h, args.J3, J=args.J)
            region = classify(ReducedParams(h=h, J3=args.J3, J=args.J, N=1001)).region
        else:
            p = ReducedParams(h=h, J3=args.J3, J=args.J, N=args.N)
            g = qim(p)
            region = classify(p).region
        rows.append((h, g.g_hh, g.g_hJ3, g.g_J3J3, region))
    return ["h", "g_hh", "g_hJ3", "g_J3J3", "region"], rows


def _ricci_point(args, h):
    from .errors import CurvatureUndefinedError
    from .metric import MetricField, ricci

    metric = (MetricField.thermodynamic(J=args.J) if args.thermo
              else MetricField.finite(args.N, J=args.J, granularity="region"))
    try:
        return h, ricci(h, args.J3, metric=metric, step=args.fd_step)
    except CurvatureUndefinedError:
        return h, math.nan


def _run_ricci(args):
    from functools import partial

    rows = _map_points(partial(_ricci_point, args),
                       _scan_values(args.h_min, args.h_max, args.step))
    return ["h", "R"], rows


def _geodesic_trajectory(args):
    from .geodesic import GeodesicState, geodesic, normalized_h_velocity
    from .metric import MetricField

    metric = (MetricField.thermodynamic(J=args.J) if args.thermo
              else MetricField.finite(args.N, J=args.J))
    dh0 = args.dh0
    if dh0 is None:
        dh0 = normalized_h_velocity(metric, args.h0, args.J30, args.dJ30)
    start = GeodesicState(h=args.h0, J3=args.J30, dh=dh0, dJ3=args.dJ30)
    traj = geodesic(start, steps=args.steps, dtau=args.dtau, metric=metric,
                    norm_check=None)
    return traj


def _run_geodesic(args):
    traj = _geodesic_trajectory(args)
    rows = list(zip(traj.tau, traj.h, traj.J3, traj.dh, traj.dJ3, traj.norm))
    return ["tau", "h", "J3", "dh", "dJ3", "norm"], rows


def _run_fsc(args):
    from .geodesic import fsc_derivative, fsc_tau_of_h

    traj = _geodesic_trajectory(args)
    n = len(traj.h)
    hs = traj.h[: max(2, n - 1)]
    lo, hi = float(hs.min()), float(hs.max())
    targets = [h for h in _scan_values(lo, hi, args.step) if lo <= h <= hi]
    taus = fsc_tau_of_h(traj, targets)
    ders = fsc_derivative(traj, targets)
    rows = list(zip(targets, taus, ders))
    return ["h", "tau", "dCFS_dh"], rows


def _run_nc_static(args):
    from .quench import static_nc, static_nc_derivative

    ref = ReducedParams(h=args.hR, J3=args.J3R, J=args.J, N=args.N)
    rows = []
    for hT in _scan_values(args.h_min, args.h_max, args.step):
        tgt = ReducedParams(h=hT, J3=args.J3T, J=args.J, N=args.N)
        rows.append((hT, static_nc(ref, tgt), static_nc_derivative(ref, tgt)))
    return ["hT", "C_N", "dCN_dhT"], rows


def _run_quench(args):
    from .quench import loschmidt, nc_of_t

    t = np.arange(0.0, args.t_max + 0.5 * args.dt, args.dt)
    C = nc_of_t(args.h, args.delta, args.J3, t, args.N, J=args.J)
    L = loschmidt(args.h, args.delta, args.J3, t, args.N, J=args.J)
    with np.errstate(divide="ignore"):
        mins = -np.log(L) / args.N
    rows = list(zip(t, C / args.N, L, mins))
    return ["t", "C_N_over_N", "L", "minus_lnL_over_N"], rows


def _run_multi_quench(args):
    from .quench import multi_quench_scan

    recs = multi_quench_scan(h0=args.h0, delta=args.delta, J3=args.J3, N=args.N,
                             T=args.T, n_cycles=args.cycles, t_max=args.t_max,
                             dt=args.dt, J=args.J)
    rows = [(r.t, r.C_N, r.L) for r in recs]
    return ["t", "C_N", "L"], rows


def _scan_point_params(args, J3):
    if args.model == "four-spin":
        return ReducedParams(h=args.h, J3=J3, J=args.J, N=args.cells)
    return GeneralCouplings(mu1=1.0, mu2=1.0, H_field=args.H, J1=args.J1,
                            J2=args.J2, J13=J3, J23=J3, J14=0.0, J24=0.0)


def _ee_corr_point(args, J3):
    from .fermions import build_hopping, ee_correlation, free_fermion_ground_energy

    p = _scan_point_params(args, J3)
    S = ee_correlation(p, n_cells=args.cells)
    E = free_fermion_ground_energy(build_hopping(p, n_cells=args.cells))
    return J3, S, E


def _run_ee_corr(args):
    from functools import partial

    rows = _map_points(partial(_ee_corr_point, args),
                       _scan_values(args.J3_min, args.J3_max, args.step))
    return ["J3", "S", "energy"], rows


def _ee_dmrg_point(args, J3):
    from .dmrg import SweepConfig, dmrg_ground_best, ee_center
    from .mpo import chain_strings, compile_mpo

    config = SweepConfig(chi_max=args.chi, svd_cutoff=args.cutoff,
                         max_sweeps=args.sweeps, energy_tol=args.energy_tol,
                         seed=args.seed)
    p = _scan_point_params(args, J3)
    mpo = compile_mpo(chain_strings(p, n_cells=args.cells), 2 * args.cells)
    best, _ = dmrg_ground_best(mpo, config,
                               seeds=tuple(range(args.seed, args.seed + args.n_seeds)))
    return J3, ee_center(best.mps), best.energy


def _run_ee_dmrg(args):
    from functools import partial

    rows = _map_points(partial(_ee_dmrg_point, args),
                       _scan_values(args.J3_min, args.J3_max, args.step))
    return ["J3", "S", "energy"], rows


def _run_xy_quench(args):
    from .quench import XYModes, evolve_modes, multi_quench_protocol

    base = ReducedParams(h=args.h0, J3=0.0, J=1.0, N=args.N)
    if args.cycles > 1 or args.T is not None:
        T = args.T if args.T is not None else 15.0
        protocol = multi_quench_protocol(base, args.delta, T, args.cycles)
        segments = protocol.segments
    else:
        from .quench import QuenchSegment

        segments = (QuenchSegment(args.delta, math.inf),)
    modes = XYModes(h0=args.h0, gamma=args.gamma, N=args.N)
    rows = []
    for t in np.arange(0.0, args.t_max + 0.5 * args.dt, args.dt):
        amps = evolve_modes(modes, segments, float(t))
        overlap = np.abs(amps[:, 0])
        phi = np.arccos(np.clip(overlap, 0.0, 1.0))
        rows.append((float(t), float(np.sum(phi**2)), float(np.prod(overlap**2))))
    return ["t", "C_N", "L"], rows


# --- parser -------------------------------------------------------------------

def _add_common(sub):
    sub.add_argument("--out", default="-", help="output CSV path ('-' = stdout)")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--config", default=None, help="flat key = value defaults file")
    sub.add_argument("--J", type=float, default=1.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fourspin",
        description="Desk-scale numerics for the three/four-spin interaction chain",
    )
    parser.add_argument("--version", action="version", version=f"fourspin {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    s = subs.add_parser("phase-diagram", help="critical lines h1,h2,h3,h13 vs J3")
    _add_common(s)
    s.add_argument("--J3-min", type=float, default=0.0)
    s.add_argument("--J3-max", type=float, default=3.0)
    s.add_argument("--step", type=float, default=0.01)
    s.set_defaults(fn=_run_phase_diagram)

    s = subs.add_parser("dispersion", help="per-mode Bogoliubov data")
    _add_common(s)
    s.add_argument("--h", type=float, required=True)
    s.add_argument("--J3", type=float, default=0.0)
    s.add_argument("--N", type=int, default=101)
    s.set_defaults(fn=_run_dispersion)

    s = subs.add_parser("metric", help="information-metric components along an h-scan")
    _add_common(s)
    s.add_argument("--J3", type=float, required=True)
    s.add_argument("--h-min", type=float, required=True)
    s.add_argument("--h-max", type=float, required=True)
    s.add_argument("--step", type=float, default=0.01)
    s.add_argument("--N", type=int, default=101)
    s.add_argument("--thermo", action="store_true")
    s.set_defaults(fn=_run_metric)

    s = subs.add_parser("ricci", help="Ricci scalar along an h-scan")
    _add_common(s)
    s.add_argument("--J3", type=float, required=True)
    s.add_argument("--h-min", type=float, required=True)
    s.add_argument("--h-max", type=float, required=True)
    s.add_argument("--step", type=float, default=0.005)
    s.add_argument("--N", type=int, default=1001)
    s.add_argument("--thermo", action="store_true")
    s.add_argument("--fd-step", type=float, default=1e-4)
    s.set_defaults(fn=_run_ricci)

    for name, fn in (("geodesic", _run_geodesic), ("fsc", _run_fsc)):
        s = subs.add_parser(name, help=f"{name} from a normalized start")
        _add_common(s)
        s.add_argument("--h0", type=float, required=True)
        s.add_argument("--J30", type=float, required=True)
        s.add_argument("--dJ30", type=float, default=0.0)
        s.add_argument("--dh0", type=float, default=None,
                       help="default: fixed by the unit-norm condition")
        s.add_argument("--steps", type=int, default=4000)
        s.add_argument("--dtau", type=float, default=1e-3)
        s.add_argument("--N", type=int, default=51)
        s.add_argument("--thermo", action="store_true")
        if name == "fsc":
            s.add_argument("--step", type=float, default=0.01, help="h grid for tau(h)")
        s.set_defaults(fn=fn)

    s = subs.add_parser("nc-static", help="static Nielsen complexity vs target field")
    _add_common(s)
    s.add_argument("--hR", type=float, required=True)
    s.add_argument("--J3R", type=float, required=True)
    s.add_argument("--J3T", type=float, required=True)
    s.add_argument("--h-min", type=float, required=True)
    s.add_argument("--h-max", type=float, required=True)
    s.add_argument("--step", type=float, default=0.005)
    s.add_argument("--N", type=int, default=101)
    s.set_defaults(fn=_run_nc_static)

    s = subs.add_parser("quench", help="single-quench NC and Loschmidt echo vs time")
    _add_common(s)
    s.add_argument("--h", type=float, required=True)
    s.add_argument("--delta", type=float, required=True)
    s.add_argument("--J3", type=float, default=0.0)
    s.add_argument("--N", type=int, default=101)
    s.add_argument("--t-max", type=float, default=50.0)
    s.add_argument("--dt", type=float, default=0.05)
    s.set_defaults(fn=_run_quench)

    s = subs.add_parser("multi-quench", help="alternating quench protocol NC vs time")
    _add_common(s)
    s.add_argument("--h0", type=float, required=True)
    s.add_argument("--delta", type=float, required=True)
    s.add_argument("--J3", type=float, default=0.0)
    s.add_argument("--N", type=int, default=501)
    s.add_argument("--T", type=float, default=15.0)
    s.add_argument("--cycles", type=int, default=4)
    s.add_argument("--t-max", type=float, default=None)
    s.add_argument("--dt", type=float, default=0.05)
    s.set_defaults(fn=_run_multi_quench)

    for name, fn in (("ee-corr", _run_ee_corr), ("ee-dmrg", _run_ee_dmrg)):
        s = subs.add_parser(name, help=f"entanglement entropy vs J3 ({name[3:]} path)")
        _add_common(s)
        s.add_argument("--model", choices=("four-spin", "three-spin"), default="four-spin")
        s.add_argument("--h", type=float, default=0.0, help="four-spin reduced field")
        s.add_argument("--H", type=float, default=0.0, help="three-spin field")
        s.add_argument("--J1", type=float, default=1.2)
        s.add_argument("--J2", type=float, default=0.8)
        s.add_argument("--J3-min", type=float, default=0.0)
        s.add_argument("--J3-max", type=float, default=3.0)
        s.add_argument("--step", type=float, default=0.01)
        s.add_argument("--cells", type=int, default=51)
        if name == "ee-dmrg":
            s.add_argument("--chi", type=int, default=300)
            s.add_argument("--cutoff", type=float, default=1e-10)
            s.add_argument("--sweeps", type=int, default=20)
            s.add_argument("--energy-tol", type=float, default=1e-9)
            s.add_argument("--n-seeds", type=int, default=2)
        s.set_defaults(fn=fn)

    s = subs.add_parser("xy-quench", help="XY-chain quench NC/LE vs time")
    _add_common(s)
    s.add_argument("--h0", type=float, required=True)
    s.add_argument("--delta", type=float, required=True)
    s.add_argument("--gamma", type=float, default=1.0)
    s.add_argument("--N", type=int, default=101)
    s.add_argument("--T", type=float, default=None)
    s.add_argument("--cycles", type=int, default=1)
    s.add_argument("--t-max", type=float, default=50.0)
    s.add_argument("--dt", type=float, default=0.05)
    s.set_defaults(fn=_run_xy_quench)

    return parser


def _apply_config_file(parser, argv):
    """Seed subparser defaults from a flat key = value file, flags still win."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    path = argv[idx + 1]
    overrides = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            overrides[key.strip().replace("-", "_")] = value.strip()
    for action in parser._subparsers._group_actions:
        for sub in action.choices.values():
            known = {a.dest: a for a in sub._actions}
            usable = {}
            for key, raw in overrides.items():
                if key not in known:
                    continue
                cast = known[key].type
                usable[key] = cast(raw) if cast is not None else raw
                known[key].required = False  # config satisfies the requirement
            sub.set_defaults(**usable)
    return argv


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _apply_config_file(parser, argv)
    except OSError as exc:
        print(f"error: cannot read config file: {exc}", file=sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    params = {
        k: v for k, v in sorted(vars(args).items())
        if k not in ("fn", "out", "config", "command", "seed") and v is not None
    }
    try:
        columns, rows = args.fn(args)
    except NumericsError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    write_csv(args.out, args.command, params, columns, rows, seed=args.seed)
    return 0


if __name__ == "__main__":
    sys.exit(main())
