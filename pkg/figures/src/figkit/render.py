"""Figure renderers: CSV columns in, deterministic PNG/SVG out.

Each renderer validates its inputs' parameter headers, draws only what the
CSVs contain (plus critical-line overlays read from the phase-diagram CSV),
and embeds every input's header block in the image metadata under
`fourspin:<file-index>:<key>` entries.  No physics is recomputed here.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .csvio import FigureInputError, ScanData, read_scan, require_params  # noqa: E402

__all__ = ["FIGURES", "render"]

FIGSIZE = (6.4, 4.8)
DPI = 150


def _metadata(scans):
    meta = {"Software": "figkit"}
    for i, s in enumerate(scans):
        for key, val in sorted(s.header.items()):
            meta[f"fourspin:{i}:{key}"] = val
    return meta


def _save(fig, out_path, scans):
    meta = _metadata(scans)
    if str(out_path).endswith(".svg"):
        # SVG writers only keep well-known keys; fold the block into one
        meta = {"Title": "figkit", "Description": repr(sorted(meta.items()))}
    fig.savefig(out_path, dpi=DPI, metadata=meta)
    plt.close(fig)


def _new_axes(xlabel, ylabel, title):
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    return fig, ax


def _overlay_critical_lines(ax, lines: ScanData, j3_max=None, h_max=None):
    J3 = lines.column("J3")
    mask = slice(None) if j3_max is None else J3 <= j3_max
    for name, style in (("h1", "-"), ("h2", "--"), ("h3", "-."), ("h13", ":")):
        h = lines.column(name)[mask]
        if h_max is not None:
            h = h.copy()
            h[h > h_max] = float("nan")
        ax.plot(J3[mask], h, style, color="black", lw=1, label=name)


def fig_phase_diagram(inputs, out_path):
    """Critical lines on the (J3, h) plane with region labels."""
    (lines,) = inputs
    require_params(lines, {"command": "phase-diagram"})
    fig, ax = _new_axes("J3", "h", "phase diagram (J = 1)")
    _overlay_critical_lines(ax, lines, h_max=4.0)
    for label, x, y in (("I", 0.25, 0.4), ("II", 1.2, 1.2), ("III", 0.2, 1.5),
                        ("IV", 2.4, 0.6), ("V", 1.0, 3.3)):
        ax.text(x, y, label, fontsize=14, ha="center")
    ax.set_xlim(0, 3)
    ax.set_ylim(0, 4)
    ax.legend(loc="lower right", fontsize=8)
    _save(fig, out_path, inputs)


def fig_ricci_region1(inputs, out_path):
    """Ricci scalar vs h in region I for several system sizes."""
    fig, ax = _new_axes("h", "R", "Ricci scalar, region I (J3 = 0.5)")
    for scan in inputs:
        require_params(scan, {"command": "ricci", "J3": 0.5})
        ax.plot(scan.column("h"), scan.column("R"), label=f"N = {scan.param('N')}")
    ax.legend()
    _save(fig, out_path, inputs)


def fig_ricci_region3(inputs, out_path):
    """Ricci scalar vs h in region III."""
    (scan,) = inputs
    require_params(scan, {"command": "ricci", "J3": 0.2, "N": 101})
    fig, ax = _new_axes("h", "R", "Ricci scalar, region III (J3 = 0.2, N = 101)")
    ax.plot(scan.column("h"), scan.column("R"), color="tab:red")
    ax.set_yscale("symlog", linthresh=10.0)
    _save(fig, out_path, inputs)


def fig_geodesic(inputs, out_path):
    """Geodesic path on the (J3, h) plane with critical lines."""
    traj, lines = inputs
    require_params(traj, {"command": "geodesic", "N": 51})
    require_params(lines, {"command": "phase-diagram"})
    fig, ax = _new_axes("J3", "h", "region-II geodesic (N = 51)")
    _overlay_critical_lines(ax, lines, h_max=4.2)
    ax.plot(traj.column("J3"), traj.column("h"), color="tab:red", lw=2,
            label="geodesic")
    ax.set_xlim(0, 3)
    ax.set_ylim(0, 4.2)
    ax.legend(loc="lower right", fontsize=8)
    _save(fig, out_path, inputs)


def fig_fsc_derivative(inputs, out_path):
    """dC_FS/dh along the geodesic vs h."""
    (scan,) = inputs
    require_params(scan, {"command": "fsc", "N": 51})
    fig, ax = _new_axes("h", "dC_FS/dh", "Fubini-Study complexity derivative")
    ax.plot(scan.column("h"), scan.column("dCFS_dh"), color="tab:blue")
    _save(fig, out_path, inputs)


def fig_nc_derivative(inputs, out_path):
    """Static-NC derivative vs target field, several reference points."""
    fig, ax = _new_axes("h^T", "dC_N/dh^T", "Nielsen-complexity derivative")
    for scan in inputs:
        require_params(scan, {"command": "nc-static", "N": 101})
        ax.plot(scan.column("hT"), scan.column("dCN_dhT"),
                label=f"h^R = {scan.param('hR')}, J3^R = {scan.param('J3R')}")
    ax.legend(fontsize=8)
    _save(fig, out_path, inputs)


def fig_quench_echo(inputs, out_path):
    """C_N/N (lines) against -ln(L)/N (markers) after a quench."""
    fig, ax = _new_axes("t", "C_N/N and -ln(L)/N", "quench complexity vs echo")
    colors = ("tab:red", "tab:green", "tab:blue")
    for scan, color in zip(inputs, colors):
        require_params(scan, {"command": "quench", "delta": 0.1, "J3": 0.2,
                              "N": 101})
        t = scan.column("t")
        ax.plot(t, scan.column("C_N_over_N"), color=color,
                label=f"h = {scan.param('h')}")
        ax.plot(t[::20], scan.column("minus_lnL_over_N")[::20], ls="none",
                marker="s", ms=3, color=color)
    ax.legend(fontsize=8)
    _save(fig, out_path, inputs)


def fig_multi_quench(inputs, out_path):
    """NC under four sudden quenches, one curve per parameter set."""
    fig, ax = _new_axes("t", "C_N", "multiple sudden quenches (N = 501)")
    for scan in inputs:
        require_params(scan, {"command": "multi-quench", "J3": 1.5, "N": 501,
                              "T": 15.0})
        ax.plot(scan.column("t"), scan.column("C_N"),
                label=f"h0 = {scan.param('h0')}, delta = {scan.param('delta')}")
    ax.legend(fontsize=8)
    _save(fig, out_path, inputs)


def fig_multi_quench_long(inputs, out_path):
    """Late-time NC for two system sizes."""
    fig, ax = _new_axes("t", "C_N", "late-time multi-quench NC")
    for scan in inputs:
        require_params(scan, {"command": "multi-quench", "J3": 1.5,
                              "h0": 1.0, "delta": -0.2})
        ax.plot(scan.column("t"), scan.column("C_N"),
                label=f"N = {scan.param('N')}")
    ax.legend(fontsize=8)
    _save(fig, out_path, inputs)


def fig_ee_three_spin(inputs, out_path):
    """Entanglement entropy vs J3 for the three-spin chain (H = 0)."""
    (scan,) = inputs
    require_params(scan, {"model": "three-spin", "H": 0.0, "J1": 1.2,
                          "J2": 0.8, "cells": 51})
    fig, ax = _new_axes("J3", "S", "three-spin chain entanglement (H = 0)")
    ax.plot(scan.column("J3"), scan.column("S"), color="tab:blue")
    _save(fig, out_path, inputs)


def fig_ee_four_spin(inputs, out_path):
    """Entanglement entropy vs J3 for the four-spin chain, one curve per field."""
    fig, ax = _new_axes("J3", "S", "four-spin chain entanglement")
    for scan, color in zip(inputs, ("tab:blue", "tab:red")):
        require_params(scan, {"model": "four-spin", "cells": 51})
        ax.plot(scan.column("J3"), scan.column("S"), color=color,
                label=f"h = {scan.param('h')}")
    ax.legend(fontsize=8)
    _save(fig, out_path, inputs)


FIGURES = {
    "phase-diagram": (fig_phase_diagram, 1),
    "ricci-region-i": (fig_ricci_region1, None),
    "ricci-region-iii": (fig_ricci_region3, 1),
    "geodesic": (fig_geodesic, 2),
    "fsc-derivative": (fig_fsc_derivative, 1),
    "nc-derivative": (fig_nc_derivative, None),
    "quench-echo": (fig_quench_echo, 3),
    "multi-quench": (fig_multi_quench, None),
    "multi-quench-long": (fig_multi_quench_long, None),
    "ee-three-spin": (fig_ee_three_spin, 1),
    "ee-four-spin": (fig_ee_four_spin, None),
}


def render(figure: str, csv_paths, out_path):
    """Render one named figure from its input CSVs."""
    if figure not in FIGURES:
        raise FigureInputError(f"unknown figure {figure!r}")
    fn, n_inputs = FIGURES[figure]
    if n_inputs is not None and len(csv_paths) != n_inputs:
        raise FigureInputError(
            f"{figure} needs exactly {n_inputs} input CSV(s), got {len(csv_paths)}")
    if not csv_paths:
        raise FigureInputError(f"{figure}: at least one input CSV required")
    scans = [read_scan(p) for p in csv_paths]
    fn(scans, out_path)
    return out_path
