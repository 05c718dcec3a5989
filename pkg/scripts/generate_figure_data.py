#!/usr/bin/env python3
"""Drive the fourspin CLI to regenerate every figure dataset.

Writes one CSV per dataset into --data-dir (default ./data).  The DMRG
entanglement scans are expensive; by default the free-fermion path is used
and DMRG runs only when --dmrg is given.
"""

import argparse
import pathlib
import sys

from fourspin.cli import main as fourspin_main

RUNS = {
    "phase_diagram": ["phase-diagram", "--J3-min", "0", "--J3-max", "3",
                      "--step", "0.01"],
    # Ricci scan of region I at three system sizes (J3 = 0.5)
    "ricci_region1_N51": ["ricci", "--J3", "0.5", "--h-min", "0.2", "--h-max",
                          "0.495", "--step", "0.005", "--N", "51"],
    "ricci_region1_N101": ["ricci", "--J3", "0.5", "--h-min", "0.2", "--h-max",
                           "0.495", "--step", "0.005", "--N", "101"],
    "ricci_region1_N1001": ["ricci", "--J3", "0.5", "--h-min", "0.2", "--h-max",
                            "0.495", "--step", "0.005", "--N", "1001"],
    # Ricci scan of region III (J3 = 0.2); divergence approaching h13 = 1.676
    "ricci_region3_N101": ["ricci", "--J3", "0.2", "--h-min", "1.45", "--h-max",
                           "1.675", "--step", "0.002", "--N", "101"],
    # region-II geodesic and its Fubini-Study complexity derivative
    "geodesic_N51": ["geodesic", "--h0", "1", "--J30", "1", "--dJ30", "0.04",
                     "--steps", "6000", "--dtau", "0.001", "--N", "51"],
    "fsc_N51": ["fsc", "--h0", "1", "--J30", "1", "--dJ30", "0.04",
                "--steps", "6000", "--dtau", "0.001", "--N", "51",
                "--step", "0.02"],
    # static-NC derivative vs target field
    "nc_static": ["nc-static", "--hR", "0.2", "--J3R", "0.1", "--J3T", "0.3",
                  "--h-min", "0.05", "--h-max", "2.2", "--step", "0.005",
                  "--N", "101"],
    # single-quench NC vs Loschmidt echo at the three reference fields
    "quench_h05": ["quench", "--h", "0.5", "--delta", "0.1", "--J3", "0.2",
                   "--N", "101", "--t-max", "50"],
    "quench_h10": ["quench", "--h", "1.0", "--delta", "0.1", "--J3", "0.2",
                   "--N", "101", "--t-max", "50"],
    "quench_h14": ["quench", "--h", "1.4", "--delta", "0.1", "--J3", "0.2",
                   "--N", "101", "--t-max", "50"],
    # four sudden quenches, three parameter sets
    "multi_quench_a": ["multi-quench", "--h0", "1", "--delta", "-0.4",
                       "--J3", "1.5", "--N", "501", "--t-max", "105"],
    "multi_quench_b": ["multi-quench", "--h0", "1", "--delta", "-0.2",
                       "--J3", "1.5", "--N", "501", "--t-max", "105"],
    "multi_quench_c": ["multi-quench", "--h0", "3", "--delta", "0.2",
                       "--J3", "1.5", "--N", "501", "--t-max", "105"],
    # long-time runs at two system sizes
    "multi_quench_long_N501": ["multi-quench", "--h0", "1", "--delta", "-0.2",
                               "--J3", "1.5", "--N", "501", "--t-max", "405"],
    "multi_quench_long_N1001": ["multi-quench", "--h0", "1", "--delta", "-0.2",
                                "--J3", "1.5", "--N", "1001", "--t-max", "405"],
    # entanglement entropy scans (free-fermion path)
    "ee_three_spin": ["ee-corr", "--model", "three-spin", "--H", "0",
                      "--J1", "1.2", "--J2", "0.8", "--J3-min", "0",
                      "--J3-max", "3", "--step", "0.01", "--cells", "51"],
    "ee_four_spin_h025": ["ee-corr", "--model", "four-spin", "--h", "0.25",
                          "--J3-min", "0", "--J3-max", "3", "--step", "0.01",
                          "--cells", "51"],
    "ee_four_spin_h250": ["ee-corr", "--model", "four-spin", "--h", "2.5",
                          "--J3-min", "0", "--J3-max", "3", "--step", "0.01",
                          "--cells", "51"],
}

DMRG_RUNS = {
    "ee_three_spin_dmrg": ["ee-dmrg", "--model", "three-spin", "--H", "0",
                           "--J1", "1.2", "--J2", "0.8", "--J3-min", "0",
                           "--J3-max", "3", "--step", "0.05", "--cells", "51",
                           "--chi", "300"],
    "ee_four_spin_h025_dmrg": ["ee-dmrg", "--model", "four-spin", "--h", "0.25",
                               "--J3-min", "0", "--J3-max", "3", "--step", "0.05",
                               "--cells", "51", "--chi", "300"],
}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--data-dir", default="data")
    ap.add_argument("--only", nargs="*", help="subset of dataset names")
    ap.add_argument("--dmrg", action="store_true", help="include the DMRG scans")
    args = ap.parse_args(argv)

    runs = dict(RUNS)
    if args.dmrg:
        runs.update(DMRG_RUNS)
    if args.only:
        unknown = set(args.only) - set(runs)
        if unknown:
            ap.error(f"unknown dataset(s): {sorted(unknown)}")
        runs = {k: runs[k] for k in args.only}

    out_dir = pathlib.Path(args.data_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, cli_args in runs.items():
        out = out_dir / f"{name}.csv"
        print(f"-> {out}")
        rc = fourspin_main(cli_args + ["--out", str(out)])
        if rc != 0:
            print(f"run {name} failed with exit code {rc}", file=sys.stderr)
            return rc
    return 0


if __name__ == "__main__":
    sys.exit(main())
