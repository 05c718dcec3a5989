#!/usr/bin/env python3
"""Regenerate the golden CSVs consumed by the figkit tests.

Uses the fourspin CLI (the only interface figkit knows about).  Scan grids
are kept coarse so the files stay small; the parameter values the figures
validate are the real ones.
"""

import pathlib
import subprocess
import sys

GOLDEN = pathlib.Path(__file__).parent / "golden"

RUNS = {
    "phase_diagram.csv": ["phase-diagram", "--J3-min", "0", "--J3-max", "3",
                          "--step", "0.05"],
    "ricci_region1_N51.csv": ["ricci", "--J3", "0.5", "--h-min", "0.3",
                              "--h-max", "0.49", "--step", "0.01", "--N", "51"],
    "ricci_region1_N101.csv": ["ricci", "--J3", "0.5", "--h-min", "0.3",
                               "--h-max", "0.49", "--step", "0.01", "--N", "101"],
    "ricci_region3_N101.csv": ["ricci", "--J3", "0.2", "--h-min", "1.45",
                               "--h-max", "1.67", "--step", "0.005", "--N", "101"],
    "geodesic_N51.csv": ["geodesic", "--h0", "1", "--J30", "1", "--dJ30", "0.04",
                         "--steps", "220", "--dtau", "0.001", "--N", "51"],
    "fsc_N51.csv": ["fsc", "--h0", "1", "--J30", "1", "--dJ30", "0.04",
                    "--steps", "220", "--dtau", "0.001", "--N", "51",
                    "--step", "0.05"],
    "nc_static.csv": ["nc-static", "--hR", "0.2", "--J3R", "0.1", "--J3T", "0.3",
                      "--h-min", "0.1", "--h-max", "2.0", "--step", "0.02",
                      "--N", "101"],
    "quench_h05.csv": ["quench", "--h", "0.5", "--delta", "0.1", "--J3", "0.2",
                       "--N", "101", "--t-max", "20", "--dt", "0.1"],
    "quench_h10.csv": ["quench", "--h", "1.0", "--delta", "0.1", "--J3", "0.2",
                       "--N", "101", "--t-max", "20", "--dt", "0.1"],
    "quench_h14.csv": ["quench", "--h", "1.4", "--delta", "0.1", "--J3", "0.2",
                       "--N", "101", "--t-max", "20", "--dt", "0.1"],
    "multi_quench_b.csv": ["multi-quench", "--h0", "1", "--delta", "-0.2",
                           "--J3", "1.5", "--N", "501", "--t-max", "105",
                           "--dt", "0.25"],
    "multi_quench_long_N501.csv": ["multi-quench", "--h0", "1", "--delta", "-0.2",
                                   "--J3", "1.5", "--N", "501", "--t-max", "200",
                                   "--dt", "0.5"],
    "ee_three_spin.csv": ["ee-corr", "--model", "three-spin", "--H", "0",
                          "--J1", "1.2", "--J2", "0.8", "--J3-min", "0",
                          "--J3-max", "2.5", "--step", "0.05", "--cells", "51"],
    "ee_four_spin_h025.csv": ["ee-corr", "--model", "four-spin", "--h", "0.25",
                              "--J3-min", "0", "--J3-max", "1.5", "--step", "0.05",
                              "--cells", "51"],
    "ee_four_spin_h250.csv": ["ee-corr", "--model", "four-spin", "--h", "2.5",
                              "--J3-min", "0", "--J3-max", "1.5", "--step", "0.05",
                              "--cells", "51"],
}


def main():
    GOLDEN.mkdir(exist_ok=True)
    for name, args in RUNS.items():
        out = GOLDEN / name
        cmd = [sys.executable, "-m", "fourspin.cli", *args, "--out", str(out)]
        print("->", name)
        subprocess.run(cmd, check=True)


if __name__ == "__main__":
    main()
