#!/usr/bin/env python3
"""Run every figure-producing command into out/figures/<name>.

Each subdirectory gets the data files plus a manifest; pass --png to also
rasterize (needs matplotlib).
"""
import argparse
import sys
from pathlib import Path

from handshake.cli import main as cli_main

RUNS = {
    "eigenstate_profiles": ["states"],
    "two_atom_transfer": ["two-atom"],
    "competition_winner": ["compete", "--delta-omega", "0.3"],
    "competition_split": ["compete", "--delta-omega", "0.15",
                          "--seed1", "1e-4", "--seed2", "1e-4"],
    "cascade": ["cascade"],
    "handshake_field": ["fieldmap", "--times", "0,1.57,3.14,4.71",
                        "--contours"],
    "energy_flow": ["streamlines"],
    "phasor_arrows": ["paths"],
    "inverse_r_scan": ["paths", "--scan"],
    "enhancement": ["enhancement"],
    "hbt_fringe": ["hbt"],
    "splitter_histogram": ["split"],
    "polarization_curve": ["fc"],
}


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", type=Path, default=Path("out/figures"))
    ap.add_argument("--png", action="store_true",
                    help="also render raster images")
    args = ap.parse_args()
    formats = "csv,png" if args.png else "csv"
    failures = []
    for name, argv in RUNS.items():
        out_dir = args.out / name
        out_dir.mkdir(parents=True, exist_ok=True)
        print(f"== {name}: handshake {' '.join(argv)}")
        code = cli_main(["--output-dir", str(out_dir),
                         *argv, "--formats", formats])
        if code != 0:
            failures.append((name, code))
    if failures:
        for name, code in failures:
            print(f"FAILED {name} (exit {code})", file=sys.stderr)
        return 1
    print(f"all {len(RUNS)} runs written under {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
