"""Radial-contour resonance frequency against disk radius, for several materials and modes.

Writes one CSV row per (material, mode, radius).
"""
import argparse
import csv
import sys

import numpy as np

from memsres.materials import builtin
from memsres.modal import DiskGeometry, disk_radial_f0


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--materials", nargs="+", default=["polysilicon", "polydiamond", "silicon_carbide"])
    ap.add_argument("--modes", type=int, default=3)
    ap.add_argument("--r-min-um", type=float, default=2.0)
    ap.add_argument("--r-max-um", type=float, default=20.0)
    ap.add_argument("--points", type=int, default=37)
    ap.add_argument("--out", default=None)
    args = ap.parse_args(argv)

    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["material", "mode", "radius_um", "f0_MHz"])
    for name in args.materials:
        mat = builtin(name)
        for r_um in np.linspace(args.r_min_um, args.r_max_um, args.points):
            g = DiskGeometry(r_um * 1e-6, 2e-6, 50e-9)
            for i in range(1, args.modes + 1):
                w.writerow([mat.name, i, f"{r_um:.10g}", f"{disk_radial_f0(mat, g, i).f0 / 1e6:.10g}"])
    if args.out:
        fh.close()


if __name__ == "__main__":
    main()
