"""Motional resistance against electrode gap and disk thickness.

Compares the full extraction chain with the lumped closed form at each point.
"""
import argparse
import csv
import sys

import numpy as np

from memsres.lumped import DriveCondition, electrical_model, motional_resistance_formula
from memsres.materials import builtin
from memsres.modal import DiskGeometry, disk_radial_f0


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--radius-um", type=float, default=18.0)
    ap.add_argument("--q", type=float, default=10000.0)
    ap.add_argument("--vdc", type=float, default=30.0)
    ap.add_argument("--thickness-um", type=float, nargs="+", default=[1.0, 2.0, 3.0, 4.0])
    ap.add_argument("--gap-nm", type=float, nargs=3, default=[50.0, 200.0, 16], metavar=("START", "STOP", "COUNT"))
    ap.add_argument("--out", default=None)
    args = ap.parse_args(argv)

    poly = builtin("polysilicon")
    drive = DriveCondition(args.vdc)
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["thickness_um", "gap_nm", "re_chain_ohm", "re_closed_form_ohm", "ratio"])
    for t in args.thickness_um:
        for d0 in np.linspace(args.gap_nm[0], args.gap_nm[1], int(args.gap_nm[2])):
            g = DiskGeometry(args.radius_um * 1e-6, t * 1e-6, d0 * 1e-9)
            _, elec = electrical_model(poly, g, disk_radial_f0(poly, g), args.q, drive)
            closed = motional_resistance_formula(g, args.q, args.vdc)
            w.writerow([f"{t:.10g}", f"{d0:.10g}", f"{elec.re:.10g}", f"{closed:.10g}", f"{elec.re / closed:.10g}"])
    if args.out:
        fh.close()


if __name__ == "__main__":
    main()
