"""Two-resonator capacitively coupled filter: pick Cc for a target bandwidth, then flatten.

Prints the closed-form split, the ladder-extracted peaks before termination,
the termination that meets the ripple target, and the resulting metrics.
"""
import argparse
import math

from memsres.filters import (
    FilterSpec,
    electrical_mode_split,
    filter_metrics,
    filter_network_response,
    matched_reference_db,
    terminate_for_flat_passband,
)
from memsres.lumped import DriveCondition, electrical_model
from memsres.materials import builtin
from memsres.modal import DiskGeometry, disk_radial_f0
from memsres.response import peak_frequencies


def coupling_for_split(f0, re, q, target_split):
    # invert f1 = f0 sqrt((1 + a) / a), a = pi f0 Cc Re Q
    ratio = (1.0 + target_split / f0) ** 2
    a = 1.0 / (ratio - 1.0)
    return a / (math.pi * f0 * re * q)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--radius-um", type=float, default=18.0)
    ap.add_argument("--thickness-um", type=float, default=2.1)
    ap.add_argument("--gap-nm", type=float, default=87.0)
    ap.add_argument("--vdc", type=float, default=6.0)
    ap.add_argument("--q", type=float, default=12289.0)
    ap.add_argument("--split-khz", type=float, default=200.0)
    ap.add_argument("--ripple-db", type=float, default=0.5)
    args = ap.parse_args(argv)

    poly = builtin("polysilicon")
    g = DiskGeometry(args.radius_um * 1e-6, args.thickness_um * 1e-6, args.gap_nm * 1e-9)
    _, elec = electrical_model(poly, g, disk_radial_f0(poly, g), args.q, DriveCondition(args.vdc))
    cc = coupling_for_split(elec.f0, elec.re, elec.q, args.split_khz * 1e3)
    f1 = electrical_mode_split(elec.f0, elec.re, elec.q, cc)
    print(f"resonator f0 = {elec.f0 / 1e6:.6f} MHz, Re = {elec.re / 1e3:.1f} kohm, Q = {elec.q:.0f}")
    print(f"Cc = {cc:.4g} F, closed-form upper mode = {f1 / 1e6:.6f} MHz")

    spec = FilterSpec((elec, elec), (cc,), elec.re / 100)
    peaks = peak_frequencies(filter_network_response(spec))
    print("unterminated peaks (MHz): " + ", ".join(f"{p / 1e6:.6f}" for p in peaks))

    term = terminate_for_flat_passband(spec, args.ripple_db)
    spec = spec.with_termination(term.r_q)
    m = filter_metrics(filter_network_response(spec), matched_reference_db(spec))
    print(f"R_Q = {term.r_q / 1e6:.4g} Mohm ({term.r_q / elec.re:.2f} Re), ripple {term.ripple_db:.3f} dB, "
          f"unimodal scan: {term.unimodal}")
    print(f"center {m.center_frequency / 1e6:.6f} MHz, BW {m.bandwidth_3db / 1e3:.2f} kHz "
          f"({m.percent_bandwidth:.3f}%), IL {m.insertion_loss:.2f} dB, SF20 {m.shape_factor_20db:.2f}")


if __name__ == "__main__":
    main()
