"""Command-line front end: mode tables, lumped models, sweeps, filters and the fixture report.

Lateral dimensions are given in micrometers, gaps in nanometers, frequencies
in MHz; everything is converted to SI before it reaches the library.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .filters import (
    FilterSpec,
    NoPassbandError,
    SingularNetworkError,
    TargetUnreachableError,
    default_band,
    electrical_mode_split,
    filter_metrics,
    filter_network_response,
    matched_reference_db,
    terminate_for_flat_passband,
)
from .lumped import (
    DeviceOffError,
    DriveCondition,
    LumpedMechanical,
    effective_mass,
    extract_rlc,
    motional_resistance_formula,
    static_capacitance,
    transduction_factor,
)
from .materials import MaterialError, MaterialRegistry
from .modal import (
    BeamGeometry,
    DiskGeometry,
    PlateGeometry,
    PullInError,
    RingGeometry,
    ccbeam_f0,
    disk_radial_f0,
    ring_modes,
    square_extensional_f0,
    square_flexural_f0,
    wineglass_f0,
)
from .numerics import DomainError, IntegrationError, RootFindingError
from .response import q_from_sweep, two_port_response
from .validation import run_validate

UM = 1e-6
NM = 1e-9
MHZ = 1e6
SIG_DIGITS = 10

GEOMETRIES = ("disk", "wineglass", "ccbeam", "square-extensional", "square-flexural", "ring")

COMPUTATION_ERRORS = (DeviceOffError, PullInError, RootFindingError, DomainError, IntegrationError,
                      SingularNetworkError, NoPassbandError, TargetUnreachableError)


class UsageError(Exception):
    pass


@dataclass
class RunResult:
    inputs: dict
    rows: list
    ok: bool = True
    messages: list = field(default_factory=list)


# ---------------------------------------------------------------------------
# Formatting

def fmt(v):
    if isinstance(v, bool) or v is None or isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        return int(v)
    v = float(v)
    if not math.isfinite(v):
        return None
    return float(format(v, f".{SIG_DIGITS}g"))


def _csv_cell(v) -> str:
    v = fmt(v)
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, f".{SIG_DIGITS}g")
    return str(v)


def render(result: RunResult, kind: str) -> str:
    if kind == "json":
        doc = {
            "inputs": {k: fmt(v) for k, v in result.inputs.items()},
            "outputs": [{k: fmt(v) for k, v in row.items()} for row in result.rows],
            "version": __version__,
        }
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    if result.rows:
        header = list(result.rows[0])
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for row in result.rows:
            w.writerow([_csv_cell(row.get(k)) for k in header])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Config assembly

def _material(args):
    reg = MaterialRegistry()
    if args.materials_file:
        loaded = reg.load(args.materials_file)
        if args.material is None:
            if len(loaded) != 1:
                raise UsageError("materials file holds several entries; pick one with --material")
            return loaded[0]
    return reg.get(args.material or "polysilicon")


def _disk(args, radius_um=None, thickness_um=None, gap_nm=None) -> DiskGeometry:
    return DiskGeometry(
        radius=(radius_um or args.radius_um) * UM,
        thickness=(thickness_um or args.thickness_um) * UM,
        gap=(gap_nm or args.gap_nm) * NM,
        electrode_angle=math.radians(args.electrode_angle_deg),
    )


def _inputs(args) -> dict:
    out = {}
    for k, v in sorted(vars(args).items()):
        # the output location is not part of the computation
        if k in ("func", "out") or v is None:
            continue
        if isinstance(v, (list, tuple)):
            for i, item in enumerate(v):
                out[f"{k}_{i}"] = item
        else:
            out[k] = v
    return out


def _span(triple, name):
    start, stop, count = triple
    if count != int(count) or int(count) < 2:
        raise UsageError(f"{name} needs an integer COUNT >= 2")
    if not (start > 0 and stop > 0):
        raise UsageError(f"{name} bounds must be positive")
    return np.linspace(start, stop, int(count))


# ---------------------------------------------------------------------------
# Subcommands

def _mode_rows(args, m, radius_um=None):
    geo = args.geometry
    rows = []
    if geo in ("disk", "wineglass"):
        g = _disk(args, radius_um=radius_um)
        solve = disk_radial_f0 if geo == "disk" else wineglass_f0
        modes = [solve(m, g, i) for i in range(1, args.modes + 1)]
    elif geo == "ring":
        g = RingGeometry(args.inner_radius_um * UM, args.outer_radius_um * UM, args.thickness_um * UM,
                         None if args.support_length_um is None else args.support_length_um * UM)
        modes = ring_modes(m, g, args.modes)
    else:
        if args.modes != 1:
            raise UsageError(f"{geo} has a single closed-form mode; use --modes 1")
        if geo == "ccbeam":
            g = BeamGeometry(args.beam_length_um * UM, args.beam_width_um * UM, args.thickness_um * UM,
                             args.gap_nm * NM, args.electrode_width_um * UM, args.kappa)
            modes = [ccbeam_f0(m, g, args.bias_v, args.km)]
        else:
            g = PlateGeometry(args.side_um * UM, args.thickness_um * UM)
            solve = square_extensional_f0 if geo == "square-extensional" else square_flexural_f0
            modes = [solve(m, g)]
    for mode in modes:
        row = {}
        if radius_um is not None:
            row["radius_um"] = radius_um
        row.update({"geometry": geo, "mode_index": mode.mode_index,
                    "frequency_parameter": mode.frequency_parameter, "f0_MHz": mode.f0 / MHZ})
        if "support_quarter_wave_f0" in mode.diagnostics:
            row["support_quarter_wave_f0_MHz"] = mode.diagnostics["support_quarter_wave_f0"] / MHZ
        rows.append(row)
    return rows


def run_mode_freq(args) -> RunResult:
    if not 1 <= args.modes <= 8:
        raise UsageError("--modes must lie in 1..8")
    m = _material(args)
    if args.sweep_radius_um is not None:
        if args.geometry not in ("disk", "wineglass"):
            raise UsageError("--sweep-radius-um applies to disk and wineglass geometries")
        radii = _span(args.sweep_radius_um, "--sweep-radius-um")
        # validate every geometry before solving anything
        for r in radii:
            _disk(args, radius_um=float(r))
        rows = [row for r in radii for row in _mode_rows(args, m, float(r))]
    else:
        rows = _mode_rows(args, m)
    return RunResult(_inputs(args), rows)


def _drive(args) -> DriveCondition:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return DriveCondition(args.vdc, args.vi_mv * 1e-3)


def _resonator(args, m, g, d):
    """Mode, mechanical and electrical models of one disk, honouring --f0-mhz / --meff-kg."""
    mode = disk_radial_f0(m, g, args.mode_index)
    omega = 2 * math.pi * (args.f0_mhz * MHZ if args.f0_mhz else mode.f0)
    m_eff = args.meff_kg if args.meff_kg else effective_mass(m, g, mode)
    mech = LumpedMechanical.from_mode(omega, m_eff, args.q)
    n = transduction_factor(g, d)
    elec = extract_rlc(mech, n, static_capacitance(g))
    return mode, mech, elec


def _lumped_row(args, m, g, d):
    mode, mech, elec = _resonator(args, m, g, d)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        re_closed = motional_resistance_formula(g, args.q, args.vdc, m)
    w = mech.omega0
    return {
        "radius_um": g.radius / UM, "thickness_um": g.thickness / UM, "gap_nm": g.gap / NM,
        "lambda": mode.frequency_parameter, "f0_MHz": mech.f0 / MHZ,
        "m_eff_kg": mech.m_eff, "k_eff_N_per_m": mech.k_eff, "b_eff_kg_per_s": mech.b_eff,
        "n_C_per_m": elec.n, "c0_F": elec.c0, "re_ohm": elec.re, "le_H": elec.le, "ce_F": elec.ce,
        "le_ce_w0_squared": elec.le * elec.ce * w * w, "re_closed_form_ohm": re_closed,
    }


def run_lumped(args) -> RunResult:
    m = _material(args)
    d = _drive(args)
    gaps = _span(args.sweep_gap_nm, "--sweep-gap-nm") if args.sweep_gap_nm else [args.gap_nm]
    thick = _span(args.sweep_thickness_um, "--sweep-thickness-um") if args.sweep_thickness_um else [args.thickness_um]
    geoms = [_disk(args, thickness_um=float(t), gap_nm=float(d0)) for t in thick for d0 in gaps]
    if d.vdc == 0:
        raise DeviceOffError("Vdc = 0: no transduction, the resonator is switched off")
    return RunResult(_inputs(args), [_lumped_row(args, m, g, d) for g in geoms])


def run_sweep(args) -> RunResult:
    m = _material(args)
    g = _disk(args)
    d = _drive(args)
    if d.vdc == 0:
        raise DeviceOffError("Vdc = 0: no transduction, the resonator is switched off")
    _, _, elec = _resonator(args, m, g, d)
    f_start = args.f_start_mhz * MHZ if args.f_start_mhz else None
    f_stop = args.f_stop_mhz * MHZ if args.f_stop_mhz else None
    sweep = two_port_response(elec, args.feedthrough, f_start, f_stop, args.points, args.grid)
    rows = [{"f_MHz": f / MHZ, "magnitude_S": a, "magnitude_db": db, "phase_deg": p}
            for f, a, db, p in zip(sweep.frequencies, sweep.magnitude, sweep.magnitude_db, sweep.phase_deg)]
    if args.feedthrough == "off":
        try:
            q = q_from_sweep(sweep)
        except ValueError:
            q = math.nan
        rows[0]["q_from_sweep"] = q
        for row in rows[1:]:
            row["q_from_sweep"] = None
    return RunResult(_inputs(args), rows)


def run_filter(args) -> RunResult:
    if args.order < 2:
        raise UsageError("--order must be at least 2")
    if not args.coupling_cap_f > 0:
        raise UsageError("--coupling-cap-f must be positive")
    m = _material(args)
    g = _disk(args)
    d = _drive(args)
    if d.vdc == 0:
        raise DeviceOffError("Vdc = 0: no transduction, the resonator is switched off")
    _, _, elec = _resonator(args, m, g, d)
    res = [elec] * args.order
    cc = [args.coupling_cap_f] * (args.order - 1)
    spec = FilterSpec(tuple(res), tuple(cc), elec.re)
    if args.flatten:
        if args.order != 2:
            raise UsageError("--flatten is defined for --order 2")
        term = terminate_for_flat_passband(spec, args.ripple_db)
        r_q = term.r_q
    else:
        r_q = args.termination_ohm
    spec = spec.with_termination(r_q)
    # wide enough that the stopband lies inside the sweep
    lo, hi = default_band(spec, span=8.0)
    sweep = filter_network_response(spec, lo, hi, points=args.points)
    if args.response:
        rows = [{"f_MHz": f / MHZ, "magnitude_db": db, "phase_deg": p}
                for f, db, p in zip(sweep.frequencies, sweep.magnitude_db, sweep.phase_deg)]
        return RunResult(_inputs(args), rows)
    mt = filter_metrics(sweep, matched_reference_db(spec))
    row = {
        "order": args.order, "resonator_f0_MHz": elec.f0 / MHZ, "resonator_re_ohm": elec.re,
        "coupling_cap_F": args.coupling_cap_f, "termination_ohm": r_q,
        "closed_form_split_MHz": electrical_mode_split(elec.f0, elec.re, elec.q, args.coupling_cap_f) / MHZ,
        "center_MHz": mt.center_frequency / MHZ, "bandwidth_3db_kHz": mt.bandwidth_3db / 1e3,
        "percent_bandwidth": mt.percent_bandwidth, "insertion_loss_db": mt.insertion_loss,
        "stopband_rejection_db": mt.stopband_rejection, "shape_factor_20db": mt.shape_factor_20db,
        "ripple_db": mt.ripple,
    }
    return RunResult(_inputs(args), [row])


def run_validate_cmd(args) -> RunResult:
    report = run_validate()
    rows = [{"name": c.name, "expected": c.expected, "computed": c.computed, "error": c.error,
             "mode": c.mode, "tolerance": c.tolerance, "passed": c.passed, "provenance": c.provenance}
            for c in report.checks]
    msgs = [f"FAIL {c.name}: computed {c.computed:.6g}, expected {c.expected:.6g}" for c in report.failures()]
    return RunResult({}, rows, report.passed, msgs)


# ---------------------------------------------------------------------------
# Parser

def _add_common(p):
    p.add_argument("--material", default=None, help="material name (default polysilicon)")
    p.add_argument("--materials-file", default=None, metavar="PATH", help="JSON materials file")
    p.add_argument("--out", default=None, metavar="PATH", help="write here instead of stdout")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def _add_disk(p):
    p.add_argument("--radius-um", type=float, default=18.0)
    p.add_argument("--thickness-um", type=float, default=2.1)
    p.add_argument("--gap-nm", type=float, default=87.0)
    p.add_argument("--electrode-angle-deg", type=float, default=180.0)


def _add_drive(p):
    p.add_argument("--vdc", type=float, default=6.0)
    p.add_argument("--vi-mv", type=float, default=0.0)
    p.add_argument("--q", type=float, default=12289.0)
    p.add_argument("--mode-index", type=int, default=1)
    p.add_argument("--f0-mhz", type=float, default=None, help="override the solved resonance")
    p.add_argument("--meff-kg", type=float, default=None, help="override the effective mass")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="memsres", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mode-freq", help="resonance frequencies of one geometry")
    _add_common(p)
    _add_disk(p)
    p.add_argument("--geometry", choices=GEOMETRIES, default="disk")
    p.add_argument("--modes", type=int, default=1)
    p.add_argument("--sweep-radius-um", type=float, nargs=3, metavar=("START", "STOP", "COUNT"))
    p.add_argument("--side-um", type=float, default=16.0)
    p.add_argument("--beam-length-um", type=float, default=40.0)
    p.add_argument("--beam-width-um", type=float, default=8.0)
    p.add_argument("--electrode-width-um", type=float, default=20.0)
    p.add_argument("--kappa", type=float, default=1.0)
    p.add_argument("--bias-v", type=float, default=0.0)
    p.add_argument("--km", type=float, default=None)
    p.add_argument("--inner-radius-um", type=float, default=11.8)
    p.add_argument("--outer-radius-um", type=float, default=18.7)
    p.add_argument("--support-length-um", type=float, default=None)
    p.set_defaults(func=run_mode_freq)

    p = sub.add_parser("lumped", help="lumped mechanical and electrical model of a disk")
    _add_common(p)
    _add_disk(p)
    _add_drive(p)
    p.add_argument("--sweep-gap-nm", type=float, nargs=3, metavar=("START", "STOP", "COUNT"))
    p.add_argument("--sweep-thickness-um", type=float, nargs=3, metavar=("START", "STOP", "COUNT"))
    p.set_defaults(func=run_lumped)

    p = sub.add_parser("sweep", help="two-port transadmittance of a disk")
    _add_common(p)
    _add_disk(p)
    _add_drive(p)
    p.add_argument("--f-start-mhz", type=float, default=None)
    p.add_argument("--f-stop-mhz", type=float, default=None)
    p.add_argument("--points", type=int, default=801)
    p.add_argument("--grid", choices=("log", "linear"), default="log")
    p.add_argument("--feedthrough", choices=("off", "parallel"), default="off")
    p.set_defaults(func=run_sweep)

    p = sub.add_parser("filter", help="capacitively coupled disk filter")
    _add_common(p)
    _add_disk(p)
    _add_drive(p)
    p.add_argument("--order", type=int, default=2)
    p.add_argument("--coupling-cap-f", type=float, required=True)
    term = p.add_mutually_exclusive_group(required=True)
    term.add_argument("--termination-ohm", type=float)
    term.add_argument("--flatten", action="store_true", help="search the termination for a flat passband")
    p.add_argument("--ripple-db", type=float, default=0.5)
    p.add_argument("--points", type=int, default=4001)
    p.add_argument("--response", action="store_true", help="emit the sweep instead of metrics")
    p.set_defaults(func=run_filter)

    p = sub.add_parser("validate", help="run the embedded reference fixtures")
    p.add_argument("--out", default=None, metavar="PATH")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=run_validate_cmd)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except COMPUTATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (MaterialError, ValueError, OSError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    text = render(result, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for msg in result.messages:
        print(msg, file=sys.stderr)
    return 0 if result.ok else 1


if __name__ == "__main__":
    sys.exit(main())
