"""excitonsearch command line.

Exit codes: 0 success, 2 configuration error, 3 a property or acceptance
check failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from .config import ScenarioConfig, load_config, load_preset
from .errors import BranchUndefined, ConfigError, DegenerateP, InsufficientGrid
from .greens import (
    SearchProblem,
    closed_form_times,
    golden_rule_convergence,
    lric_search_time,
    loglog_slope,
    numeric_tn,
)
from .lattice import (
    LricRing,
    PowerLawChain,
    band_edge_energy,
    dispersion_closed,
    dispersion_direct,
    dispersion_curve,
    wavevector,
    zone,
)
from .oracle import build_hamiltonian, half_life, uniform_state
from .rates import annihilation_time, compete_report, formation_time, scattering_time
from .report import naphthalene_report, run_oracle_verify
from .units import Quantity

EXIT_OK, EXIT_CONFIG, EXIT_CHECK = 0, 2, 3

SWEEP_COLUMNS = ["value", "T0", "TN", "Ts", "T_scat", "T_f", "T_an", "TN_numeric",
                 "bandwidth", "E0", "A_prime", "flags"]


def fmt(x) -> str:
    if isinstance(x, str):
        return x
    if x is None:
        return "nan"
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.8e}"


def write_table(columns, rows, out, fmt_kind: str) -> None:
    """CSV with 9 significant digits, or JSON records."""
    if fmt_kind == "json":
        text = json.dumps([dict(zip(columns, r)) for r in rows], indent=2, default=_json_default) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([fmt(v) for v in r])
        text = buf.getvalue()
    _emit(text, out)


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    raise TypeError(type(o).__name__)


def _json_float(x):
    x = float(x)
    return x if math.isfinite(x) else str(x)


def _emit(text: str, out) -> None:
    if out is None or str(out) == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _config(args) -> ScenarioConfig:
    cfg = load_config(args.config) if args.config else load_preset("naphthalene")
    interp = cfg.interpretation
    if args.hbar_reading:
        interp = replace(interp, hbar_reading=args.hbar_reading)
    if args.broadening:
        from .units import parse_quantity

        try:
            interp = replace(interp, broadening=parse_quantity(args.broadening))
        except ValueError as exc:
            raise ConfigError(f"--broadening: {exc}") from None
    if args.convention:
        interp = replace(interp, convention=args.convention)
    return replace(cfg, interpretation=interp)


# dispersion -------------------------------------------------------------

def cmd_dispersion(args) -> int:
    cfg = _config(args)
    spec = cfg.lattice
    k = zone(spec)
    E_direct = np.atleast_1d(dispersion_direct(spec, k).si)
    if isinstance(spec, PowerLawChain):
        E_closed = np.atleast_1d(dispersion_closed(spec, k).si)
    else:
        E_closed = E_direct.copy()
    diff = np.abs(E_closed - E_direct)
    scale = np.abs(E_direct - spec.delta_E.si).max()
    rel = diff.max() / scale if scale > 0 else diff.max()
    rows = list(zip(k.tolist(), wavevector(spec, k), E_direct, E_closed, diff))
    write_table(["k", "K", "E_direct", "E_closed", "abs_diff"], rows, args.out, args.format)
    print(f"max relative difference {rel:.3e}", file=sys.stderr)
    return EXIT_OK if rel <= 1e-9 else EXIT_CHECK


# search / sweep ---------------------------------------------------------

def sweep_row(cfg: ScenarioConfig, value) -> list:
    """One SweepRow for the scenario as configured."""
    problem = cfg.problem()
    reading = cfg.interpretation.hbar_reading
    flags = []
    nan = math.nan
    T0 = TN = Ts = TN_num = A_prime = nan
    spec = cfg.lattice
    E0 = band_edge_energy(spec).si
    bandwidth = dispersion_curve(spec).bandwidth_B.si if spec.N <= 4096 else nan
    try:
        if isinstance(spec, LricRing):
            t = lric_search_time(problem, reading)
            T0, TN, Ts = t.T0.si, t.TN.si, t.Ts.si
            flags += t.flags
        else:
            t = closed_form_times(problem, A_prime=cfg.A_prime, hbar_reading=reading)
            T0, TN, Ts, A_prime, E0 = t.T0.si, t.TN.si, t.Ts.si, t.A_prime, t.E0.si
            flags.append(t.regime)
            TN_num = numeric_tn(problem, cfg.interpretation.broadening, hbar_reading=reading)
    except (BranchUndefined, DegenerateP) as exc:
        flags.append(type(exc).__name__)
    ph = problem.phonons
    B = cfg.scatter_B or Quantity(E0 / 2, "J")
    try:
        T_scat = scattering_time(B, ph.E_LR, cfg.temperature).si
    except (ValueError, ArithmeticError) as exc:
        T_scat = nan
        flags.append(type(exc).__name__)
    T_f = T_an = nan
    if cfg.carriers is not None:
        v = cfg.carrier_velocity or ph.v
        T_f = formation_time(cfg.carriers, problem.trap_depth, v).si
        T_an = annihilation_time(cfg.carriers).si
    return [value, T0, TN, Ts, T_scat, T_f, T_an, TN_num, bandwidth, E0, A_prime, ";".join(flags)]


def _apply(cfg: ScenarioConfig, var: str, value: float) -> ScenarioConfig:
    if var == "N":
        return cfg.with_lattice(N=int(value))
    if var == "mu":
        return cfg.with_lattice(mu=float(value))
    if var == "T":
        return replace(cfg, temperature=Quantity(float(value), "K"))
    if var == "m":
        return cfg.with_lattice(m=int(value))
    if var == "p":
        N = cfg.lattice.N
        if N % int(value):
            raise ConfigError(f"p = {int(value)} does not divide N = {N}")
        return cfg.with_lattice(m=N // int(value))
    raise ConfigError(f"unknown sweep variable {var!r}")


def _row_job(item):
    cfg, var, value = item
    return sweep_row(_apply(cfg, var, value), value)


def cmd_search(args) -> int:
    cfg = _config(args)
    row = sweep_row(cfg, cfg.lattice.N)
    write_table(SWEEP_COLUMNS, [row], args.out, args.format)
    if isinstance(cfg.lattice, PowerLawChain):
        try:
            conv = golden_rule_convergence(cfg.problem(), hbar_reading=cfg.interpretation.hbar_reading)
            print(f"golden-rule Ts {1 / conv.rate.si:.4e} s (converged={conv.converged})", file=sys.stderr)
        except ValueError as exc:
            print(f"golden rule: {exc}", file=sys.stderr)
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _config(args)
    if cfg.sweep is None:
        raise ConfigError(f"{cfg.source}: no [sweep] section")
    var, grid = cfg.sweep.variable, cfg.sweep.grid
    if var == "N" and len(grid) < 5:
        raise InsufficientGrid("an N sweep needs at least 5 grid points")
    for g in grid:
        _apply(cfg, var, g)  # surface bad grid values before any work starts
    items = [(cfg, var, g) for g in grid]
    if args.jobs and args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_row_job, items))
    else:
        rows = [_row_job(it) for it in items]
    write_table(SWEEP_COLUMNS, rows, args.out, args.format)
    summary = {"variable": var, "points": len(rows)}
    if var == "N":
        N = np.array([r[0] for r in rows], dtype=float)
        for key, col in (("closed_form", 2), ("numeric", 7)):
            TN = np.array([r[col] for r in rows], dtype=float)
            if np.all(np.isfinite(TN)) and np.all(TN > 0):
                slope, err = loglog_slope(N, TN)
                summary[f"slope_TN_{key}"] = slope
                summary[f"stderr_TN_{key}"] = _json_float(err)
    if args.out and str(args.out) != "-":
        Path(str(args.out) + ".summary.json").write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")
        if args.plot:
            Path(str(args.out) + ".gp").write_text(_gnuplot(str(args.out), var), encoding="utf-8")
    print(json.dumps(summary), file=sys.stderr)
    return EXIT_OK


def _gnuplot(csv_path: str, var: str) -> str:
    return (
        "set datafile separator ','\n"
        "set logscale xy\n"
        f"set xlabel '{var}'\nset ylabel 'time (s)'\n"
        f"plot '{csv_path}' using 1:2 skip 1 with linespoints title 'T0', \\\n"
        f"     '{csv_path}' using 1:3 skip 1 with linespoints title 'TN', \\\n"
        f"     '{csv_path}' using 1:4 skip 1 with linespoints title 'Ts'\n"
    )


# rates / report -----------------------------------------------------------

def cmd_rates(args) -> int:
    cfg = _config(args)
    r = compete_report(cfg.problem(), cfg.carriers, cfg.temperature, B=cfg.scatter_B,
                       shift_B=cfg.shift_B, shift_dp=cfg.shift_dp, v_carrier=cfg.carrier_velocity,
                       A_prime=cfg.A_prime, hbar_reading=cfg.interpretation.hbar_reading)
    rows = [
        ("T0", r.T0.si, "s"), ("TN", r.TN.si, "s"), ("T_scat", r.T_scat.si, "s"),
        ("T_f", r.T_f.si if r.T_f else math.nan, "s"), ("T_an", r.T_an.si if r.T_an else math.nan, "s"),
        ("condition_lhs", r.condition_lhs, "1"), ("condition_rhs", r.condition_rhs, "1"),
        ("band_shift", r.band_shift.value_in("cm^-1"), "cm^-1"), ("k_prime", r.k_prime.si, "1/m"),
        ("coherence_length", r.coherence_length.si, "m"),
    ]
    write_table(["quantity", "value", "unit"], rows, args.out, args.format)
    print(f"feasible={r.feasible} ranking={' < '.join(r.ranking)} "
          f"TN<T_scat={r.search_beats_scattering}", file=sys.stderr)
    for note in r.notes:
        print(f"note: {note}", file=sys.stderr)
    return EXIT_OK


def cmd_report(args) -> int:
    cfg = _config(args)
    rows = naphthalene_report(cfg)
    write_table(["figure", "computed", "reference", "ratio", "status", "unit", "note"],
                [(r.figure, r.computed, r.reference, r.ratio, r.status, r.unit, r.note) for r in rows],
                args.out, args.format)
    return EXIT_CHECK if any(r.status == "FAIL" for r in rows) else EXIT_OK


def cmd_verify(args) -> int:
    checks = run_oracle_verify()
    if args.format == "json":
        _emit(json.dumps([c.__dict__ for c in checks], indent=2, default=_json_default) + "\n", args.out)
    else:
        lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.value:.6g} {c.detail}" for c in checks]
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if all(c.passed for c in checks) else EXIT_CHECK


def cmd_lric(args) -> int:
    cfg = _config(args)
    spec = cfg.lattice
    if not isinstance(spec, LricRing):
        raise ConfigError(f"{cfg.source}: [lattice] family must be lric for this command")
    N = spec.N
    ms = [m for m in range(2, N // 2 + 1) if N % m == 0] if not args.m else args.m
    gamma = spec.J
    rows = []
    for m in ms:
        ring = LricRing(N, spec.J, m, spec.delta_E)
        flags = []
        T0 = Tp = TN = Ts = math.nan
        try:
            t = lric_search_time(SearchProblem(ring, cfg.phonons, cfg.trap_depth), cfg.interpretation.hbar_reading)
            T0, Tp, TN, Ts = t.T0.si, t.Tp.si, t.TN.si, t.Ts.si
            flags += t.flags
        except DegenerateP as exc:
            flags.append(f"DegenerateP({exc})")
        hl = half_life(build_hamiltonian(ring), uniform_state(N), (gamma, 0)) if N <= 512 else math.nan
        rows.append([m, N / m, T0, Tp, TN, Ts, hl, ";".join(flags)])
    write_table(["m", "p", "T0", "Tp", "TN", "Ts", "half_life", "flags"], rows, args.out, args.format)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="scenario INI file (default: bundled naphthalene preset)")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--hbar-reading", choices=("A", "B"), help="time constant in the T0 prefactor")
    common.add_argument("--broadening", help="Lorentzian width for the golden rule, e.g. '0.5 cm^-1'")
    common.add_argument("--convention", choices=("paper", "minimal-image"))
    common.add_argument("--seed", type=int, help="accepted for interface stability; all results are deterministic")

    p = argparse.ArgumentParser(prog="excitonsearch", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("dispersion", parents=[common], help="direct and closed-form E(K)").set_defaults(func=cmd_dispersion)
    sub.add_parser("search", parents=[common], help="search times for one scenario").set_defaults(func=cmd_search)
    sp = sub.add_parser("sweep", parents=[common], help="search times over the [sweep] grid")
    sp.add_argument("--jobs", type=int, default=1, help="worker processes")
    sp.add_argument("--plot", action="store_true", help="also write a gnuplot script next to --out")
    sp.set_defaults(func=cmd_sweep)
    sub.add_parser("rates", parents=[common], help="competing timescales").set_defaults(func=cmd_rates)
    sub.add_parser("report", parents=[common], help="reference-scenario report").set_defaults(func=cmd_report)
    sub.add_parser("verify", parents=[common], help="brute-force oracle checks").set_defaults(func=cmd_verify)
    lp = sub.add_parser("lric", parents=[common], help="LRIC search times and trap half-lives")
    lp.add_argument("--m", type=int, nargs="+", help="strides to evaluate (default: divisors of N)")
    lp.set_defaults(func=cmd_lric)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, InsufficientGrid) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
