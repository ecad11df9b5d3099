"""Reference-scenario report and the oracle property checks."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .config import ScenarioConfig, load_preset
from .greens import closed_form_times, golden_rule_convergence
from .lattice import LricRing, PowerLawChain, dispersion_curve
from .oracle import (
    build_hamiltonian,
    degrees,
    eigendecompose,
    energy_expectation,
    evolve,
    level_spacing_scaling,
    multiset_deviation,
    site_state,
    uniform_state,
)
from .rates import annihilation_time, band_shift, feasibility_condition, formation_time, scattering_time
from .units import HBAR, Quantity


def order_of(x: float) -> int:
    """Decimal exponent of x after rounding, e.g. 0.1018e-12 -> -13."""
    return round(math.log10(x))


def same_order(x: float, lo: float, hi: float | None = None) -> bool:
    """True when x is within one decade of ``lo`` (or of the range [lo, hi]).

    Decades are compared as rounded exponents, so 1.02e-13 and 1e-14 count
    as neighbouring orders.
    """
    if not (x > 0 and math.isfinite(x)):
        return False
    hi = lo if hi is None else hi
    if lo <= x <= hi:
        return True
    ref = lo if x < lo else hi
    return abs(order_of(x) - order_of(ref)) <= 1


@dataclass
class ReportRow:
    figure: str
    computed: float
    reference: str
    ratio: float
    status: str  # pass | FAIL | flag | info
    unit: str
    note: str = ""


def _ratio(x: float, lo: float, hi: float | None = None) -> float:
    hi = lo if hi is None else hi
    if lo <= x <= hi:
        return 1.0
    return x / (lo if x < lo else hi)


def naphthalene_report(cfg: ScenarioConfig | None = None) -> list[ReportRow]:
    """Computed versus quoted values for the reference naphthalene scenario."""
    cfg = cfg or load_preset("naphthalene")
    reading = cfg.interpretation.hbar_reading
    problem = cfg.problem()
    ph = problem.phonons
    rows: list[ReportRow] = []

    times = closed_form_times(problem, A_prime=cfg.A_prime if cfg.A_prime is not None else 1.0,
                              hbar_reading=reading)
    T0, TN = times.T0.si, times.TN.si
    rows.append(ReportRow("T0", T0, "0.01 ps", _ratio(T0, 1e-14),
                          "pass" if same_order(T0, 1e-14) else "FAIL", "s",
                          f"hbar reading {reading}"))
    rows.append(ReportRow("TN", TN, "10-100 ps", _ratio(TN, 1e-11, 1e-10),
                          "pass" if same_order(TN, 1e-11, 1e-10) else "FAIL", "s",
                          f"A' = {times.A_prime:.3g}"))
    other = "B" if reading == "A" else "A"
    T0_other = closed_form_times(problem, A_prime=times.A_prime, hbar_reading=other).T0.si
    rows.append(ReportRow(f"T0 (reading {other})", T0_other, "0.01 ps", _ratio(T0_other, 1e-14), "info", "s"))
    fitted = closed_form_times(problem, hbar_reading=reading)
    rows.append(ReportRow("TN (fitted A')", fitted.TN.si, "10-100 ps", _ratio(fitted.TN.si, 1e-11, 1e-10),
                          "info", "s", f"A' = {fitted.A_prime:.3g}"))

    conv = golden_rule_convergence(problem, hbar_reading=reading)
    Ts_num = 1.0 / conv.rate.si
    rows.append(ReportRow("Ts (golden rule)", Ts_num, f"{times.Ts.si:.4g} s closed form",
                          Ts_num / times.Ts.si,
                          "pass" if abs(Ts_num / times.Ts.si - 1) <= 0.05 else "FAIL", "s",
                          f"broadening {conv.broadenings[-1] / 1.986445857e-23:.3g} cm^-1, "
                          f"converged={conv.converged}"))

    B = cfg.scatter_B or Quantity(times.E0.si / 2, "J")
    if cfg.warm_temperature is not None:
        ts_warm = scattering_time(B, ph.E_LR, cfg.warm_temperature).si
        rows.append(ReportRow("T_scat (warm)", ts_warm, "50 ps", ts_warm / 50e-12, "flag", "s",
                              f"k_B T = {cfg.warm_temperature}"))
    ts_cold = scattering_time(B, ph.E_LR, cfg.temperature).si
    rows.append(ReportRow("T_scat (cold)", ts_cold, "500 ps", ts_cold / 500e-12, "flag", "s",
                          f"T = {cfg.temperature}"))

    shift_B = cfg.shift_B or B
    shift_dp = cfg.shift_dp or problem.trap_depth
    shift = band_shift(shift_B, shift_dp).value_in("cm^-1")
    rows.append(ReportRow("band shift", shift, "16 cm^-1", shift / 16.0,
                          "pass" if abs(shift - 16.2) <= 0.5 else "FAIL", "cm^-1"))

    feas = feasibility_condition(problem.N, problem.trap_depth, cfg.temperature, ph.hbar_omega_D)
    rows.append(ReportRow("max N (size limit)", feas.max_N, f"N = {problem.N} used", feas.max_N / problem.N,
                          "flag", "sites", f"rhs = {feas.rhs:.4g}"))

    if cfg.carriers is not None:
        v = cfg.carrier_velocity or ph.v
        if cfg.carriers.n_i.si > 0:
            tf = formation_time(cfg.carriers, problem.trap_depth, v).si
            rows.append(ReportRow("T_f", tf, "1e-9 s", tf / 1e-9, "pass" if same_order(tf, 1e-9) else "FAIL", "s"))
        if cfg.carriers.n_ex.si > 0:
            tan = annihilation_time(cfg.carriers).si
            rows.append(ReportRow("T_an", tan, "1e-11 s", tan / 1e-11,
                                  "pass" if same_order(tan, 1e-11) else "FAIL", "s"))
    return rows


@dataclass
class Check:
    name: str
    passed: bool
    value: float
    detail: str = ""


def run_oracle_verify(perturb=None, mu_values=(1.25, 3.0), sizes=(16, 64, 256, 512)) -> list[Check]:
    """Brute-force property suite behind the ``verify`` subcommand.

    ``perturb`` optionally maps a dense matrix to a modified one before it is
    diagonalized; it exists so tests can confirm a broken Hamiltonian is caught.
    """
    J = Quantity(1.0, "cm^-1")
    checks: list[Check] = []
    worst = 0.0
    for mu in mu_values:
        for N in sizes:
            for conv in ("paper", "minimal-image"):
                spec = PowerLawChain(N, J, mu)
                H = build_hamiltonian(spec, convention=conv)
                if perturb is not None:
                    H.entries = perturb(H.entries)
                method = "direct" if conv == "paper" else "circulant"
                ref = dispersion_curve(spec, method=method, convention=conv).energies
                worst = max(worst, multiset_deviation(eigendecompose(H).eigenvalues, ref, np.abs(ref).max()))
    for N in sizes:
        for m in sorted({2, 4, N // 4, N // 2 - 1}):
            if 2 <= m <= N // 2:
                spec = LricRing(N, J, m)
                H = build_hamiltonian(spec)
                if perturb is not None:
                    H.entries = perturb(H.entries)
                ref = dispersion_curve(spec).energies
                worst = max(worst, multiset_deviation(eigendecompose(H).eigenvalues, ref, 4 * J.si))
    checks.append(Check("spectrum matches dispersion", worst <= 1e-8, worst, "max relative deviation"))

    H = build_hamiltonian(PowerLawChain(64, J, 1.25))
    t = 1e3 * HBAR / J.si
    psi = evolve(H, site_state(64, 0), t)
    drift = abs(psi.norm - 1.0)
    checks.append(Check("unitarity", drift <= 1e-10, drift, "norm drift over 1e3 hbar/J"))
    e0 = energy_expectation(H, site_state(64, 0))
    e1 = energy_expectation(H, psi)
    rel = abs(e1 - e0) / H.scale
    checks.append(Check("energy conservation", rel <= 1e-9, rel, "relative to the band scale"))

    ring = build_hamiltonian(LricRing(64, J, 4))
    out = evolve(ring, uniform_state(64), t)
    overlap = abs(np.vdot(uniform_state(64).amplitudes, out.amplitudes))
    checks.append(Check("uniform state is stationary on LRIC", abs(overlap - 1) <= 1e-10, overlap))

    fit = level_spacing_scaling(1.25, [128, 256, 512, 1024, 2048], "top")
    checks.append(Check("top spacing exponent", abs(fit.exponent + 0.25) <= 0.1, fit.exponent, "expected -0.25"))
    bottom = level_spacing_scaling(1.25, [128, 256, 512, 1024, 2048], "bottom")
    checks.append(Check("bottom spacing exponent (recorded)", True, bottom.exponent, "measured"))

    bad = [(N, m) for N in (16, 64, 256) for m in range(2, N // 2)
           if not np.all(degrees(build_hamiltonian(LricRing(N, J, m))) == 4)]
    checks.append(Check("LRIC degree 4", not bad, float(len(bad)), "rings with m < N/2"))
    return checks


def timed(fn, *args, **kwargs):
    start = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - start
