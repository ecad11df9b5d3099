"""Acceptance criteria, one test each, with a PASS/FAIL line per criterion."""

import math
import time

import numpy as np
import pytest

from excitonsearch.config import load_preset
from excitonsearch.greens import (
    PhononModel,
    SearchProblem,
    closed_form_scaling,
    closed_form_times,
    f_average,
    golden_rule_convergence,
    green_function,
    lric_search_time,
    numeric_scaling,
)
from excitonsearch.lattice import (
    LricRing,
    PowerLawChain,
    bandwidth_scaling_fit,
    dispersion_closed,
    dispersion_curve,
    dispersion_direct,
    zone,
)
from excitonsearch.oracle import (
    build_hamiltonian,
    degrees,
    eigendecompose,
    half_life,
    level_spacing_scaling,
    multiset_deviation,
    uniform_state,
)
from excitonsearch.rates import feasibility_condition, scattering_time
from excitonsearch.report import naphthalene_report
from excitonsearch.units import Quantity

CM = lambda x: Quantity(x, "cm^-1")  # noqa: E731
PHONONS = PhononModel(CM(90), Quantity(1e4, "cm/s"), Quantity(0.004, "eV"))


def _problem(mu, N=100):
    return SearchProblem(PowerLawChain.from_band_edge(CM(90), mu, N), PHONONS, CM(50))


def test_1_dispersion_equivalence(record):
    start = time.perf_counter()
    worst = 0.0
    for mu in (1.1, 1.25, 1.5, 2.0, 3.0):
        for N in (16, 64, 256, 1024, 4096):
            spec = PowerLawChain(N, CM(1), mu)
            k = zone(spec)
            direct = dispersion_direct(spec, k).si
            closed = dispersion_closed(spec, k).si
            worst = max(worst, np.max(np.abs(closed - direct)) / np.max(np.abs(direct)))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 30
    record("1 dispersion equivalence", ok, f"max rel diff {worst:.2e} (tol 1e-9), {elapsed:.1f} s (< 30 s)")
    assert ok


def test_2_oracle_spectrum(record):
    start = time.perf_counter()
    worst = 0.0
    for N in (2, 3, 16, 64, 128, 256, 512):
        for mu in (1.1, 1.25, 1.5, 2.0, 3.0):
            for conv, method in (("paper", "direct"), ("minimal-image", "circulant")):
                spec = PowerLawChain(N, CM(1), mu, CM(5))
                ref = dispersion_curve(spec, method=method, convention=conv).energies
                ev = eigendecompose(build_hamiltonian(spec, convention=conv)).eigenvalues
                worst = max(worst, multiset_deviation(ev, ref, np.abs(ref).max()))
    for N in (8, 32, 64, 256, 512):
        for m in range(2, N // 2 + 1, max(1, N // 32)):
            spec = LricRing(N, CM(1), m, CM(5))
            ref = dispersion_curve(spec).energies
            ev = eigendecompose(build_hamiltonian(spec)).eigenvalues
            worst = max(worst, multiset_deviation(ev, ref, np.abs(ref).max()))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-8 and elapsed < 60
    record("2 oracle spectrum", ok, f"max rel deviation {worst:.2e} (tol 1e-8), {elapsed:.1f} s (< 60 s)")
    assert ok


def test_3_bandwidth_scaling(record):
    grid = [2**j for j in range(6, 15)]
    parts, ok = [], True
    for mu, target, tol in ((1.1, -0.1, 0.05), (1.25, -0.25, 0.05), (1.4, -0.4, 0.05), (3.0, -2.0, 0.1)):
        fit = bandwidth_scaling_fit(PowerLawChain(64, CM(1), mu), grid)
        ok &= abs(fit.fitted_exponent - target) <= tol and 0 < fit.A_prime < 1
        parts.append(f"mu={mu}: {fit.fitted_exponent:.4f} (A'={fit.A_prime:.3f})")
    record("3 bandwidth scaling", ok, "; ".join(parts))
    assert ok


def test_4_search_time_scaling(record):
    big = [2**j for j in range(20, 41, 4)]
    organic = [64, 256, 1024, 4096, 16384]
    parts, ok = [], True
    for mu in (1.1, 1.25, 1.4, 1.5, 3.0):
        grid = organic if mu >= 3 else big
        target = 2.0 if mu >= 3 else mu - 1
        num = numeric_scaling(_problem(mu), grid).slope
        closed = closed_form_scaling(_problem(mu), grid, A_prime=1.0).slope
        ok &= abs(num - target) <= 0.05 and abs(closed - target) <= 1e-9
        parts.append(f"mu={mu}: numeric {num:.4f}, closed {closed:.12f} (target {target:g})")
    record("4 search-time scaling", ok, "; ".join(parts))
    assert ok


def test_5_golden_rule_convergence(record):
    cfg = load_preset("naphthalene")
    problem = cfg.problem()
    conv = golden_rule_convergence(problem)
    closed = closed_form_times(problem, A_prime=cfg.A_prime)
    dev = abs(conv.rate.si * closed.Ts.si - 1.0)
    ok = conv.converged and dev <= 0.05
    record("5 golden-rule convergence", ok,
           f"1/Ts numeric vs closed form differ by {dev:.2%} (tol 5%), "
           f"last halving changed the rate by {conv.changes[-1]:.2%}")
    assert ok


def test_6_naphthalene_report(record):
    rows = {r.figure: r for r in naphthalene_report()}
    want = ("T0", "TN", "band shift", "T_f", "T_an")
    ok = all(rows[name].status == "pass" for name in want)
    ok &= rows["T_scat (warm)"].status == "flag"
    detail = ", ".join(f"{name}={rows[name].computed:.3g} (x{rows[name].ratio:.3g})" for name in want)
    detail += f", T_scat(warm)={rows['T_scat (warm)'].computed:.3g} s flagged x{rows['T_scat (warm)'].ratio:.3g}"
    record("6 naphthalene report", ok, detail)
    assert ok


def test_7_exact_properties(record):
    checks = {}
    worst = 0.0
    for mu, N in ((1.25, 100), (1.5, 1000), (3.0, 100), (1.1, 10**5)):
        t = closed_form_times(_problem(mu, N))
        worst = max(worst, abs(1 / t.Ts.si - (1 / t.T0.si + 1 / t.TN.si)) * t.Ts.si)
    checks["combination"] = worst <= 1e-15
    B, elr = CM(100), Quantity(0.004, "eV")
    ratio = scattering_time(B, elr, Quantity(5, "K")).si / scattering_time(B, elr, Quantity(30, "K")).si
    checks["T_scat ratio"] = abs(ratio - 6.0) <= 1e-12
    rhs = [feasibility_condition(10, CM(50), Quantity(T, "K"), CM(90)).rhs for T in np.linspace(0.5, 300, 200)]
    checks["rhs monotone"] = bool(np.all(np.diff(rhs) < 0))
    lric = {}
    for p in (4, 5, 8, 16, 10**6):
        ring = LricRing(4 * p, CM(1), 4) if p < 10**6 else LricRing(2 * p, CM(1), 2)
        lric[p] = lric_search_time(SearchProblem(ring, PHONONS, CM(50)))
    T0 = lric[8].T0.si
    checks["Tp formula"] = abs(lric[8].Tp.si / (T0 / math.cos(2 * math.pi / 8)) - 1) <= 1e-15
    checks["Tp -> T0"] = abs(lric[10**6].Tp.si / lric[10**6].T0.si - 1) <= 1e-10
    checks["p=4 divergent"] = lric[4].divergent and math.isinf(lric[4].Tp.si)
    ok = all(checks.values())
    record("7 exact formula properties", ok,
           f"1/Ts rule rel err {worst:.1e}, T_scat ratio {ratio:.15g}, "
           + ", ".join(f"{k}={'ok' if v else 'no'}" for k, v in checks.items()))
    assert ok


def test_8_green_function_initial_condition(record):
    worst_F, worst_G = 0.0, 0.0
    for mu, N in ((1.25, 64), (3.0, 100), (1.5, 33)):
        problem = _problem(mu, N)
        for k in zone(problem.lattice):
            worst_F = max(worst_F, abs(f_average(problem, int(k), 0.0)))
            worst_G = max(worst_G, abs(abs(green_function(problem, int(k), 0.0)) - 1.0))
    ok = worst_F <= 1e-12 and worst_G <= 1e-12
    record("8 Green's function at t=0", ok, f"max |<F>(0)| = {worst_F:.1e}, max ||G|-1| = {worst_G:.1e}")
    assert ok


def test_9_level_spacing(record):
    grid = [128, 256, 512, 1024, 2048]
    top = level_spacing_scaling(1.25, grid, "top").exponent
    bottom = level_spacing_scaling(1.25, grid, "bottom").exponent
    ok = abs(top + 0.25) <= 0.1
    record("9 level spacing", ok, f"top exponent {top:.4f} (target -0.25 +- 0.1), bottom exponent {bottom:.4f} recorded")
    assert ok


def test_10_lric_trend(record):
    N, J = 64, CM(1)
    lives = {}
    degree_ok = True
    for m in (2, 4, 8, 16):
        H = build_hamiltonian(LricRing(N, J, m))
        degree_ok &= bool(np.all(degrees(H) == 4))
        lives[m] = half_life(H, uniform_state(N), (J, 0))
    seq = [lives[m] for m in (2, 4, 8, 16)]
    monotone = all(b <= a for a, b in zip(seq, seq[1:]))
    ok = monotone and degree_ok
    shown = ", ".join(f"m={m}: {lives[m] / 1e-12:.4g} ps" for m in lives)
    record("10 LRIC trend", ok, f"half-lives {shown}; monotone={monotone}, degree 4 everywhere={degree_ok}")
    assert ok
