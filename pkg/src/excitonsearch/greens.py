"""Exciton-phonon damping and the search-time decomposition.

The trap is found at the damping rate of the exciton Green's function. The
phonon bath is acoustic (omega = v|q|) with a Debye density of states, and
the coupling is chi(q)^2 = hbar omega(q) E_LR / N.

Two routes are provided: a numeric golden-rule integral with a Lorentzian
in place of the delta function, and the closed-form times T0, TN, Ts.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import BranchUndefined, DegenerateP, NoResonance, ResonantMode
from .lattice import (
    DEFAULT_FIT_GRID,
    LatticeSpec,
    LricRing,
    PowerLawChain,
    band_edge_deficit,
    band_edge_energy,
    band_edge_limit,
    bandwidth_scaling_fit,
    dispersion_direct,
    mean_band_energy,
)
from .units import ENERGY, ENERGY_SQUARED, HBAR, INVERSE_LENGTH, MASS, VELOCITY, Quantity, require

DEFAULT_MODES = 10_000
# ratio TN / T0 beyond which one channel is said to dominate
REGIME_RATIO = 10.0


def hbar_for(reading: str) -> float:
    """Time-setting constant for the T0 prefactor.

    Reading "A" uses hbar; reading "B" uses h = 2 pi hbar, i.e. treats the
    printed hbar omega_D as h nu_D.
    """
    if reading == "A":
        return HBAR
    if reading == "B":
        return 2.0 * math.pi * HBAR
    raise ValueError(f"unknown hbar reading {reading!r}")


@dataclass(frozen=True)
class PhononModel:
    hbar_omega_D: Quantity
    v: Quantity
    E_LR: Quantity
    E_D: Quantity | None = None
    I: Quantity | None = None

    def __post_init__(self):
        if require(self.hbar_omega_D, ENERGY) <= 0:
            raise ValueError("Debye energy must be positive")
        if require(self.v, VELOCITY) <= 0:
            raise ValueError("sound velocity must be positive")
        if require(self.E_LR, ENERGY) < 0:
            raise ValueError("E_LR must be non-negative")

    @classmethod
    def from_deformation(cls, hbar_omega_D: Quantity, v: Quantity, E_D: Quantity, I: Quantity) -> PhononModel:
        """E_LR = E_D^2 / (2 I v^2) with E_D an energy and I a mass."""
        e_lr = require(E_D, ENERGY) ** 2 / (2.0 * require(I, MASS) * require(v, VELOCITY) ** 2)
        return cls(hbar_omega_D, v, Quantity(e_lr, "J"), E_D, I)


@dataclass
class SearchProblem:
    lattice: LatticeSpec
    phonons: PhononModel
    trap_depth: Quantity
    Em: Quantity | None = None

    def __post_init__(self):
        dp = require(self.trap_depth, ENERGY)
        if dp <= 0:
            raise ValueError("trap depth must be positive")
        if dp > self.phonons.hbar_omega_D.si:
            warnings.warn("trap depth exceeds the Debye energy; no single phonon bridges the gap",
                          RuntimeWarning, stacklevel=2)
        if self.Em is None:
            self.Em = mean_band_energy(self.lattice)

    @property
    def N(self) -> int:
        return self.lattice.N

    def with_size(self, N: int) -> SearchProblem:
        return SearchProblem(self.lattice.with_size(N), self.phonons, self.trap_depth)


def coupling_squared(phonons: PhononModel, q: Quantity, N: int) -> Quantity:
    """chi(q)^2 = hbar v |q| E_LR / N."""
    qv = abs(require(q, INVERSE_LENGTH))
    return Quantity(HBAR * phonons.v.si * qv * phonons.E_LR.si / N, "SI", ENERGY_SQUARED)


def coupling_at_energy(phonons: PhononModel, phonon_energy: Quantity, N: int) -> Quantity:
    """Same coupling written in terms of the phonon energy hbar omega."""
    return Quantity(require(phonon_energy, ENERGY) * phonons.E_LR.si / N, "SI", ENERGY_SQUARED)


def debye_modes(phonons: PhononModel, N: int, n_modes: int = DEFAULT_MODES) -> tuple[np.ndarray, np.ndarray]:
    """Midpoint grid over (0, hbar omega_D] and the Debye mode count in each cell.

    The weights integrate rho(e) = 3 N e^2 / (hbar omega_D)^3; they sum to
    N (1 - 1 / (4 n_modes^2)).
    """
    wD = phonons.hbar_omega_D.si
    de = wD / n_modes
    eps = (np.arange(n_modes) + 0.5) * de
    weight = 3.0 * N * eps**2 / wD**3 * de
    return eps, weight


def _eta(problem: SearchProblem, k: int, eps: np.ndarray) -> np.ndarray:
    Ek = dispersion_direct(problem.lattice, k).si
    return eps + problem.Em.si - Ek - problem.trap_depth.si


def f_average(problem: SearchProblem, k: int, t: float, n_modes: int = DEFAULT_MODES,
              eta_floor: float = 1e-12) -> complex:
    """Phonon-averaged exponent <F>(k, t) at T = 0; t in seconds.

    Uses (1/N) sum_q chi^2 [-i tau/eta + (1 - exp(-i eta tau))/eta^2] with
    tau = t/hbar, the sign pairing for which the bracket starts at order
    tau^2. ``eta_floor`` is relative to the Debye energy.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    N = problem.N
    eps, weight = debye_modes(problem.phonons, N, n_modes)
    eta = _eta(problem, k, eps)
    if np.any(np.abs(eta) < eta_floor * problem.phonons.hbar_omega_D.si):
        raise ResonantMode("a phonon mode sits on resonance; use golden_rule_rate instead")
    chi2 = eps * problem.phonons.E_LR.si / N
    tau = t / HBAR
    # -i tau/eta + (1 - e^{-i eta tau})/eta^2 = -(expm1(-i eta tau) + i eta tau)/eta^2
    x = eta * tau
    bracket = -(np.expm1(-1j * x) + 1j * x) / eta**2
    return complex(np.sum(weight * chi2 * bracket) / N)


def green_function(problem: SearchProblem, k: int, t: float, n_modes: int = DEFAULT_MODES) -> complex:
    """G(k, t) = -i exp(-i E(k) t/hbar - <F>)."""
    Ek = dispersion_direct(problem.lattice, k).si
    F = f_average(problem, k, t, n_modes)
    return -1j * np.exp(-1j * Ek * t / HBAR - F)


def lorentzian(x: np.ndarray, width: float) -> np.ndarray:
    return (width / math.pi) / (x * x + width * width)


def golden_rule_rate(problem: SearchProblem, broadening: Quantity, k: int = 0, *,
                     n_modes: int = DEFAULT_MODES, resonance: str = "shortcut",
                     hbar_reading: str = "A") -> Quantity:
    """Damping rate 1/Ts from a Lorentzian-broadened Debye sum.

    ``resonance="shortcut"`` matches a single phonon to the trap depth
    (eta = hbar omega - dp). ``"full"`` uses eta = hbar omega + Em - E(k) - dp.
    The sum is normalised by N hbar omega_D / B_N with B_N the finite-size
    band-edge energy, which is where the lattice size enters.
    """
    gamma = require(broadening, ENERGY)
    if gamma <= 0:
        raise ValueError("broadening must be positive")
    ph = problem.phonons
    N = problem.N
    wD = ph.hbar_omega_D.si
    dp = problem.trap_depth.si
    eps, weight = debye_modes(ph, N, n_modes)
    if resonance == "shortcut":
        eta = eps - dp
        e_res = dp
    elif resonance == "full":
        eta = _eta(problem, k, eps)
        e_res = dp + dispersion_direct(problem.lattice, k).si - problem.Em.si
    else:
        raise ValueError(f"unknown resonance mode {resonance!r}")
    if not 0 < e_res <= wD:
        raise NoResonance(f"resonant phonon energy {e_res:.4g} J outside (0, {wD:.4g}] J")
    if ph.E_LR.si == 0:
        return Quantity(0.0, "1/s")
    chi2 = eps * ph.E_LR.si / N
    s = np.sum(weight * chi2 * lorentzian(eta, gamma)) / N
    B_N = band_edge_limit(problem.lattice).si * (1.0 - band_edge_deficit(problem.lattice))
    rate = math.pi / hbar_for(hbar_reading) * s * N * wD / B_N
    return Quantity(float(rate), "1/s")


@dataclass
class Convergence:
    broadenings: np.ndarray  # J
    rates: np.ndarray  # 1/s
    converged: bool
    rate: Quantity

    @property
    def changes(self) -> np.ndarray:
        return np.abs(np.diff(self.rates)) / np.abs(self.rates[1:])


def golden_rule_convergence(problem: SearchProblem, start: Quantity = Quantity(5.0, "cm^-1"),
                            stop: Quantity = Quantity(0.5, "cm^-1"), rel: float = 0.01,
                            **kwargs) -> Convergence:
    """Halve the broadening from ``start`` down to ``stop``; converged once a halving moves the rate by <= rel."""
    g, g_min = require(start, ENERGY), require(stop, ENERGY)
    widths, rates = [], []
    converged = False
    while g >= g_min * (1 - 1e-12):
        widths.append(g)
        rates.append(golden_rule_rate(problem, Quantity(g, "J"), **kwargs).si)
        if len(rates) > 1 and abs(rates[-1] - rates[-2]) <= rel * abs(rates[-1]):
            converged = True
        g *= 0.5
    return Convergence(np.array(widths), np.array(rates), converged, Quantity(rates[-1], "1/s"))


def t0_closed(E0: Quantity, E_LR: Quantity, hbar_omega_D: Quantity, trap_depth: Quantity,
              hbar_reading: str = "A") -> Quantity:
    """T0 = hbar E0 (hbar omega_D)^2 / (3 pi E_LR dp^3)."""
    e0, elr = require(E0, ENERGY), require(E_LR, ENERGY)
    wD, dp = require(hbar_omega_D, ENERGY), require(trap_depth, ENERGY)
    if elr == 0:
        return Quantity(math.inf, "s")
    return Quantity(hbar_for(hbar_reading) * e0 * wD**2 / (3.0 * math.pi * elr * dp**3), "s")


def branch_of(mu: float) -> str:
    if 1 < mu <= 1.5:
        return "power-law"
    if mu >= 3:
        return "organic"
    raise BranchUndefined(f"no search-time formula for 3/2 < mu < 3 (mu={mu})")


def regime_of(T0: float, TN: float) -> str:
    r = TN / T0
    if r >= REGIME_RATIO:
        return "coherent-dominated"
    if r <= 1.0 / REGIME_RATIO:
        return "grover-dominated"
    return "mixed"


@dataclass
class SearchTimeBreakdown:
    T0: Quantity
    TN: Quantity
    Ts: Quantity
    regime: str
    A_prime: float
    branch: str
    E0: Quantity
    N: int


def closed_form_times(problem: SearchProblem, A_prime: float | None = None, hbar_reading: str = "A",
                      fit_grid=DEFAULT_FIT_GRID) -> SearchTimeBreakdown:
    """T0, TN = T0 N^(mu-1)/A' (or T0 N^2/A' for mu >= 3), and 1/Ts = 1/T0 + 1/TN.

    A' comes from the band-edge fit unless given.
    """
    spec = problem.lattice
    if not isinstance(spec, PowerLawChain):
        raise TypeError("closed_form_times needs a PowerLawChain; use lric_search_time for rings")
    branch = branch_of(spec.mu)
    if A_prime is None:
        A_prime = bandwidth_scaling_fit(spec, fit_grid).A_prime
    E0 = band_edge_limit(spec)
    ph = problem.phonons
    T0 = t0_closed(E0, ph.E_LR, ph.hbar_omega_D, problem.trap_depth, hbar_reading).si
    power = spec.mu - 1.0 if branch == "power-law" else 2.0
    TN = T0 * float(spec.N) ** power / A_prime
    Ts = 1.0 / (1.0 / T0 + 1.0 / TN)
    return SearchTimeBreakdown(Quantity(T0, "s"), Quantity(TN, "s"), Quantity(Ts, "s"),
                               regime_of(T0, TN), A_prime, branch, E0, spec.N)


@dataclass
class ScalingFit:
    slope: float
    stderr: float
    N_grid: np.ndarray
    TN: np.ndarray  # s


def loglog_slope(x, y) -> tuple[float, float]:
    """Least-squares slope of log y on log x and its standard error."""
    lx, ly = np.log(np.asarray(x, dtype=float)), np.log(np.asarray(y, dtype=float))
    if lx.size < 3:
        return float(np.polyfit(lx, ly, 1)[0]), math.nan
    coef, cov = np.polyfit(lx, ly, 1, cov=True)
    return float(coef[0]), float(math.sqrt(cov[0, 0]))


def numeric_tn(problem: SearchProblem, broadening: Quantity, **kwargs) -> float:
    """TN from the numeric rate: 1/TN = 1/Ts(N) - 1/Ts(N -> infinity).

    The infinite-size reference uses the same phonon sum with B_N replaced
    by the limiting band edge, so only the bandwidth deficit survives.
    """
    rate_N = golden_rule_rate(problem, broadening, **kwargs).si
    # rate_N - rate_inf = rate_N * (1 - B_N / E0)
    return 1.0 / (rate_N * band_edge_deficit(problem.lattice))


def numeric_scaling(problem: SearchProblem, N_grid, broadening: Quantity = Quantity(0.5, "cm^-1"),
                    **kwargs) -> ScalingFit:
    TN = np.array([numeric_tn(problem.with_size(int(N)), broadening, **kwargs) for N in N_grid])
    slope, err = loglog_slope(N_grid, TN)
    return ScalingFit(slope, err, np.asarray(N_grid), TN)


def closed_form_scaling(problem: SearchProblem, N_grid, **kwargs) -> ScalingFit:
    TN = np.array([closed_form_times(problem.with_size(int(N)), **kwargs).TN.si for N in N_grid])
    slope, err = loglog_slope(N_grid, TN)
    return ScalingFit(slope, err, np.asarray(N_grid), TN)


@dataclass
class LricTimes:
    T0: Quantity
    Tp: Quantity
    TN: Quantity
    Ts: Quantity
    p: int
    divergent: bool
    flags: list[str] = field(default_factory=list)


def lric_search_time(problem: SearchProblem, hbar_reading: str = "A") -> LricTimes:
    """Search times on an LRIC ring with extension p = N/m.

    T0 uses the LRIC band edge 4J. Tp = T0 / cos(2 pi/p). The small-m
    bandwidth deficit (2 pi m/N)^2 gives TN = T0 (p / 2 pi)^2, combined with
    T0 through 1/Ts = 1/T0 - 1/TN.
    """
    spec = problem.lattice
    if not isinstance(spec, LricRing):
        raise TypeError("lric_search_time needs an LricRing")
    if spec.N % spec.m:
        raise DegenerateP(f"N={spec.N} is not a multiple of m={spec.m}")
    p = spec.N // spec.m
    c = math.cos(2.0 * math.pi / p)
    if p <= 2 or c < -1e-12:
        raise DegenerateP(f"p={p} gives cos(2 pi/p) = {c:.3g} <= 0")
    ph = problem.phonons
    T0 = t0_closed(band_edge_energy(spec), ph.E_LR, ph.hbar_omega_D, problem.trap_depth, hbar_reading).si
    flags = ["minus-sign-combination"]
    divergent = abs(c) < 1e-12
    Tp = math.inf if divergent else T0 / c
    if divergent:
        flags.append("Tp-divergent")
    TN = T0 * (p / (2.0 * math.pi)) ** 2
    inv = 1.0 / T0 - 1.0 / TN
    if inv <= 0:
        flags.append("nonpositive-rate")
        Ts = math.inf
    else:
        Ts = 1.0 / inv
    return LricTimes(Quantity(T0, "s"), Quantity(Tp, "s"), Quantity(TN, "s"), Quantity(Ts, "s"), p, divergent, flags)
