"""Loss channels that compete with the search.

Phonon scattering, the size limit it implies, the band shift caused by the
trap, exciton formation from free carriers at the trap, and
exciton-exciton annihilation. All formulas are evaluated in SI; composite
rates are built with :class:`Quantity` algebra so their dimension is checked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DimensionMismatch, NoScattering, ZeroTemperature
from .greens import SearchProblem, closed_form_times
from .units import (
    ENERGY,
    LENGTH,
    MASS,
    MASS_DENSITY,
    NUMBER_DENSITY,
    RATE,
    TIME,
    VELOCITY,
    HBAR,
    M_ELECTRON,
    Quantity,
    energy_or_thermal,
    require,
)

FUSION_NOTE = (
    "Singlet fission and triplet fusion are not modelled; literature estimates put "
    "their rates in the 1-10 ps range, slower than T0 but faster than T_f and T_an."
)

_HBAR_Q = Quantity(HBAR, "J s")


def scattering_time(B: Quantity, E_LR: Quantity, T: Quantity) -> Quantity:
    """T_scat = hbar B / (E_LR k_B T).

    ``T`` may be a temperature or the thermal energy k_B T itself.
    """
    b, elr = require(B, ENERGY), require(E_LR, ENERGY)
    kT = energy_or_thermal(T)
    if kT == 0:
        raise ZeroTemperature("scattering time diverges at T = 0")
    if b <= 0:
        raise ValueError("B must be positive")
    if elr == 0:
        raise NoScattering("E_LR = 0: the exciton never scatters")
    return Quantity(HBAR * b / (elr * kT), "s")


@dataclass(frozen=True)
class Feasibility:
    lhs: float
    rhs: float
    feasible: bool

    @property
    def max_N(self) -> int:
        """Largest N with N^2 < rhs."""
        if math.isinf(self.rhs):
            return 2**63 - 1
        n = math.isqrt(math.ceil(self.rhs))
        while n * n >= self.rhs:
            n -= 1
        return n


def feasibility_condition(N: int, trap_depth: Quantity, T: Quantity, hbar_omega_D: Quantity) -> Feasibility:
    """N^2 < 3 pi dp^3 / (k_B T (hbar omega_D)^2), the size limit set by scattering."""
    dp, wD = require(trap_depth, ENERGY), require(hbar_omega_D, ENERGY)
    kT = energy_or_thermal(T)
    rhs = math.inf if kT == 0 else 3.0 * math.pi * dp**3 / (kT * wD**2)
    lhs = float(N) ** 2
    return Feasibility(lhs, rhs, lhs < rhs)


def band_shift(B: Quantity, trap_depth: Quantity) -> Quantity:
    """sqrt(B^2 + dp^2) - B, returned in the unit of ``B``."""
    b, dp = require(B, ENERGY), require(trap_depth, ENERGY)
    if b < 0 or dp < 0:
        raise ValueError("B and dp must be non-negative")
    # b^2 + dp^2 - b^2 over the sum avoids cancellation for dp << b
    shift = dp * dp / (math.hypot(b, dp) + b) if dp > 0 else 0.0
    return Quantity(shift, "J").to(B.unit if B.unit != "SI" else "J")


@dataclass(frozen=True)
class Coherence:
    k_prime: Quantity  # 1/m
    length: Quantity  # m
    zero_length: bool


def coherence_damping(T_scat: Quantity, v_group: Quantity) -> Coherence:
    """k' = 1 / (v T_scat), the inverse mean free path; coherence length 1/k'."""
    ts, v = require(T_scat, TIME), require(v_group, VELOCITY)
    if ts < 0 or v < 0:
        raise ValueError("inputs must be non-negative")
    path = v * ts
    if path == 0:
        return Coherence(Quantity(math.inf, "1/m"), Quantity(0.0, "m"), True)
    return Coherence(Quantity(1.0 / path, "1/m"), Quantity(path, "m"), False)


@dataclass(frozen=True)
class CarrierParams:
    n_i: Quantity
    n_ex: Quantity
    E_T: Quantity
    E_b: Quantity
    xi: Quantity
    d0: Quantity
    N_star: int = 1
    m_e_star: Quantity = field(default_factory=lambda: Quantity(M_ELECTRON, "kg"))

    def __post_init__(self):
        for name, dims in (("n_i", NUMBER_DENSITY), ("n_ex", NUMBER_DENSITY), ("E_T", ENERGY),
                           ("E_b", ENERGY), ("xi", MASS_DENSITY), ("d0", LENGTH), ("m_e_star", MASS)):
            if require(getattr(self, name), dims) < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.xi.si == 0 or self.d0.si == 0 or self.m_e_star.si == 0 or self.N_star < 1:
            raise ValueError("xi, d0, m_e_star and N_star must be positive")
        if not self.E_T.si > self.E_b.si:
            raise ValueError("transport gap must exceed the binding energy")

    @property
    def cell_edge(self) -> Quantity:
        """N* d0, the unit-cell edge length."""
        return Quantity(self.N_star * self.d0.si, "m")


def formation_rate(carriers: CarrierParams, trap_depth: Quantity, v: Quantity) -> Quantity:
    """R_f = 2 n_i m* (N* d0) / (hbar^2 xi v) [(E_T - E_b)^2 + dp^2]."""
    require(trap_depth, ENERGY)
    require(v, VELOCITY)
    gap = carriers.E_T - carriers.E_b
    energy2 = gap * gap + trap_depth * trap_depth
    R = 2.0 * carriers.n_i * carriers.m_e_star * carriers.cell_edge / (_HBAR_Q**2 * carriers.xi * v) * energy2
    if R.dims != RATE:
        raise DimensionMismatch(f"formation rate has dims {R.dims}")
    return Quantity(R.si, "1/s")


def formation_time(carriers: CarrierParams, trap_depth: Quantity, v: Quantity) -> Quantity:
    R = formation_rate(carriers, trap_depth, v).si
    return Quantity(math.inf if R == 0 else 1.0 / R, "s")


def annihilation_rate(carriers: CarrierParams) -> Quantity:
    """R_an = 10 n_ex m*^(3/2) E_T^(5/2) (N* d0)^6 / hbar^4."""
    R = 10.0 * carriers.n_ex * carriers.m_e_star**1.5 * carriers.E_T**2.5 * carriers.cell_edge**6 / _HBAR_Q**4
    if R.dims != RATE:
        raise DimensionMismatch(f"annihilation rate has dims {R.dims}")
    return Quantity(R.si, "1/s")


def annihilation_time(carriers: CarrierParams) -> Quantity:
    R = annihilation_rate(carriers).si
    return Quantity(math.inf if R == 0 else 1.0 / R, "s")


@dataclass
class CompetingReport:
    T0: Quantity
    TN: Quantity
    T_scat: Quantity
    condition_lhs: float
    condition_rhs: float
    feasible: bool
    band_shift: Quantity
    k_prime: Quantity
    coherence_length: Quantity
    T_f: Quantity | None
    T_an: Quantity | None
    ranking: list[str]
    search_beats_scattering: bool
    notes: list[str]


def compete_report(problem: SearchProblem, carriers: CarrierParams | None, T: Quantity, *,
                   B: Quantity | None = None, shift_B: Quantity | None = None,
                   shift_dp: Quantity | None = None, v_carrier: Quantity | None = None,
                   A_prime: float | None = None, hbar_reading: str = "A") -> CompetingReport:
    """Collect every timescale for one scenario and rank them.

    ``B`` is the half bandwidth used for scattering (default E0 / 2).
    ``shift_B`` and ``shift_dp`` choose the band-shift example (default B and
    the trap depth). Carrier-driven times are omitted when ``carriers`` is
    None or the relevant concentration is zero.
    """
    times = closed_form_times(problem, A_prime=A_prime, hbar_reading=hbar_reading)
    ph = problem.phonons
    B = B if B is not None else Quantity(times.E0.si / 2.0, "J")
    ts = scattering_time(B, ph.E_LR, T)
    feas = feasibility_condition(problem.N, problem.trap_depth, T, ph.hbar_omega_D)
    shift = band_shift(shift_B if shift_B is not None else B,
                       shift_dp if shift_dp is not None else problem.trap_depth)
    v = v_carrier if v_carrier is not None else ph.v
    coh = coherence_damping(ts, v)
    T_f = T_an = None
    if carriers is not None:
        if carriers.n_i.si > 0:
            T_f = formation_time(carriers, problem.trap_depth, v)
        if carriers.n_ex.si > 0:
            T_an = annihilation_time(carriers)
    named = {"T0": times.T0.si, "TN": times.TN.si, "T_scat": ts.si}
    if T_f is not None:
        named["T_f"] = T_f.si
    if T_an is not None:
        named["T_an"] = T_an.si
    ranking = sorted(named, key=named.get)
    notes = [FUSION_NOTE]
    if not feas.feasible:
        notes.append(f"N = {problem.N} violates the scattering size limit (max N = {feas.max_N})")
    return CompetingReport(
        T0=times.T0, TN=times.TN, T_scat=ts,
        condition_lhs=feas.lhs, condition_rhs=feas.rhs, feasible=feas.feasible,
        band_shift=shift, k_prime=coh.k_prime, coherence_length=coh.length,
        T_f=T_f, T_an=T_an, ranking=ranking,
        search_beats_scattering=times.TN.si < ts.si, notes=notes,
    )
