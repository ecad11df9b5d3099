"""Graph models and exciton dispersion.

Two ring models are supported: the power-law chain with transfer element
``J / n**mu`` and the long-range interacting cycle (LRIC), a ring with extra
edges between sites ``m`` apart. Energies are handled in joules internally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import specfun
from .errors import DegenerateFit, DomainError, InsufficientGrid, OutOfZone, ZeroBandwidth
from .units import ENERGY, Quantity, require


@dataclass(frozen=True)
class PowerLawChain:
    """N sites with long-range transfer J / |n|^mu."""

    N: int
    J: Quantity
    mu: float
    delta_E: Quantity = field(default_factory=lambda: Quantity(0.0, "J"))

    def __post_init__(self):
        if self.N < 2:
            raise ValueError("N must be at least 2")
        if not self.mu > 1:
            raise DomainError(f"mu must exceed 1, got {self.mu}")
        if require(self.J, ENERGY) < 0:
            raise ValueError("J must be non-negative")
        require(self.delta_E, ENERGY)

    @classmethod
    def from_band_edge(cls, E0: Quantity, mu: float, N: int, delta_E: Quantity | None = None) -> PowerLawChain:
        """Choose J so that the infinite-chain band edge 2 J zeta(mu) equals ``E0``."""
        J = Quantity(require(E0, ENERGY) / (2.0 * specfun.zeta(mu)), "J")
        return cls(N, J, mu, delta_E if delta_E is not None else Quantity(0.0, "J"))

    def with_size(self, N: int) -> PowerLawChain:
        return PowerLawChain(N, self.J, self.mu, self.delta_E)


@dataclass(frozen=True)
class LricRing:
    """Cycle of N sites plus shortcut edges between sites ``m`` apart (degree 4)."""

    N: int
    J: Quantity
    m: int
    delta_E: Quantity = field(default_factory=lambda: Quantity(0.0, "J"))

    def __post_init__(self):
        if self.N < 4:
            raise ValueError("an LRIC ring needs N >= 4")
        if not 2 <= self.m <= self.N // 2:
            raise DomainError(f"shortcut stride m must satisfy 2 <= m <= N/2, got m={self.m}, N={self.N}")
        if require(self.J, ENERGY) < 0:
            raise ValueError("J must be non-negative")
        require(self.delta_E, ENERGY)

    @property
    def p(self) -> float:
        return self.N / self.m

    def with_size(self, N: int) -> LricRing:
        return LricRing(N, self.J, self.m, self.delta_E)


LatticeSpec = PowerLawChain | LricRing


def zone(spec: LatticeSpec, inclusive: bool = False) -> np.ndarray:
    """Integer wave indices of the Brillouin zone.

    Power-law chains use ``[-N/2, N/2]``; with ``inclusive=False`` the
    duplicate edge point is dropped so exactly N distinct modes remain.
    LRIC rings use ``[1, N]``.
    """
    N = spec.N
    if isinstance(spec, LricRing):
        return np.arange(1, N + 1)
    if inclusive:
        return np.arange(-(N // 2), N // 2 + 1)
    return np.arange(-((N - 1) // 2), N // 2 + 1)


def _check_zone(spec: LatticeSpec, k) -> np.ndarray:
    k = np.asarray(k)
    if isinstance(spec, LricRing):
        bad = (k < 1) | (k > spec.N)
    else:
        bad = np.abs(k) > spec.N / 2
    if np.any(bad):
        raise OutOfZone(f"k={k[bad] if k.ndim else k} outside the zone for N={spec.N}")
    return k


def wavevector(spec: LatticeSpec, k) -> np.ndarray:
    return 2.0 * np.pi * np.asarray(k, dtype=float) / spec.N


def _power_sum(K: np.ndarray, mu: float, n_max: int, weights: np.ndarray | None = None) -> np.ndarray:
    """sum_{n=1}^{n_max} w_n cos(K n) / n^mu for every K, blocked to bound memory."""
    n = np.arange(1, n_max + 1, dtype=float)
    c = n**-mu if weights is None else weights
    K = np.atleast_1d(K).astype(float)
    out = np.empty(K.shape)
    block = max(1, 4_000_000 // max(n_max, 1))
    for s in range(0, K.size, block):
        Kb = K[s : s + block]
        out[s : s + block] = np.cos(np.outer(Kb, n)) @ c
    return out


def dispersion_direct(spec: LatticeSpec, k) -> Quantity:
    """E(K) by finite sums: 2J sum_{n=1}^N cos(Kn)/n^mu, or the LRIC two-cosine form."""
    k = _check_zone(spec, k)
    K = wavevector(spec, k)
    dE = spec.delta_E.si
    J = spec.J.si
    if isinstance(spec, LricRing):
        E = dE + 2.0 * J * (np.cos(K) + np.cos(spec.m * K))
    else:
        E = dE + 2.0 * J * _power_sum(K, spec.mu, spec.N).reshape(K.shape)
    return Quantity(E if np.ndim(E) else float(E), "J")


def dispersion_closed(spec: PowerLawChain, k, tol: float = 1e-12) -> Quantity:
    """E(K) = 2J Re[Li_mu(e^{iK}) - e^{i(N+1)K} Phi(e^{iK}, mu, N+1)]."""
    if not isinstance(spec, PowerLawChain):
        raise TypeError("the polylog form applies to power-law chains")
    k = _check_zone(spec, k)
    K = np.atleast_1d(wavevector(spec, k))
    N, mu = spec.N, spec.mu
    vals = np.empty(K.shape)
    for i, Ki in enumerate(K):
        z = complex(math.cos(Ki), math.sin(Ki))
        li = z * specfun.lerch_at_angle(Ki, mu, 1.0, tol)
        phase = (N + 1) * Ki
        lr = complex(math.cos(phase), math.sin(phase)) * specfun.lerch_at_angle(Ki, mu, N + 1.0, tol)
        vals[i] = (li - lr).real
    E = spec.delta_E.si + 2.0 * spec.J.si * vals
    return Quantity(E.reshape(np.shape(k)) if np.ndim(k) else float(E[0]), "J")


def circulant_row(spec: LatticeSpec, convention: str = "paper") -> np.ndarray:
    """First row (in J) of the translation-invariant single-exciton Hamiltonian.

    ``paper``: each pair at ring distance d couples through both arcs,
    J (d^-mu + (N-d)^-mu), and the n = N self-image 2J/N^mu sits on the
    diagonal; the spectrum is then exactly the n = 1..N cosine sum.
    ``minimal-image``: J / min(d, N-d)^mu.
    LRIC rings ignore the convention.
    """
    N = spec.N
    J = spec.J.si
    row = np.zeros(N)
    row[0] = spec.delta_E.si
    if isinstance(spec, LricRing):
        for d in (1, -1, spec.m, -spec.m):
            row[d % N] += J
        return row
    d = np.arange(1, N, dtype=float)
    if convention == "paper":
        row[1:] = J * (d**-spec.mu + (N - d) ** -spec.mu)
        row[0] += 2.0 * J * float(N) ** -spec.mu
    elif convention == "minimal-image":
        row[1:] = J * np.minimum(d, N - d) ** -spec.mu
    else:
        raise ValueError(f"unknown convention {convention!r}")
    return row


def circulant_dispersion(spec: LatticeSpec, k, convention: str = "paper") -> Quantity:
    """Spectrum of the circulant Hamiltonian: sum_d row[d] cos(K d)."""
    k = _check_zone(spec, k)
    row = circulant_row(spec, convention)
    K = np.atleast_1d(wavevector(spec, k))
    d = np.arange(spec.N, dtype=float)
    E = np.cos(np.outer(K, d)) @ row
    return Quantity(E.reshape(np.shape(k)) if np.ndim(k) else float(E[0]), "J")


@dataclass
class DispersionCurve:
    k_indices: np.ndarray
    K_values: np.ndarray
    energies: np.ndarray  # J
    bandwidth_B: Quantity  # half band width
    E0: Quantity  # upper band edge measured from delta_E
    Em: Quantity  # mean band energy


def dispersion_curve(spec: LatticeSpec, method: str = "direct", convention: str = "paper") -> DispersionCurve:
    k = zone(spec)
    if method == "direct":
        E = np.atleast_1d(dispersion_direct(spec, k).magnitude)
    elif method == "closed":
        if isinstance(spec, LricRing):
            E = np.atleast_1d(dispersion_direct(spec, k).magnitude)
        else:
            E = np.atleast_1d(dispersion_closed(spec, k).magnitude)
    elif method == "circulant":
        E = np.atleast_1d(circulant_dispersion(spec, k, convention).magnitude)
    else:
        raise ValueError(f"unknown method {method!r}")
    return DispersionCurve(
        k_indices=k,
        K_values=wavevector(spec, k),
        energies=E,
        bandwidth_B=Quantity(0.5 * (E.max() - E.min()), "J"),
        E0=Quantity(E.max() - spec.delta_E.si, "J"),
        Em=Quantity(float(E.mean()), "J"),
    )


# beyond this size the K = 0 sum goes through the Hurwitz zeta function
_DIRECT_EDGE_MAX = 1 << 22


def band_edge_energy(spec: LatticeSpec) -> Quantity:
    """K = 0 energy measured from delta_E at the spec's finite N."""
    if isinstance(spec, LricRing):
        return Quantity(4.0 * spec.J.si, "J")
    if spec.N > _DIRECT_EDGE_MAX:
        return Quantity(2.0 * spec.J.si * specfun.zeta(spec.mu) * (1.0 - band_edge_deficit(spec)), "J")
    return Quantity(2.0 * spec.J.si * _partial_zeta(spec.mu, spec.N), "J")


def band_edge_limit(spec: LatticeSpec) -> Quantity:
    """N -> infinity upper band edge: 2J zeta(mu), or 4J for LRIC."""
    if isinstance(spec, LricRing):
        return Quantity(4.0 * spec.J.si, "J")
    return Quantity(2.0 * spec.J.si * specfun.zeta(spec.mu), "J")


def band_edge_deficit(spec: LatticeSpec) -> float:
    """Relative shortfall 1 - E_{K=0}(N) / E0 of the finite-size band edge.

    Evaluated as zeta(mu, N + 1) / zeta(mu) so it stays accurate for any N.
    The LRIC band edge 4J has no finite-size shortfall.
    """
    if isinstance(spec, LricRing):
        return 0.0
    return specfun.hurwitz_zeta(spec.mu, spec.N + 1.0) / specfun.zeta(spec.mu)


def mean_band_energy(spec: LatticeSpec) -> Quantity:
    """Average of E(K) over the N distinct zone modes.

    Every cosine term averages to zero except n = N, so the paper-sum power
    law gives delta_E + 2J/N^mu and the LRIC ring gives delta_E.
    """
    if isinstance(spec, LricRing):
        return Quantity(spec.delta_E.si, "J")
    return Quantity(spec.delta_E.si + 2.0 * spec.J.si * float(spec.N) ** -spec.mu, "J")


@lru_cache(maxsize=256)
def _partial_zeta(mu: float, N: int) -> float:
    n = np.arange(1, N + 1, dtype=float)
    return float(np.sum(n[::-1] ** -mu))


@dataclass
class BandEdgeFit:
    E0_mu: Quantity
    A_prime: float
    fitted_exponent: float
    residual: float
    N_grid: np.ndarray
    deficits: np.ndarray  # (E0 - E_{K=0}(N)) / E0


DEFAULT_FIT_GRID = tuple(2**j for j in range(6, 15))


def bandwidth_scaling_fit(spec: PowerLawChain, N_grid=DEFAULT_FIT_GRID) -> BandEdgeFit:
    """Fit E0 - E_{K->0}(N) = E0 A' N^p on a log-log scale.

    E0 is the infinite-chain edge 2J zeta(mu). The finite-size K = 0 energy
    comes from the direct sum. The expected exponent is 1 - mu (and -2 at
    mu = 3).
    """
    mu = spec.mu
    if 1.5 < mu < 3:
        raise DomainError("band-edge scaling is only defined for 1 < mu <= 3/2 or mu >= 3")
    grid = np.unique(np.asarray(N_grid, dtype=int))
    if grid.size < 4 or grid[-1] / grid[0] < 100:
        raise InsufficientGrid("need at least 4 sizes spanning two decades")
    zeta_mu = specfun.zeta(mu)
    deficit = np.array([1.0 - _partial_zeta(mu, int(N)) / zeta_mu for N in grid])
    if np.any(deficit <= 1e-13):
        raise DegenerateFit("band-edge deficit underflows double precision")
    x, y = np.log(grid.astype(float)), np.log(deficit)
    (slope, intercept), res, *_ = np.polyfit(x, y, 1, full=True)
    rms = math.sqrt(res[0] / grid.size) if res.size else 0.0
    return BandEdgeFit(
        E0_mu=Quantity(2.0 * spec.J.si * zeta_mu, "J"),
        A_prime=math.exp(intercept),
        fitted_exponent=float(slope),
        residual=rms,
        N_grid=grid,
        deficits=deficit,
    )


def coupling_regime(E_LR: Quantity, B: Quantity) -> float:
    """gamma = E_LR / B, the exciton-phonon scattering regime."""
    b = require(B, ENERGY)
    if b <= 0:
        raise ZeroBandwidth("bandwidth must be positive")
    return require(E_LR, ENERGY) / b
