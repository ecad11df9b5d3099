"""Brute-force checks: dense Hamiltonians, full diagonalization and walk dynamics.

Nothing here uses the special-function closed forms; the point is to have an
independent route to every spectral statement made elsewhere in the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.optimize import brentq

from .errors import BadSite, InsufficientGrid, NonNormalizedInput
from .lattice import LatticeSpec, PowerLawChain, circulant_row
from .units import ENERGY, HBAR, Quantity, require

MAX_DENSE_N = 4096
EXPM_MAX_N = 512


@dataclass
class HamiltonianMatrix:
    N: int
    entries: np.ndarray  # J, real symmetric
    convention: str
    impurity: tuple[int, float] | None = None  # (site, depth in J)

    @property
    def scale(self) -> float:
        """Largest off-diagonal row sum, a natural energy scale for tolerances."""
        off = self.entries - np.diag(np.diag(self.entries))
        return float(np.abs(off).sum(axis=1).max()) or 1.0


def build_hamiltonian(spec: LatticeSpec, impurity: tuple[int, Quantity] | None = None,
                      convention: str = "paper") -> HamiltonianMatrix:
    """Dense single-exciton Hamiltonian, optionally with a trap of depth dp at site w."""
    N = spec.N
    if N > MAX_DENSE_N:
        raise ValueError(f"N={N} exceeds the dense cap {MAX_DENSE_N}")
    row = circulant_row(spec, convention)
    H = scipy.linalg.circulant(row).T.copy()
    imp = None
    if impurity is not None:
        w, depth = impurity
        if not 0 <= w < N:
            raise BadSite(f"site {w} outside [0, {N})")
        dp = require(depth, ENERGY)
        if dp < 0:
            raise ValueError("trap depth must be non-negative")
        H[w, w] -= dp
        imp = (w, dp)
    return HamiltonianMatrix(N, H, convention if isinstance(spec, PowerLawChain) else "lric", imp)


def degrees(H: HamiltonianMatrix) -> np.ndarray:
    """Number of distinct neighbours of every site."""
    off = H.entries - np.diag(np.diag(H.entries))
    return (np.abs(off) > 0).sum(axis=1)


@dataclass
class SpectralResult:
    eigenvalues: np.ndarray
    level_spacings: np.ndarray
    top_spacing: float
    bottom_spacing: float
    eigenvectors: np.ndarray | None = None


def _edge_gap(levels: np.ndarray, tol: float) -> float:
    """Gap between the first level and the next level that differs from it by more than tol."""
    diffs = np.abs(levels[1:] - levels[0])
    nz = diffs[diffs > tol]
    return float(nz[0]) if nz.size else 0.0


def eigendecompose(H: HamiltonianMatrix, vectors: bool = False) -> SpectralResult:
    if not np.all(np.isfinite(H.entries)):
        raise ValueError("Hamiltonian has non-finite entries")
    if vectors:
        vals, vecs = scipy.linalg.eigh(H.entries)
    else:
        vals, vecs = scipy.linalg.eigh(H.entries, eigvals_only=True), None
    tol = 1e-9 * H.scale
    return SpectralResult(
        eigenvalues=vals,
        level_spacings=np.diff(vals),
        top_spacing=_edge_gap(vals[::-1], tol),
        bottom_spacing=_edge_gap(vals, tol),
        eigenvectors=vecs,
    )


def multiset_deviation(a, b, scale: float) -> float:
    """Largest difference between two sorted spectra, relative to ``scale``."""
    a, b = np.sort(np.asarray(a)), np.sort(np.asarray(b))
    if a.shape != b.shape:
        return math.inf
    return float(np.max(np.abs(a - b)) / scale)


@dataclass
class LevelSpacingFit:
    exponent: float
    intercept: float
    N_grid: np.ndarray
    spacings: np.ndarray


def level_spacing_scaling(mu: float, N_grid, band_end: str = "top", convention: str = "paper") -> LevelSpacingFit:
    """Log-log slope of the band-edge level spacing against N from dense spectra."""
    grid = np.asarray(sorted(N_grid), dtype=int)
    if grid.size < 3:
        raise InsufficientGrid("need at least 3 sizes")
    if band_end not in ("top", "bottom"):
        raise ValueError("band_end must be 'top' or 'bottom'")
    gaps = []
    for N in grid:
        H = build_hamiltonian(PowerLawChain(int(N), Quantity(1.0, "J"), mu), convention=convention)
        res = eigendecompose(H)
        gaps.append(res.top_spacing if band_end == "top" else res.bottom_spacing)
    gaps = np.array(gaps)
    slope, intercept = np.polyfit(np.log(grid.astype(float)), np.log(gaps), 1)
    return LevelSpacingFit(float(slope), float(intercept), grid, gaps)


@dataclass
class WalkState:
    amplitudes: np.ndarray
    time: float = 0.0  # s

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    @property
    def survival(self) -> float:
        return self.norm**2


def uniform_state(N: int) -> WalkState:
    """Equal-weight superposition over all sites (the K = 0 exciton)."""
    return WalkState(np.full(N, 1.0 / math.sqrt(N), dtype=complex))


def momentum_state(N: int, k: int) -> WalkState:
    l = np.arange(N)
    return WalkState(np.exp(2j * np.pi * k * l / N) / math.sqrt(N))


def site_state(N: int, site: int) -> WalkState:
    psi = np.zeros(N, dtype=complex)
    psi[site] = 1.0
    return WalkState(psi)


def _effective(H: HamiltonianMatrix, absorb) -> np.ndarray:
    Heff = H.entries.astype(complex)
    if absorb is not None:
        gamma, site = absorb
        if not 0 <= site < H.N:
            raise BadSite(f"site {site} outside [0, {H.N})")
        Heff[site, site] -= 1j * require(gamma, ENERGY)
    return Heff


def _rk4(Heff: np.ndarray, psi: np.ndarray, t: float) -> np.ndarray:
    norm_H = np.abs(Heff).sum(axis=1).max()
    steps = max(1, math.ceil(t * norm_H / HBAR / 0.05))
    dt = t / steps
    A = -1j * Heff / HBAR
    for _ in range(steps):
        k1 = A @ psi
        k2 = A @ (psi + 0.5 * dt * k1)
        k3 = A @ (psi + 0.5 * dt * k2)
        k4 = A @ (psi + dt * k3)
        psi = psi + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
    return psi


def evolve(H: HamiltonianMatrix, psi0: WalkState, t: float,
           absorb: tuple[Quantity, int] | None = None) -> WalkState:
    """psi(t) = exp(-i (H - i Gamma |w><w|) t / hbar) psi0.

    ``absorb`` is ``(Gamma, w)`` with Gamma an energy. Hermitian evolution
    goes through the eigendecomposition; the absorbing case uses a Pade
    exponential up to N = 512 and RK4 beyond.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    psi = np.asarray(psi0.amplitudes, dtype=complex)
    if abs(np.linalg.norm(psi) - 1.0) > 1e-10:
        raise NonNormalizedInput(f"input norm {np.linalg.norm(psi)}")
    if t == 0:
        return WalkState(psi.copy(), psi0.time)
    if absorb is None:
        vals, vecs = scipy.linalg.eigh(H.entries)
        out = vecs @ (np.exp(-1j * vals * t / HBAR) * (vecs.T @ psi))
    else:
        Heff = _effective(H, absorb)
        if H.N <= EXPM_MAX_N:
            out = scipy.linalg.expm(-1j * Heff * t / HBAR) @ psi
        else:
            out = _rk4(Heff, psi, t)
    return WalkState(out, psi0.time + t)


def energy_expectation(H: HamiltonianMatrix, psi: WalkState) -> float:
    a = psi.amplitudes
    return float(np.real(np.vdot(a, H.entries @ a)))


def survival_curve(H: HamiltonianMatrix, psi0: WalkState, times, absorb: tuple[Quantity, int]) -> np.ndarray:
    """S(t) = ||psi(t)||^2 on a uniform time grid starting at 0."""
    times = np.asarray(times, dtype=float)
    dt = times[1] - times[0] if times.size > 1 else 0.0
    if times.size > 1 and not np.allclose(np.diff(times), dt, rtol=1e-9):
        raise ValueError("times must be uniformly spaced")
    step = scipy.linalg.expm(-1j * _effective(H, absorb) * dt / HBAR)
    psi = evolve(H, psi0, float(times[0]), absorb).amplitudes
    out = np.empty(times.size)
    for i in range(times.size):
        out[i] = np.vdot(psi, psi).real
        psi = step @ psi
    return out


def half_life(H: HamiltonianMatrix, psi0: WalkState, absorb: tuple[Quantity, int],
              t_max: float | None = None) -> float:
    """First time at which the survival probability reaches 1/2 (seconds)."""
    Heff = _effective(H, absorb)
    vals, V = scipy.linalg.eig(Heff)
    c = np.linalg.solve(V, psi0.amplitudes)

    def S(t):
        a = V @ (np.exp(-1j * vals * t / HBAR) * c)
        return float(np.vdot(a, a).real) - 0.5

    tau = HBAR / max(H.scale, 1e-300)
    t_max = t_max if t_max is not None else 1e7 * tau
    grid = tau * np.geomspace(1e-3, t_max / tau, 4000)
    prev = 0.0
    for t in grid:
        if S(t) <= 0:
            return brentq(S, prev, t, xtol=1e-12 * t)
        prev = t
    return math.inf
