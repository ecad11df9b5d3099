"""Polylogarithm, Lerch transcendent and zeta on the unit circle.

Two evaluation routes are provided:

``method="direct"``
    Plain partial summation, truncated once the analytic tail bound
    ``sum_{n>M} (n+a)^-mu <= (M+a)^(1-mu)/(mu-1)`` drops below ``tol``.
    Simple and independent, but hopeless for mu close to 1.

``method="auto"`` (default)
    A short direct head followed by an asymptotic tail. For z = 1 the tail
    is the Euler-Maclaurin expansion of the Hurwitz zeta function. For
    z = e^{i theta} != 1 the tail uses

        sum_{n>=0} z^n g(n) ~ sum_j d_j(z) g^(j)(0),
        1 / (1 - z e^t) = sum_j d_j(z) t^j,

    with g(x) = (x + A)^-mu. The head length is chosen so that |theta| A is
    large enough for the expansion to reach ``tol`` before it starts to
    diverge.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import bernoulli

from .errors import DomainError, NonConvergence

DEFAULT_MAX_TERMS = 10**7
_CHUNK = 1 << 20
_UNIT_TOL = 1e-12
# |theta| * A needed before the oscillatory tail expansion is used
_THETA_A = 44.0
_JMAX = 90
_B2K = bernoulli(40)[2::2]  # B_2, B_4, ..., B_40


def _check(mu: float, z: complex, a: float = 1.0, tol: float = 1e-12) -> None:
    if not mu > 1:
        raise DomainError(f"mu must exceed 1, got {mu}")
    if abs(abs(z) - 1.0) > _UNIT_TOL:
        raise DomainError(f"|z| must be 1, got {abs(z)}")
    if a < 1:
        raise DomainError(f"a must be >= 1, got {a}")
    if not tol > 0:
        raise DomainError("tol must be positive")


def _head(theta: float, mu: float, a: float, count: int) -> complex:
    """sum_{n=0}^{count-1} e^{i theta n} (n + a)^-mu, summed in chunks."""
    total = 0.0j
    for start in range(0, count, _CHUNK):
        n = np.arange(start, min(count, start + _CHUNK), dtype=float)
        w = (n + a) ** -mu
        if theta == 0.0:
            total += w[::-1].sum()
        else:
            total += (np.exp(1j * theta * n) * w)[::-1].sum()
    return total


def _direct(theta: float, mu: float, a: float, tol: float, max_terms: int) -> complex:
    # smallest M with (M + a)^(1-mu)/(mu-1) <= tol
    x = (tol * (mu - 1.0)) ** (1.0 / (1.0 - mu)) - a
    if not np.isfinite(x) or x > max_terms:
        raise NonConvergence(
            f"direct summation needs ~{x:.3g} terms for mu={mu}, tol={tol} "
            f"(ceiling {max_terms})"
        )
    return _head(theta, mu, a, max(1, math.ceil(x)))


def _hurwitz_tail(mu: float, A: float) -> float:
    """Euler-Maclaurin estimate of sum_{n>=0} (n + A)^-mu for large A."""
    s = A ** (1.0 - mu) / (mu - 1.0) + 0.5 * A**-mu
    rising = mu  # mu (mu+1) ... (mu+2k-2)
    power = A ** (-mu - 1.0)
    fact = 2.0
    for k, b in enumerate(_B2K, start=1):
        term = b / fact * rising * power
        s += term
        if abs(term) < 1e-18 * abs(s):
            break
        rising *= (mu + 2 * k - 1) * (mu + 2 * k)
        power /= A * A
        fact *= (2 * k + 1) * (2 * k + 2)
    return s


def _tail_coeffs(z: complex, A: float, jmax: int) -> np.ndarray:
    """Taylor coefficients of 1/(1 - z e^{u/A}) in u (scaled to avoid overflow)."""
    scaled = np.array([A ** -i / math.factorial(i) for i in range(1, jmax + 1)])
    e = np.empty(jmax + 1, dtype=complex)
    e[0] = 1.0 / (1.0 - z)
    w = z / (1.0 - z)
    for j in range(1, jmax + 1):
        e[j] = w * np.dot(e[j - 1 :: -1], scaled[:j])
    return e


def _oscillatory_tail(theta: float, mu: float, A: float, tol: float) -> complex:
    """sum_{n>=0} e^{i theta n} (n + A)^-mu by the d_j expansion."""
    z = complex(math.cos(theta), math.sin(theta))
    e = _tail_coeffs(z, A, _JMAX)
    rising = np.concatenate(([1.0], np.cumprod(-(mu + np.arange(_JMAX)))))  # (-1)^j (mu)_j
    terms = e * rising * A**-mu
    # pairwise envelope: some coefficients vanish identically (theta = pi)
    env = np.maximum(np.abs(terms[:-1]), np.abs(terms[1:]))
    small = np.nonzero(env < 1e-3 * tol)[0]
    if small.size == 0:
        raise NonConvergence(f"tail expansion stalled at theta={theta}, A={A}")
    return terms[: small[0] + 2].sum()


def _lerch_theta(theta: float, mu: float, a: float, tol: float, method: str, max_terms: int) -> complex:
    # reduce to (-pi, pi]
    theta = math.remainder(theta, 2.0 * math.pi)
    if method == "direct":
        return _direct(theta, mu, a, tol, max_terms)
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    if theta == 0.0:
        L = max(0, math.ceil(30.0 - a))
        return complex(_head(0.0, mu, a, L) + _hurwitz_tail(mu, a + L))
    head_len = _THETA_A / abs(theta) - a
    if head_len > max_terms:
        raise NonConvergence(f"theta={theta} needs ~{head_len:.3g} head terms (ceiling {max_terms})")
    L = max(0, math.ceil(head_len))
    head = _head(theta, mu, a, L)
    tail = _oscillatory_tail(theta, mu, a + L, tol)
    return head + complex(math.cos(theta * L), math.sin(theta * L)) * tail


def _theta_of(z: complex) -> float:
    z = complex(z)
    if z == 1:
        return 0.0
    return math.atan2(z.imag, z.real)


def lerch(z: complex, mu: float, a: float, tol: float = 1e-12, *, method: str = "auto",
          max_terms: int = DEFAULT_MAX_TERMS) -> complex:
    """Lerch transcendent Phi(z, mu, a) = sum_{n>=0} z^n / (n + a)^mu for |z| = 1."""
    _check(mu, z, a, tol)
    return _lerch_theta(_theta_of(z), mu, a, tol, method, max_terms)


def lerch_at_angle(theta: float, mu: float, a: float, tol: float = 1e-12, *, method: str = "auto",
                   max_terms: int = DEFAULT_MAX_TERMS) -> complex:
    """Phi(e^{i theta}, mu, a) without the round trip through a complex z."""
    _check(mu, 1.0, a, tol)
    return _lerch_theta(float(theta), mu, a, tol, method, max_terms)


def polylog(mu: float, z: complex, tol: float = 1e-12, *, method: str = "auto",
            max_terms: int = DEFAULT_MAX_TERMS) -> complex:
    """Li_mu(z) = sum_{n>=1} z^n / n^mu for |z| = 1 and mu > 1."""
    _check(mu, z, 1.0, tol)
    theta = _theta_of(z)
    return complex(math.cos(theta), math.sin(theta)) * _lerch_theta(theta, mu, 1.0, tol, method, max_terms)


def zeta(mu: float, tol: float = 1e-12, *, method: str = "auto", max_terms: int = DEFAULT_MAX_TERMS) -> float:
    """Riemann zeta for real mu > 1."""
    return polylog(mu, 1.0, tol, method=method, max_terms=max_terms).real


def hurwitz_zeta(mu: float, a: float, tol: float = 1e-12, *, method: str = "auto") -> float:
    return lerch(1.0, mu, a, tol, method=method).real
