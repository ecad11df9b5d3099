import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from excitonsearch.errors import DomainError, NonConvergence
from excitonsearch.specfun import hurwitz_zeta, lerch, lerch_at_angle, polylog, zeta


# zero itself or an angle no smaller than the ones a ring of 10^4 sites produces
ANGLES = st.one_of(st.just(0.0), st.floats(1e-3, math.pi), st.floats(-math.pi, -1e-3))


def test_tiny_angle_reports_nonconvergence():
    with pytest.raises(NonConvergence):
        lerch_at_angle(5e-324, 2.0, 1.0)


def test_zeta_values():
    assert zeta(2) == pytest.approx(math.pi**2 / 6, rel=1e-15)
    assert zeta(3) == pytest.approx(1.2020569031595942, rel=1e-15)
    assert zeta(20) - 1 == pytest.approx(9.5396203387e-7, rel=1e-9)


def test_alternating():
    assert polylog(2, -1).real == pytest.approx(-math.pi**2 / 12, abs=1e-14)


@pytest.mark.parametrize("mu", [1.01, 1.1, 1.25, 1.5, 2.0, 3.0, 7.5])
@pytest.mark.parametrize("theta", [1e-4, 0.01, 0.3, 1.0, 2.5, math.pi])
def test_polylog_against_mpmath(mu, theta):
    z = complex(math.cos(theta), math.sin(theta))
    ref = complex(mpmath.polylog(mu, mpmath.mpc(z.real, z.imag)))
    assert abs(polylog(mu, z) - ref) <= 1e-12 * max(1.0, abs(ref))


@pytest.mark.parametrize("a", [1.0, 17.0, 4097.0, 16385.0])
@pytest.mark.parametrize("theta", [0.002, 0.7, math.pi])
def test_lerch_against_mpmath(a, theta):
    mu = 1.25
    z = complex(math.cos(theta), math.sin(theta))
    ref = complex(mpmath.lerchphi(mpmath.mpc(z.real, z.imag), mu, a))
    assert abs(lerch(z, mu, a) - ref) <= 1e-12 * max(1.0, abs(ref))


def test_hurwitz():
    assert hurwitz_zeta(3, 101.0) == pytest.approx(float(mpmath.zeta(3, 101)), rel=1e-13)


def test_direct_method_is_independent_oracle():
    got = lerch_at_angle(1.0, 3.0, 5.0, tol=1e-12, method="direct")
    assert abs(got - lerch_at_angle(1.0, 3.0, 5.0)) < 1e-11


def test_direct_method_gives_up_near_mu_one():
    with pytest.raises(NonConvergence):
        lerch_at_angle(0.5, 1.1, 1.0, tol=1e-12, method="direct")


def test_domain():
    with pytest.raises(DomainError):
        polylog(1.0, 1.0)
    with pytest.raises(DomainError):
        polylog(2.0, 0.5)
    with pytest.raises(DomainError):
        lerch(1.0, 2.0, 0.5)


@settings(max_examples=40, deadline=None)
@given(st.floats(1.05, 6.0), ANGLES, st.integers(2, 300))
def test_truncation_identity(mu, theta, N):
    """Li(z) - z^(N+1) Phi(z, mu, N+1) is the finite sum up to N."""
    z = complex(math.cos(theta), math.sin(theta))
    n = np.arange(1, N + 1)
    finite = np.sum(np.exp(1j * theta * n) * n**-mu)
    closed = polylog(mu, z) - z ** (N + 1) * lerch(z, mu, N + 1.0)
    assert abs(closed - finite) <= 1e-11 * max(1.0, abs(finite))


@settings(max_examples=30, deadline=None)
@given(st.floats(1.05, 6.0), st.floats(1e-3, math.pi))
def test_conjugate_symmetry(mu, theta):
    z = complex(math.cos(theta), math.sin(theta))
    assert abs(polylog(mu, z.conjugate()) - polylog(mu, z).conjugate()) < 1e-13
