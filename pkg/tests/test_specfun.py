"""Oracle tests for the special-function kernel against mpmath."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cuemoments import specfun

mp = pytest.importorskip("mpmath")
mp.mp.dps = 30


@pytest.mark.parametrize("x", [0.3, 1.0, 1.7, 2.5, 4.0, 7.3])
def test_barnes_g_ln_vs_mpmath(x):
    ref = float(mp.log(mp.barnesg(x)))
    assert abs(specfun.barnes_g_ln(x) - ref) <= 1e-12 * max(1.0, abs(ref))


@pytest.mark.parametrize("s", [0.3, 0.5, 1.0, 1.7, 2.0])
def test_barnes_prefactor_vs_mpmath(s):
    ref = float(mp.log(mp.barnesg(1 + s) ** 2 / mp.barnesg(1 + 2 * s)))
    assert abs(specfun.barnes_prefactor_ln(s) - ref) <= 1e-12


def test_barnes_recurrence():
    # G(z+1) = Gamma(z) G(z)
    for z in (0.4, 1.3, 2.7):
        lhs = specfun.barnes_g_ln(z + 1.0)
        rhs = float(specfun.gammaln(z)) + specfun.barnes_g_ln(z)
        assert abs(lhs - rhs) <= 1e-12


@pytest.mark.parametrize("a,b,z", [
    (1.0, 2.0, 0.5), (2.3, 4.1, 1.7), (5.0, 8.5, 0.3),
    (0.7, -1.2, 2.0), (3.5, 3.5, 10.0), (1.0, 0.5, 0.01),
])
def test_hyp_u_vs_mpmath(a, b, z):
    ref = float(mp.hyperu(a, b, z))
    assert abs(specfun.hyp_u(a, b, z) / ref - 1.0) <= 1e-9


@pytest.mark.parametrize("n,alpha,x", [
    (0, 1.0, 0.3), (1, 0.5, 2.0), (4, 3.0, -2.0), (7, 1.5, 5.5),
])
def test_laguerre_vs_mpmath(n, alpha, x):
    ref = float(mp.laguerre(n, alpha, x))
    assert abs(specfun.laguerre(n, alpha, x) - ref) <= 1e-10 * max(1, abs(ref))


def test_laguerre_hyp_u_connection():
    # U(-n, c, z) = (-1)^n n! L_n^{(c-1)}(z) -- checked through the positive-a
    # reflection U(a,b,z) = z^{1-b} U(a-b+1, 2-b, z)
    n, c, z = 3, 2.5, 1.3
    lhs = (-1.0) ** n * math.factorial(n) * specfun.laguerre(n, c - 1.0, z)
    # U(-n,c,z) = z^{1-c} U(-n-c+1, 2-c, z): still negative a; use mpmath
    ref = float(mp.hyperu(-n, c, z))
    assert abs(lhs - ref) <= 1e-10 * max(1.0, abs(ref))


def test_bessel_vs_mpmath():
    assert abs(specfun.bessel_i(0.5, 1.2)
               - float(mp.besseli(0.5, 1.2))) <= 1e-13
    assert abs(specfun.bessel_j(1.5, 2.2)
               - float(mp.besselj(1.5, 2.2))) <= 1e-13


def test_pole_validation():
    with pytest.raises(ValueError):
        specfun.gamma(-2.0)
    with pytest.raises(ValueError):
        specfun.digamma(0.0)
    with pytest.raises(ValueError):
        specfun.hyp_u(-1.0, 2.0, 1.0)
    with pytest.raises(ValueError):
        specfun.barnes_g_ln(0.0)


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=0.1, max_value=20.0))
def test_gamma_recurrence(x):
    assert math.isclose(specfun.gamma(x + 1.0), x * specfun.gamma(x),
                        rel_tol=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=1, max_value=10),
       st.floats(min_value=0.1, max_value=3.0),
       st.floats(min_value=0.1, max_value=8.0))
def test_laguerre_recurrence(n, alpha, x):
    # (n+1) L_{n+1} = (2n+1+alpha-x) L_n - (n+alpha) L_{n-1}
    lm1 = specfun.laguerre(n - 1, alpha, x)
    l0 = specfun.laguerre(n, alpha, x)
    lp1 = specfun.laguerre(n + 1, alpha, x)
    scale = max(1.0, abs(l0), abs(lp1))
    assert abs((n + 1) * lp1 - (2 * n + 1 + alpha - x) * l0
               + (n + alpha) * lm1) <= 1e-10 * scale
