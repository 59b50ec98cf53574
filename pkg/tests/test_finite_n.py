"""Finite-N layer: Hankel determinants, identity web, moments, convergence."""

import math
import warnings

import numpy as np
import pytest
from scipy import integrate, special

from cuemoments import finite_n, specfun
from cuemoments import painleve as pl


def _quad_entry(j, k, xi, s):
    f = lambda y: y ** (j + k) * (y + xi) ** s * y ** s * math.exp(-y)
    val, _ = integrate.quad(f, 0.0, np.inf, limit=300, epsabs=0.0,
                            epsrel=1e-13)
    return val


@pytest.mark.parametrize("j,k,xi,s", [
    (0, 0, 0.7, 1.0), (1, 2, 2.0, 0.3), (3, 3, 0.1, 1.7), (2, 0, 5.0, -0.3),
])
def test_moment_entry_vs_quadrature(j, k, xi, s):
    a = finite_n.moment_entry(j, k, xi, s)
    b = _quad_entry(j, k, xi, s)
    assert abs(a / b - 1.0) <= 1e-10


def test_w1_closed_form():
    # W_1(xi, s) = 1! * xi^{2s+1} Gamma(s+1) U(s+1, 2s+2, xi)
    xi, s = 1.3, 0.8
    job = finite_n.w_hankel(1, xi, s)
    ref = math.log(_quad_entry(0, 0, xi, s))
    assert abs(job.logdet - ref) <= 1e-10


def test_logdet_vs_dense_determinant():
    # at small N the classical moment matrix is well-conditioned; slogdet of
    # the explicit matrix must match the factorization route
    for N, xi, s in ((2, 0.5, 1.0), (4, 2.0, 0.3), (6, 1.0, 1.7)):
        job = finite_n.w_hankel(N, xi, s)
        m = np.array([[finite_n.moment_entry(j, k, xi, s)
                       for k in range(N)] for j in range(N)])
        sign, ld = np.linalg.slogdet(m)
        assert sign == 1.0
        ref = ld + float(specfun.gammaln(N + 1.0))
        assert abs(job.logdet - ref) <= 1e-9 * max(1.0, abs(ref))


def test_logderiv_vs_finite_difference():
    N, xi, s, d = 5, 1.5, 0.9, 1e-3
    job = finite_n.w_hankel(N, xi, s)
    vals = [finite_n.w_hankel(N, xi + k * d, s).logdet
            for k in (-2, -1, 1, 2)]
    fd = (vals[0] - 8 * vals[1] + 8 * vals[2] - vals[3]) / (12 * d)
    # logderiv is u_N = xi d/dxi ln W_N
    assert abs(job.logderiv - xi * fd) <= 1e-8


def test_positivity_grid():
    # W_N > 0 (Hankel determinant of a positive measure) for every tested
    # (N, s, xi); the factorization raises if positivity is lost
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for s in (-0.4, 0.3, 1.0, 2.5):
            for N in (1, 4, 8):
                for xi in (0.05, 1.0, 10.0):
                    job = finite_n.w_hankel(N, xi, s)
                    assert math.isfinite(job.logdet)


def test_hyp_u_hankel_two_routes():
    for N, s, t in ((2, 1.0, 0.8), (3, 2.0, 0.5), (4, 1.3, 1.2)):
        a = finite_n.hyp_u_hankel(N, t, s, "transform")
        b = finite_n.hyp_u_hankel(N, t, s, "direct")
        assert abs(a / b - 1.0) <= 1e-8


def test_laguerre_reduction_integer_s():
    # explicit s=1: determinant is the single entry L^{(1)}_{N}(-2t)
    N, t = 2, 0.7
    a = finite_n.hyp_u_hankel(N, t, 1.0, "transform")
    lhs = (-1.0) ** (N * (N - 1) // 2) * a / specfun.gamma(1.0 + N) ** N
    x = -2.0 * t
    l2 = 3.0 - 3.0 * x + 0.5 * x * x     # L_2^{(1)}(x) explicitly
    assert abs(lhs / l2 - 1.0) <= 1e-10
    assert abs(specfun.laguerre(2, 1.0, x) / l2 - 1.0) <= 1e-14


def test_determinant_identity_web():
    # J_N and W_N linked by the closed-form constant
    for N, s in ((2, 1.0), (3, 2.0), (2, 1.3)):
        t = 0.9
        j = finite_n.hyp_u_hankel(N, t, s, "transform")
        lhs = ((-1.0) ** (N * (N - 1) // 2)
               * specfun.gamma(s + N) ** (-N)
               * math.factorial(N) * j)
        lnw = finite_n.w_hankel(N, 2.0 * t, s).logdet
        rhs = math.exp(lnw - 2.0 * sum(
            float(specfun.gammaln(s + k)) for k in range(1, N + 1)))
        assert abs(lhs / rhs - 1.0) <= 1e-9


def test_lnw_series_vs_direct():
    # small-xi series of ln W_N matches the quadrature determinant
    for N, s in ((2, 1.0), (3, 0.5), (2, 0.25)):
        ser = finite_n._lnW_series(N, s)
        for xi in (1e-3, 1e-2):
            a = ser.eval(xi) + finite_n._w_logdet_zero(N, s)
            b = finite_n.w_hankel(N, xi, s).logdet
            assert abs(a - b) <= 1e-9 * max(1.0, abs(b))


def test_v_finite_s0_exact():
    assert finite_n.v_finite_n(2.0, 5, 0.0) == -1.0


def test_v_finite_convergence_rate():
    s, z = 1.0, 2.0
    v = pl.v_dispatch(z, s).v
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        e10 = abs(finite_n.v_finite_n(z, 10, s) - v)
        e20 = abs(finite_n.v_finite_n(z, 20, s) - v)
    assert 1.7 <= e10 / e20 <= 2.3


def test_selberg_product():
    for N, s in ((1, 0.3), (4, 1.0), (8, 1.7)):
        ln = sum(float(specfun.gammaln(float(j)))
                 + float(specfun.gammaln(2.0 * s + j))
                 - 2.0 * float(specfun.gammaln(s + j))
                 for j in range(1, N + 1))
        assert abs(finite_n.selberg_product(N, s) / math.exp(ln) - 1.0) \
            <= 1e-13
    assert finite_n.selberg_product(3, 0.0) == 1.0


def test_f_finite_vs_weyl_oracle():
    # N = 1 and N = 2 against direct eigenvalue-density quadrature
    a = finite_n.f_finite_n(1, 0.5, 0.25).real_value
    b = finite_n.cue_weyl_quadrature(1, 0.5, 0.25)
    assert abs(a / b - 1.0) <= 1e-8
    c = finite_n.f_finite_n(2, 1.0, 0.5).real_value
    d = finite_n.cue_weyl_quadrature(2, 1.0, 0.5)
    assert abs(c / d - 1.0) <= 1e-8


def test_f_finite_integer_h():
    # F_N(1,1) = pref_N E_N[Tr^2]/4; N^{-3} F_N(1,1) -> F(1,1) = 1/12 with
    # O(1/N) corrections: quadratic Richardson over N = 4, 8, 12
    vals = {}
    for N in (4, 8, 12):
        vals[N] = finite_n.f_finite_n(N, 1.0, 1).real_value / N ** 3
    x = np.array([1.0 / 4, 1.0 / 8, 1.0 / 12])
    y = np.array([vals[4], vals[8], vals[12]])
    extrap = float(np.polyval(np.polyfit(x, y, 2), 0.0))
    assert abs(extrap - 1.0 / 12.0) <= 1e-4


def test_phi_finite_is_charfn():
    # phi_N(t) = u_table(2t) lies in (0, 1] and decreases
    table = finite_n.build_finite_charfn(3, 1.0)
    t = np.linspace(0.0, 8.0, 60)
    u = np.array([float(table.u_at(float(x))) for x in t])
    assert abs(u[0] - 1.0) <= 1e-12
    assert np.all(u > 0.0) and np.all(u <= 1.0 + 1e-12)
    assert np.all(np.diff(u) < 1e-12)


def test_u_n_large_t_limit():
    # u_N(t) -> N s with O(1/t) error: the deviation at 2T is about half
    # the deviation at T
    N, s = 4, 0.7
    def u_n(t):
        return finite_n.w_hankel(N, t, s).logderiv
    d1 = abs(u_n(80.0) - N * s)
    d2 = abs(u_n(160.0) - N * s)
    assert d1 <= 0.2
    assert 1.7 <= d1 / d2 <= 2.3


def test_n_caps():
    with pytest.raises(ValueError):
        finite_n.f_finite_n(13, 1.0, 1)
    with pytest.raises(ValueError):
        finite_n.cue_weyl_quadrature(3, 1.0, 0.5)
