"""Leading coefficients F(s,h): branches, kernel path, arithmetic factor."""

import math
import warnings

import numpy as np
import pytest

from cuemoments import moments
from cuemoments.charfn import build_charfn


def test_s0_closed_form(table_s0):
    # F(0,h) = 2^{-2h}/cos(pi h)
    for h in (0.1, 0.25, 0.45):
        val = moments.F_moment(0.0, h, table_s0).real_value
        assert abs(val - 2.0 ** (-2 * h) / math.cos(math.pi * h)) <= 1e-8


def test_prefactor_normalization(table_s1):
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 30
    for s, table in ((1.0, table_s1),):
        val = moments.F_moment(s, 0, table).real_value
        ref = float(mp.barnesg(1 + s) ** 2 / mp.barnesg(1 + 2 * s))
        assert abs(val / ref - 1.0) <= 1e-12


def test_integer_h_value(table_s1):
    # F(1,1) = 1/12 (second-moment identity of the log-characteristic flow)
    val = moments.F_moment(1.0, 1, table_s1).real_value
    assert abs(val - 1.0 / 12.0) <= 1e-10


def test_branch_continuity(table_s2):
    f1 = moments.F_moment(2.0, 1, table_s2).real_value
    for d in (1e-4, -1e-4):
        assert abs(moments.F_moment(2.0, 1.0 + d, table_s2).real_value
                   - f1) <= 1e-5


def test_kernel_path_agreement(table_s1):
    a = moments.F_moment(1.0, 0.5, table_s1).real_value
    b = moments.F_kernel_eps(1.0, 0.5, table_s1).real_value
    assert abs(a / b - 1.0) <= 1e-4


def test_negative_branch(table_s1):
    # Re(h) in (-1/2, 0) uses the M = -1/2 branch; at s=0 the closed form
    # still applies
    table0 = build_charfn(0.0)
    h = -0.3
    val = moments.F_moment(0.0, h, table0).real_value
    assert abs(val - 2.0 ** (-2 * h) / math.cos(math.pi * h)) <= 1e-8


def test_complex_h(table_s1):
    # conjugate symmetry F(s, conj h) = conj F(s, h)
    h = 0.4 + 0.2j
    a = moments.F_moment(1.0, h, table_s1).value
    b = moments.F_moment(1.0, h.conjugate(), table_s1).value
    assert abs(a - b.conjugate()) <= 1e-10 * max(1.0, abs(a))


def test_query_validation():
    with pytest.raises(ValueError):
        moments.MomentQuery(s=-0.6, h=0.1)
    with pytest.raises(ValueError):
        moments.MomentQuery(s=1.0, h=-0.6)
    with pytest.raises(ValueError):
        moments.MomentQuery(s=1.0, h=1.5)       # on the divergence boundary
    with pytest.raises(ValueError):
        moments.MomentQuery(s=3.0, h=1.0 + 0.5j)  # excluded line


def test_nearly_divergent_warns(table_s1):
    with pytest.warns(UserWarning):
        moments.MomentQuery(s=1.0, h=1.4999)


def test_kernel_K_even_and_conjugate():
    for t in (0.0, 0.7, 3.0):
        k = moments.kernel_K(1.2, 0.05, t)
        assert abs(k - moments.kernel_K(1.2, 0.05, -t)) <= 1e-15
        assert abs(k.imag) <= 1e-15 * max(1.0, abs(k))


def test_hua_pickrell_moment_cauchy(table_s0):
    # s = 0: E|X|^{1/2} = sec(pi/4) = sqrt(2)
    val = moments.hua_pickrell_moment(0.0, 0.25, table_s0)
    assert abs(val - math.sqrt(2.0)) <= 1e-8


def test_arithmetic_factor():
    assert moments.arithmetic_factor(0.0) == 1.0
    assert abs(moments.arithmetic_factor(1.0) - 1.0) <= 1e-8
    # cutoff stability: doubling the cutoff moves a_s by < 1e-8
    a = moments.arithmetic_factor(0.7, prime_cutoff=10000)
    b = moments.arithmetic_factor(0.7, prime_cutoff=20000)
    assert abs(a - b) <= 1e-8


def test_divergence_probe_shape(table_s1):
    probe = moments.divergence_probe(1, [1.40, 1.45, 1.49], table_s1)
    vals = [v for _, v in probe["rows"]]
    assert vals == sorted(vals)          # monotone growth toward the edge
    assert probe["log_slope"] > 0.5      # pole-type growth
    with pytest.raises(ValueError):
        moments.divergence_probe(1, [1.6], table_s1)
    with pytest.raises(ValueError):
        moments.divergence_probe(0, [0.4], table_s1)


def test_integral_branch_error_estimate(table_s1):
    res = moments.F_moment(1.0, 0.5, table_s1)
    assert res.quad_error <= 1e-10 * max(1.0, abs(res.real_value))
