"""Leading-order joint-moment coefficients F(s,h), the regularizing kernel
K_h^eps, Hua-Pickrell absolute moments, the arithmetic factor a_s, and the
h -> m + 1/2 divergence probe.

Production formulas (u(t) = exp int_0^t v(x;s) dx/x from the charfn module,
pref = G^2(1+s)/G(1+2s)):

    h in Z>=0:   F(s,h) = pref * (-1)^h u^(2h)(0)
    otherwise:   F(s,h) = pref * (-2/pi) sin(pi h) Gamma(2h-2M)
                          * int_0^oo u^(2M+1)(t) t^(2M-2h) dt,
                 with M in Z>=0 such that Re(h) in (M, M+1), or M = -1/2
                 for Re(h) in (-1/2, 0).

Validation path (kernel form):  F(s,h) = pref * 2^(1-2h)
    * lim_{eps->0} int_0^oo K_{2h}^eps(t) u(2t) dt, evaluated at moderate
    eps with Richardson extrapolation; closed-form checks at s=0 follow from
    u(t) = e^{-t/2}:  F(0,h) = 2^{-2h}/cos(pi h).

The Hua-Pickrell moment is E|X(s)|^{2h} = 2^{2h} F(s,h)/pref.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import special as _sp

from . import specfun
from .charfn import CharFnTable, u_deriv_at

__all__ = [
    "MomentQuery",
    "MomentResult",
    "kernel_K",
    "F_derivative_branch",
    "F_integral_branch",
    "F_kernel_eps",
    "F_moment",
    "hua_pickrell_moment",
    "arithmetic_factor",
    "divergence_probe",
]

_H_BOUNDARY_MARGIN = 1e-6
_H_BOUNDARY_WARN = 1e-3
_IM_H_CAP = 1.0
_SERIES_SPLIT = 0.1

_GL_NODES16, _GL_WEIGHTS16 = np.polynomial.legendre.leggauss(16)


def _branch_index(h: complex) -> float:
    """M with Re(h) in (M, M+1), or -1/2 for Re(h) in (-1/2, 0)."""
    re = h.real
    if -0.5 < re < 0.0:
        return -0.5
    m = math.floor(re)
    if abs(re - round(re)) < 1e-12 and abs(h.imag) > 0:
        raise ValueError(
            f"h={h} lies on an excluded line Re(h) in Z with Im(h) != 0")
    return float(m)


@dataclass(frozen=True)
class MomentQuery:
    """Validated (s, h, branch) triple for F(s,h)."""
    s: float
    h: complex
    M: float = math.nan  # branch index, or nan meaning "derivative branch"

    def __post_init__(self):
        s, h = self.s, complex(self.h)
        if s <= -0.5:
            raise ValueError(f"s must exceed -1/2, got {s}")
        if not -0.5 < h.real:
            raise ValueError(f"Re(h) must exceed -1/2, got {h}")
        if h.real > s + 0.5 - _H_BOUNDARY_MARGIN:
            raise ValueError(
                f"Re(h)={h.real} too close to the divergence boundary "
                f"s+1/2={s+0.5} (margin {_H_BOUNDARY_MARGIN})")
        if abs(h.imag) > _IM_H_CAP:
            raise ValueError(f"|Im h| capped at {_IM_H_CAP}, got {h.imag}")
        if s + 0.5 - h.real < _H_BOUNDARY_WARN:
            warnings.warn(
                f"F(s,h) nearly divergent: s+1/2-Re(h) = {s+0.5-h.real:.2e}")
        is_int = h.imag == 0.0 and h.real >= 0 and h.real.is_integer()
        M = math.nan if is_int else _branch_index(h)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "M", M)

    @property
    def derivative_branch(self) -> bool:
        return math.isnan(self.M)


@dataclass
class MomentResult:
    value: complex
    branch: str
    quad_error: float
    prefactor: float

    @property
    def real_value(self) -> float:
        if abs(self.value.imag) > 1e-8 * max(1.0, abs(self.value)):
            warnings.warn(
                f"imaginary part {self.value.imag:.2e} not negligible")
        return self.value.real


def kernel_K(h: complex, eps: float, t: float) -> complex:
    """K_h^eps(t) = (Gamma(1+h)/2pi) [(eps+it)^{-h-1} + (eps-it)^{-h-1}],
    principal branches; well-defined for Re(h) > -1, eps > 0."""
    h = complex(h)
    if h.real <= -1.0:
        raise ValueError(f"kernel_K requires Re(h) > -1, got {h}")
    if eps <= 0.0:
        raise ValueError(f"kernel_K requires eps > 0, got {eps}")
    g = complex(_sp.gamma(h + 1.0))
    return g / (2.0 * math.pi) * ((eps + 1j * t) ** (-h - 1.0)
                                  + (eps - 1j * t) ** (-h - 1.0))


def _barnes_prefactor(s: float) -> float:
    return math.exp(specfun.barnes_prefactor_ln(s))


# ---------------------------------------------------------------------------
# Theorem-branch evaluation
# ---------------------------------------------------------------------------


def F_derivative_branch(s: float, h: int, table: CharFnTable) -> MomentResult:
    """F(s,h) for integer h >= 0 with h < s + 1/2."""
    if h != int(h) or h < 0:
        raise ValueError(f"derivative branch needs integer h >= 0, got {h}")
    h = int(h)
    if h >= s + 0.5:
        raise ValueError(f"h={h} out of range h < s+1/2 = {s+0.5}")
    pref = _barnes_prefactor(s)
    val = pref * (-1.0) ** h * u_deriv_at(table, 0.0, 2 * h)
    return MomentResult(complex(val), "derivative", 0.0, pref)


def _series_integral(table: CharFnTable, order: int, expo: complex,
                     delta: float) -> complex:
    """int_0^delta u^(order)(t) t^expo dt from the small-t series:
    term c t^p ln^l t integrates against t^expo to
    delta^{q+1} sum_j (-1)^j l!/(l-j)! ln^{l-j}(delta) / (q+1)^{j+1},
    q = p + expo (Re q > -1 guaranteed by the branch constraints)."""
    ser = table.u_series
    for _ in range(order):
        ser = ser.deriv()
    ld = math.log(delta)
    total = 0.0 + 0.0j
    c_max = max((abs(c) for c in ser.terms.values()), default=0.0)
    for (p, l), c in ser.terms.items():
        q = p + expo
        if q.real <= -1.0 + 1e-12:
            # slots the series Newton left at roundoff noise are not part of
            # the solution; genuinely non-integrable mass is an error
            if abs(c) <= 1e-11 * c_max:
                continue
            raise ValueError(f"non-integrable exponent {q} at origin")
        acc = 0.0 + 0.0j
        fact = 1.0
        for j in range(l + 1):
            if j > 0:
                fact *= (l - j + 1)
            acc += (-1.0) ** j * fact * ld ** (l - j) / (q + 1.0) ** (j + 1)
        total += c * cmath.exp((q + 1.0) * ld) * acc
    return total


def _panel_edges(delta: float, T: float) -> np.ndarray:
    """Quadrature panel edges: logarithmic on [delta, 1], width-2 beyond."""
    lo = np.geomspace(delta, 1.0, 11)
    hi = np.arange(1.0, T, 2.0)[1:]
    return np.concatenate([lo, hi, [T]])


def F_integral_branch(q: MomentQuery, table: CharFnTable) -> MomentResult:
    """F(s,h) for non-integer h via the integral branch."""
    if q.derivative_branch:
        raise ValueError("integer h belongs to the derivative branch")
    s, h, M = q.s, q.h, q.M
    n_der = int(round(2 * M + 1))          # 0 for M = -1/2
    expo = 2.0 * M - 2.0 * h               # integrand power of t
    pref = _barnes_prefactor(s)

    delta = _SERIES_SPLIT
    total = _series_integral(table, n_der, expo, delta)

    edges = _panel_edges(delta, table.T_end)
    if n_der == 0:
        for a, b in zip(edges[:-1], edges[1:]):
            t = 0.5 * (b - a) * (_GL_NODES16 + 1.0) + a
            w = 0.5 * (b - a) * _GL_WEIGHTS16
            total += np.sum(w * table.u_at(t) * np.exp(expo * np.log(t)))
    else:
        for a, b in zip(edges[:-1], edges[1:]):
            t = 0.5 * (b - a) * (_GL_NODES16 + 1.0) + a
            w = 0.5 * (b - a) * _GL_WEIGHTS16
            uv = np.array([u_deriv_at(table, float(ti), n_der) for ti in t])
            total += np.sum(w * uv * np.exp(expo * np.log(t)))

    # truncation bound: |u^(n)| ~ u/2^n on the tail, integral of e^{-t/2}
    T = table.T_end
    tail = 2.0 * table.u_tail_bound(T) * T ** expo.real
    coef = (-2.0 / math.pi) * cmath.sin(math.pi * h) \
        * complex(_sp.gamma(2.0 * h - 2.0 * M))
    val = pref * coef * total
    return MomentResult(val, "integral", abs(pref * coef) * tail, pref)


def F_moment(s: float, h: complex, table: CharFnTable) -> MomentResult:
    """Dispatch F(s,h) to the appropriate Theorem branch."""
    q = MomentQuery(s=s, h=h)
    if q.derivative_branch:
        return F_derivative_branch(s, int(q.h.real), table)
    return F_integral_branch(q, table)


# ---------------------------------------------------------------------------
# kernel-eps validation path
# ---------------------------------------------------------------------------


def _kernel_integral(h: complex, eps: float, table: CharFnTable) -> complex:
    """int_0^oo K_{2h}^eps(t) u(2t) dt by panels graded to the eps-scale
    variation of the kernel."""
    T = table.T_end / 2.0
    edges = np.concatenate([
        np.linspace(0.0, 10.0 * eps, 21),
        np.geomspace(10.0 * eps, 1.0, 15)[1:],
        np.arange(2.0, T, 1.0),
        [T],
    ])
    total = 0.0 + 0.0j
    for a, b in zip(edges[:-1], edges[1:]):
        t = 0.5 * (b - a) * (_GL_NODES16 + 1.0) + a
        w = 0.5 * (b - a) * _GL_WEIGHTS16
        kv = np.array([kernel_K(2.0 * h, eps, float(ti)) for ti in t])
        total += np.sum(w * kv * table.u_at(2.0 * t))
    return total


def F_kernel_eps(s: float, h: complex, table: CharFnTable,
                 eps_list=(0.02, 0.01, 0.005)) -> MomentResult:
    """F(s,h) via the kernel representation with Richardson extrapolation
    eps -> 0 (error model c1*eps + c2*eps^2 over a halving ladder)."""
    h = complex(h)
    pref = _barnes_prefactor(s)
    scale = pref * 2.0 ** complex(1.0 - 2.0 * h)
    vals = [scale * _kernel_integral(h, e, table) for e in eps_list]
    r1 = [2.0 * vals[i + 1] - vals[i] for i in range(len(vals) - 1)]
    if len(r1) >= 2:
        val = (4.0 * r1[-1] - r1[-2]) / 3.0
        err = abs(r1[-1] - r1[-2])
    else:
        val = r1[-1]
        err = abs(vals[-1] - vals[-2])
    return MomentResult(val, "kernel-eps", err, pref)


# ---------------------------------------------------------------------------
# Hua-Pickrell moments, arithmetic factor, divergence probe
# ---------------------------------------------------------------------------


def hua_pickrell_moment(s: float, h: complex, table: CharFnTable) -> float:
    """E|X(s)|^{2h} = 2^{2h} F(s,h) / pref."""
    res = F_moment(s, h, table)
    val = 2.0 ** complex(2.0 * complex(h)) * res.value / res.prefactor
    return val.real if complex(h).imag == 0.0 else val


def _primes_below(n: int) -> np.ndarray:
    sieve = np.ones(n, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(n ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p:: p] = False
    return np.nonzero(sieve)[0]


def _mobius(n: int) -> int:
    out, m = 1, n
    p = 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            out = -out
        p += 1
    if m > 1:
        out = -out
    return out


def _prime_zeta(r: float, kmax: int = 60) -> float:
    """P(r) = sum_p p^{-r} = sum_k mu(k)/k * ln zeta(rk), r > 1."""
    total = 0.0
    for k in range(1, kmax + 1):
        mu = _mobius(k)
        if mu == 0:
            continue
        z = float(_sp.zeta(r * k, 1.0))
        total += mu / k * math.log(z)
    return total


def arithmetic_factor(s: float, prime_cutoff: int = 10000,
                      mode_tail: bool = True) -> float:
    """a_s = prod_p (1-1/p)^{s^2} sum_m (Gamma(m+s)/(Gamma(m+1)Gamma(s)))^2
    p^{-m}.

    The per-prime log-factor decays like C(s)/p^2 + D(s)/p^3; with mode_tail
    the (C, D) pair is fitted on the largest primes and the beyond-cutoff
    remainder is summed exactly against prime-zeta tails, leaving a residual
    O(sum_{p>P} p^{-4}); without it the value is the bare truncation.  A
    cutoff error is raised when the estimated remaining error exceeds 1e-8."""
    if s == 0.0:
        return 1.0
    primes = _primes_below(prime_cutoff)
    log_total = 0.0
    lf_hi: list = []   # (p, lf) on the top decade, for the tail fit
    p_fit = float(primes[-1]) / 10.0
    for p in primes:
        p = float(p)
        # sum_m coeff_m p^{-m} with coeff_m = (Gamma(m+s)/(m! Gamma(s)))^2,
        # built by the ratio recurrence coeff_{m+1}/coeff_m = ((m+s)/(m+1))^2
        term = 1.0
        acc = 1.0
        m = 0
        while True:
            term *= ((m + s) / (m + 1.0)) ** 2 / p
            acc += term
            m += 1
            if abs(term) < 1e-17 * acc or m > 200:
                break
        lf = s * s * math.log1p(-1.0 / p) + math.log(acc)
        log_total += lf
        if p >= p_fit:
            lf_hi.append((p, lf))
    P = float(primes[-1])
    pp = np.array([p for p, _ in lf_hi])
    yy = np.array([lf for _, lf in lf_hi])
    A = np.column_stack([pp ** -2.0, pp ** -3.0])
    (c2, c3), *_ = np.linalg.lstsq(A, yy, rcond=None)
    resid = float(np.max(np.abs(yy - A @ [c2, c3]) * pp ** 4.0)) \
        if len(lf_hi) else 0.0
    # exact prime-zeta tails beyond the cutoff
    all_p = primes.astype(float)
    s2_tail = _prime_zeta(2.0) - float(np.sum(all_p ** -2.0))
    s3_tail = _prime_zeta(3.0) - float(np.sum(all_p ** -3.0))
    s4_tail = _prime_zeta(4.0) - float(np.sum(all_p ** -4.0))
    correction = c2 * s2_tail + c3 * s3_tail
    err = abs(resid) * s4_tail + 1e-14 * abs(log_total)
    if mode_tail:
        log_total += correction
    else:
        err += abs(correction)
    if err > 1e-8:
        raise RuntimeError(
            f"arithmetic factor cutoff error {err:.2e} exceeds 1e-8; "
            "raise prime_cutoff")
    return math.exp(log_total)


def divergence_probe(m: int, h_list, table: CharFnTable):
    """F(m,h) for h approaching m + 1/2 from below, with a fitted log-slope
    against -ln(m + 1/2 - h).  Reports growth only; asserts nothing about
    the underlying open question."""
    if m < 1:
        raise ValueError(f"m must be a positive integer, got {m}")
    h_list = [float(h) for h in h_list]
    if not all(m < h < m + 0.5 for h in h_list):
        raise ValueError(f"h_list must lie in ({m}, {m + 0.5})")
    rows = []
    for h in h_list:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            val = F_moment(float(m), h, table).real_value
        rows.append((h, val))
    x = np.array([-math.log(m + 0.5 - h) for h, _ in rows])
    y = np.log(np.abs([v for _, v in rows]))
    slope = float(np.polyfit(x, y, 1)[0]) if len(rows) >= 2 else math.nan
    return {"rows": rows, "log_slope": slope}
