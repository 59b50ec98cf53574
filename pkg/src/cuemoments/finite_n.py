"""Finite-N layer: Hankel moment determinants W_N(xi,s), their
log-derivatives u_N, the scaled quantities v_N(z;s) = u_N(z/N;s) - z/2,
finite-N joint-moment coefficients F_N(s,h), and small-N Weyl-integration
oracles.

Representations kept in triangulation:

  * W_N(xi,s) = N! det[ int_0^oo y^{j+k} (y+xi)^s y^s e^{-y} dy ], with the
    moment entry int = xi^{j+k+2s+1} Gamma(j+k+s+1) U(j+k+s+1, j+k+2s+2, xi)
    (U the confluent hypergeometric function of the second kind), assembled
    in log-space with diagonal equilibration.
  * the N x N determinant  JJ_N(t;s) = det[U(1-s-N, 2-2s-2N+j+k, 2t)],
    rebuilt from positive-parameter U entries through the two-parameter
    determinant transformation (mu = nu = (N+s)/2), with the direct entry
    evaluation kept as a cross-check; for integer s it collapses onto an
    s x s Hankel determinant of Laguerre polynomials.
  * the two are linked by
    (-1)^{N(N-1)/2} Gamma(s+N)^{-N} N! JJ_N(xi;s)
        = prod_{j=1}^N Gamma(s+j)^{-2} W_N(2 xi, s).

The finite-N characteristic function is phi_N(t) = E_N[e^{it Tr}] =
exp f_N(t) with f_N(t) = int_0^{2t} (u_N(x;s) - Nx/2) dx/x
= ln W_N(2t) - ln W_N(0) - Nt, and F_N(s,h) follows from the *same*
derivative/integral-branch machinery as the N = oo moments module, with the
prefactor replaced by the exact Selberg product
F_N(s,0) = prod_{j=1}^N Gamma(j) Gamma(2s+j) / Gamma(s+j)^2.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate as _si
from scipy import special as _sp

from . import specfun
from .charfn import _integrated_series, u_deriv_at
from .moments import MomentQuery, MomentResult, F_integral_branch
from .pseries import LogSeries

__all__ = [
    "HankelJob",
    "moment_entry",
    "w_hankel",
    "hyp_u_hankel",
    "laguerre_hankel",
    "v_finite_n",
    "selberg_product",
    "FiniteCharFnTable",
    "build_finite_charfn",
    "f_finite_n",
    "cue_weyl_quadrature",
]

_N_CAP_MOMENT = 64     # moment-Hankel path
_N_CAP_U = 12          # U-entry / characteristic-function path
_COND_LIMIT = 1e10     # relative determinant error ~ cond * eps > 1e-6
_SERIES_PMAX = 16.0


@dataclass
class HankelJob:
    """One factorized Hankel moment determinant W_N(xi,s)."""
    N: int
    s: float
    xi: float
    moment_matrix: np.ndarray = field(repr=False)  # equilibrated, diag = 1
    logdet: float
    logderiv: float          # u_N(xi;s) = xi d/dxi ln W_N
    cond_estimate: float


def _entry_ln(m: int, xi: float, s: float) -> float:
    """ln of int_0^oo y^m (y+xi)^s y^s e^{-y} dy for xi > 0."""
    a = m + s + 1.0
    b = m + 2.0 * s + 2.0
    return ((m + 2.0 * s + 1.0) * math.log(xi) + specfun.gammaln(a)
            + specfun.hyp_u_ln(a, b, xi))


def _entry_dxi_ln(m: int, xi: float, s: float) -> float:
    """ln |d/dxi entry| = ln |s| int y^m (y+xi)^{s-1} y^s e^{-y} dy."""
    a = m + s + 1.0
    b = m + 2.0 * s + 1.0
    return (math.log(abs(s)) + (m + 2.0 * s) * math.log(xi)
            + specfun.gammaln(a) + specfun.hyp_u_ln(a, b, xi))


def moment_entry(j: int, k: int, xi: float, s: float) -> float:
    """int_0^oo y^{j+k} (y+xi)^s y^s e^{-y} dy
    = xi^{j+k+2s+1} Gamma(j+k+s+1) U(j+k+s+1, j+k+2s+2, xi)."""
    if j + k < 0:
        raise ValueError("j+k must be nonnegative")
    if xi <= 0.0:
        raise ValueError(f"xi must be positive, got {xi}")
    return math.exp(_entry_ln(j + k, xi, s))


def _weight_nodes(xi: float, s: float, nj: int, nl: int):
    """Quadrature (nodes, weights) for int_0^oo f(y) (y+xi)^s y^s e^{-y} dy
    with f polynomial: Gauss-Jacobi on [0,1] absorbing the y^s endpoint
    factor, shifted Gauss-Laguerre on [1,oo)."""
    xj, wj = _sp.roots_jacobi(nj, 0.0, s)
    y1 = 0.5 * (xj + 1.0)
    w1 = 2.0 ** (-s - 1.0) * wj * (y1 + xi) ** s * np.exp(-y1)
    xl, wl = _sp.roots_laguerre(nl)
    y2 = 1.0 + xl
    w2 = math.exp(-1.0) * wl * (y2 + xi) ** s * y2 ** s
    return np.concatenate([y1, y2]), np.concatenate([w1, w2])


def _stieltjes_factorization(N: int, xi: float, s: float, nj: int, nl: int):
    """(log h_j, d/dxi log h_j) for j < N, with h_j the squared norms of the
    monic orthogonal polynomials of the weight (y+xi)^s y^s e^{-y}.

    W_N = N! prod h_j; the xi-derivative uses d/dxi omega = s omega/(y+xi)
    and orthogonality (d/dxi p_j has degree < j, so it drops out)."""
    y, w = _weight_nodes(xi, s, nj, nl)
    dw = s / (y + xi)
    p_prev = np.zeros_like(y)
    p = np.ones_like(y)
    log_h = np.empty(N)
    dlog_h = np.empty(N)
    h_prev = 1.0
    for j in range(N):
        h = float(np.sum(w * p * p))
        if h <= 0.0:
            raise RuntimeError(
                f"W_{N}({xi},{s}) norm h_{j} = {h:.3e} <= 0: quadrature "
                "resolution exhausted")
        log_h[j] = math.log(h)
        dlog_h[j] = float(np.sum(w * dw * p * p)) / h
        if j + 1 < N:
            a = float(np.sum(w * y * p * p)) / h
            b = h / h_prev if j else 0.0   # b_j = h_j/h_{j-1}, p_{-1} = 0
            p, p_prev = (y - a) * p - b * p_prev, p
            h_prev = h
    return log_h, dlog_h


def w_hankel(N: int, xi: float, s: float, *,
             allow_large: bool = False) -> HankelJob:
    """W_N(xi,s) = N! det[moment_entry(j,k)] through the orthogonal-
    polynomial factorization W_N = N! prod_j h_j (stable at large N where
    the raw Hankel matrix is numerically singular); logderiv is
    u_N(xi;s) = xi d/dxi ln W_N via the analytic weight derivative."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if xi <= 0.0:
        raise ValueError(f"xi must be positive, got {xi}")
    if N > _N_CAP_MOMENT:
        if not allow_large:
            raise ValueError(f"N={N} exceeds conditioning cap "
                             f"{_N_CAP_MOMENT}; pass allow_large=True")
        warnings.warn(f"N={N} beyond the conditioning cap "
                      f"{_N_CAP_MOMENT}: determinant accuracy unreliable")
    nj, nl = 90, 60 + 3 * N
    log_h, dlog_h = _stieltjes_factorization(N, xi, s, nj, nl)
    log_h2, dlog_h2 = _stieltjes_factorization(N, xi, s, nj + 40, nl + 80)
    logdet = float(specfun.gammaln(N + 1.0) + np.sum(log_h2))
    deriv = xi * float(np.sum(dlog_h2))
    err = abs(np.sum(log_h) - np.sum(log_h2)) \
        + xi * abs(np.sum(dlog_h) - np.sum(dlog_h2))
    if err > 1e-6 * max(1.0, abs(logdet)):
        raise RuntimeError(
            f"W_{N}({xi},{s}) determinant error estimate {err:.2e} "
            "above 1e-6: quadrature resolution exhausted")
    # the equilibrated classical matrix, kept for inspection/conditioning
    g = np.array([_entry_ln(m, xi, s) for m in range(2 * N - 1)])
    c = 0.5 * g[0::2][:N]
    jk = np.arange(N)[:, None] + np.arange(N)[None, :]
    Mt = np.exp(g[jk] - c[:, None] - c[None, :])
    cond = float(np.linalg.cond(Mt))
    if cond > 1e10:
        warnings.warn(f"W_{N}({xi},{s}): equilibrated Hankel condition "
                      f"estimate {cond:.2e}")
    return HankelJob(N=N, s=s, xi=xi, moment_matrix=Mt, logdet=logdet,
                     cond_estimate=cond, logderiv=deriv)


def _w_logdet_zero(N: int, s: float) -> float:
    """ln W_N(0,s) = ln N! + ln det[Gamma(j+k+2s+1)]."""
    g = np.array([float(specfun.gammaln(m + 2.0 * s + 1.0))
                  for m in range(2 * N - 1)])
    c = 0.5 * g[0::2][:N]
    jk = np.arange(N)[:, None] + np.arange(N)[None, :]
    sign, ld = np.linalg.slogdet(np.exp(g[jk] - c[:, None] - c[None, :]))
    if sign <= 0.0:
        raise RuntimeError("W_N(0,s) determinant lost positivity")
    return float(specfun.gammaln(N + 1.0) + 2.0 * np.sum(c) + ld)


# ---------------------------------------------------------------------------
# the N x N confluent-hypergeometric determinant JJ_N(t;s)
# ---------------------------------------------------------------------------


def hyp_u_hankel(N: int, t: float, s: float, method: str = "transform"
                 ) -> float:
    """JJ_N(t;s) = det[U(1-s-N, 2-2s-2N+j+k, 2t)]_{j,k=0}^{N-1}.

    method "transform": rebuilt from positive-parameter U through the
    determinant transformation with mu = nu = (N+s)/2,

        JJ_N = prod_{l=0}^{N-2} (1-s-N+l)^{N-1-l} * (2t)^{N(N+2s)}
               * det[U(N+s-j, 2N+2s-i-j, 2t)]_{i,j},

    evaluated in log-space.  method "direct": raw entries (cross-check)."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if N > _N_CAP_U:
        raise ValueError(f"N={N} exceeds U-entry cap {_N_CAP_U}")
    if t <= 0.0:
        raise ValueError(f"t must be positive, got {t}")
    if method == "direct":
        ii, jj = np.meshgrid(np.arange(N), np.arange(N), indexing="ij")
        M = _sp.hyperu(1.0 - s - N, 2.0 - 2.0 * s - 2.0 * N + ii + jj,
                       2.0 * t)
        sign, ld = np.linalg.slogdet(M)
        return float(sign * np.exp(ld))
    if method != "transform":
        raise ValueError(f"unknown method {method!r}")
    # prefactor prod_{l=0}^{N-2} (1-s-N+l)^{N-1-l}, each base negative
    log_pref = 0.0
    sign_pref = 1.0
    for ell in range(N - 1):
        base = 1.0 - s - N + ell
        log_pref += (N - 1 - ell) * math.log(abs(base))
        sign_pref *= math.copysign(1.0, base) ** (N - 1 - ell)
    log_pref += N * (N + 2.0 * s) * math.log(2.0 * t)
    le = np.empty((N, N))
    for i in range(N):
        for j in range(N):
            a = N + s - j
            b = 2.0 * N + 2.0 * s - i - j
            le[i, j] = specfun.gammaln(a) + specfun.hyp_u_ln(a, b, 2.0 * t)
        log_pref -= float(specfun.gammaln(N + s - i))
    r = le.max(axis=1, keepdims=True)
    cc = (le - r).max(axis=0, keepdims=True)
    sign, ld = np.linalg.slogdet(np.exp(le - r - cc))
    return float(sign_pref * sign
                 * math.exp(log_pref + float(r.sum() + cc.sum()) + ld))


def laguerre_hankel(N: int, t: float, s: int) -> float:
    """det[L^{(2s-1)}_{N+s-1-(j+k)}(-2t)]_{j,k=0}^{s-1} for integer s >= 1;
    Laguerre polynomials of negative degree are zero.  Satisfies
    (-1)^{N(N-1)/2} JJ_N(t;s) / Gamma(s+N)^N = (-1)^{s(s-1)/2} * this."""
    if not (isinstance(s, (int, np.integer)) and s >= 1):
        raise ValueError(f"laguerre_hankel needs integer s >= 1, got {s}")
    s = int(s)
    M = np.zeros((s, s))
    for j in range(s):
        for k in range(s):
            n = N + s - 1 - (j + k)
            if n >= 0:
                M[j, k] = specfun.laguerre(n, 2.0 * s - 1.0, -2.0 * t)
    return float(np.linalg.det(M))


def v_finite_n(z: float, N: int, s: float) -> float:
    """v_N(z;s) = u_N(z/N;s) - z/2 (exactly -z/2 at s = 0)."""
    if z <= 0.0:
        raise ValueError(f"z must be positive, got {z}")
    if s == 0.0:
        return -0.5 * z
    return w_hankel(N, z / N, s).logderiv - 0.5 * z


def selberg_product(N: int, s: float) -> float:
    """F_N(s,0) = prod_{j=1}^N Gamma(j) Gamma(2s+j) / Gamma(s+j)^2."""
    ln = 0.0
    for j in range(1, N + 1):
        ln += (specfun.gammaln(float(j)) + specfun.gammaln(2.0 * s + j)
               - 2.0 * specfun.gammaln(s + j))
    return math.exp(ln)


# ---------------------------------------------------------------------------
# small-xi series of W_N and the finite-N characteristic table
# ---------------------------------------------------------------------------


def _kummer_series(a: float, b: float, pmax: float) -> LogSeries:
    """Taylor series of M(a,b,xi) (denominator parameters never hit
    nonpositive integers on our call sites)."""
    out = LogSeries(pmax=pmax)
    term = 1.0
    k = 0
    while k <= pmax:
        out._add_term(float(k), 0, term)
        term *= (a + k) / ((b + k) * (k + 1.0))
        k += 1
        if term == 0.0:
            break
    return out


def _laguerre_series(n: int, alpha: float, pmax: float) -> LogSeries:
    """Taylor coefficients of L_n^{(alpha)}(xi) =
    sum_k (-1)^k/k! binom(n+alpha, n-k) xi^k (alpha may be a negative
    integer; the binomial is the falling-product form)."""
    out = LogSeries(pmax=pmax)
    for k in range(min(n, int(pmax)) + 1):
        binom = 1.0
        for i in range(1, n - k + 1):
            binom *= (alpha + k + i) / i
        out._add_term(float(k), 0, (-1.0) ** k / math.factorial(k) * binom)
    return out


def _entry_series(j: int, k: int, s: float, pmax: float) -> LogSeries:
    """Small-xi expansion of moment_entry(j,k,xi,s).

    Generic s (2s not an integer): the two Frobenius families
        Gamma(b-1) M(-s, 2-b, xi)
      + Gamma(a) Gamma(1-b)/Gamma(-s) xi^{2s+1+j+k} M(a, b, xi),
    a = j+k+s+1, b = j+k+2s+2.  Integer s: the entry is the polynomial
    Gamma(a) (-1)^s s! L_s^{(1-b)}(xi)."""
    m = j + k
    a = m + s + 1.0
    b = m + 2.0 * s + 2.0
    if float(s).is_integer() and s >= 0:
        si = int(s)
        ser = _laguerre_series(si, 1.0 - b, pmax)
        return ser.scale(specfun.gamma(a) * (-1.0) ** si
                         * math.factorial(si))
    if (2.0 * s).is_integer():
        # half-odd s: b is an integer, the two Frobenius families resonate
        # and the expansion carries ln xi (DLMF-form integer-b expansion of
        # U(a, n+1, xi) with n = m+2s+1, a-n = -s non-integer)
        n = int(round(m + 2.0 * s + 1.0))
        out = LogSeries(pmax=pmax)
        coef = ((-1.0) ** (n + 1) * specfun.gamma(a)
                / (math.factorial(n) * specfun.gamma(-s)))
        term = 1.0
        k = 0
        while n + k <= pmax:
            dk = (specfun.digamma(a + k) - specfun.digamma(1.0 + k)
                  - specfun.digamma(n + k + 1.0))
            out._add_term(float(n + k), 1, coef * term)
            out._add_term(float(n + k), 0, coef * term * dk)
            term *= (a + k) / ((k + 1.0) * (n + 1.0 + k))
            k += 1
        poly = 1.0
        for k in range(n):
            if k <= pmax:
                out._add_term(float(k), 0, math.factorial(n - 1) * poly)
            if k < n - 1:
                poly *= (-s + k) / ((k + 1.0) * (1.0 - n + k))
        return out
    smooth = _kummer_series(-s, 2.0 - b, pmax).scale(specfun.gamma(b - 1.0))
    coef = (specfun.gamma(a) * specfun.gamma(1.0 - b) / specfun.gamma(-s))
    frac = _kummer_series(a, b, pmax - (2.0 * s + 1.0 + m)) \
        .shift(2.0 * s + 1.0 + m).scale(coef)
    return smooth + frac


def _series_log(S: LogSeries) -> LogSeries:
    """ln of a series with positive constant term: ln c0 + Mercator in
    g = S/c0 - 1."""
    c0 = S.coeff(0.0)
    if c0 <= 0.0:
        raise ValueError("series log needs a positive constant term")
    g = S.scale(1.0 / c0)
    g._add_term(0.0, 0, -1.0)
    pmin = min((p for (p, _l), c in g.terms.items() if c != 0.0),
               default=math.inf)
    out = LogSeries.monomial(math.log(c0), 0.0, pmax=S.pmax)
    if not math.isfinite(pmin):
        return out
    kmax = int(S.pmax / pmin) + 1
    power = LogSeries.monomial(1.0, 0.0, pmax=S.pmax)
    for kk in range(1, kmax + 1):
        power = power * g
        out = out + power.scale((-1.0) ** (kk + 1) / kk)
    return out


def _series_inv(S: LogSeries) -> LogSeries:
    """1/S for a series with nonzero constant term (Neumann expansion)."""
    c0 = S.coeff(0.0)
    if c0 == 0.0:
        raise ZeroDivisionError("series inverse needs a constant term")
    g = S.scale(1.0 / c0)
    g._add_term(0.0, 0, -1.0)
    pmin = min((p for (p, _l), c in g.terms.items() if c != 0.0),
               default=math.inf)
    out = LogSeries.monomial(1.0 / c0, 0.0, pmax=S.pmax)
    if not math.isfinite(pmin):
        return out
    kmax = int(S.pmax / pmin) + 1
    power = LogSeries.monomial(1.0, 0.0, pmax=S.pmax)
    for kk in range(1, kmax + 1):
        power = power * g
        out = out + power.scale((-1.0) ** kk / c0)
    return out


def _lnW_series(N: int, s: float, pmax: float = _SERIES_PMAX) -> LogSeries:
    """Small-xi series of ln W_N(xi,s) - ln W_N(0,s): Gaussian elimination
    of the series-valued moment matrix (equilibrated by the xi = 0 diagonal
    scale, which only shifts the dropped constant); ln det = sum of pivot
    logs."""
    gam = [0.5 * float(specfun.gammaln(2.0 * j + 2.0 * s + 1.0))
           for j in range(N)]
    A = [[_entry_series(j, k, s, pmax).scale(math.exp(-gam[j] - gam[k]))
          for k in range(N)] for j in range(N)]
    out = LogSeries(pmax=pmax)
    for p in range(N):
        piv = A[p][p]
        out = out + _series_log(piv)
        if p == N - 1:
            break
        inv = _series_inv(piv)
        for i in range(p + 1, N):
            factor = A[i][p] * inv
            for kk in range(p + 1, N):
                A[i][kk] = A[i][kk] - factor * A[p][kk]
    c0 = out.coeff(0.0)
    out._add_term(0.0, 0, -c0)      # drop the constant: series of ln ratio
    return out


# --- local jets of ln W_N via truncated-polynomial elimination -------------


def _entry_deriv_ln(m: int, r: int, xi: float, s: float):
    """(sign, ln|.|) of d^r/dxi^r moment entry = s(s-1)...(s-r+1)
    xi^{m+2s+1-r} Gamma(m+s+1) U(m+s+1, m+2s+2-r, xi)."""
    fall = 1.0
    for i in range(r):
        fall *= (s - i)
    if fall == 0.0:
        return 0.0, -math.inf
    a = m + s + 1.0
    b = m + 2.0 * s + 2.0 - r
    ln = (math.log(abs(fall)) + (m + 2.0 * s + 1.0 - r) * math.log(xi)
          + specfun.gammaln(a) + specfun.hyp_u_ln(a, b, xi))
    return math.copysign(1.0, fall), ln


def _poly_mul(a: np.ndarray, b: np.ndarray, K: int) -> np.ndarray:
    return np.convolve(a, b)[: K + 1]


def _poly_inv(a: np.ndarray, K: int) -> np.ndarray:
    """1/a in R[eps]/eps^{K+1}, a[0] != 0."""
    out = np.zeros(K + 1)
    out[0] = 1.0 / a[0]
    for r in range(1, K + 1):
        out[r] = -np.dot(a[1: r + 1], out[r - 1:: -1]) / a[0]
    return out


def _poly_log(a: np.ndarray, K: int) -> np.ndarray:
    """ln a in R[eps]/eps^{K+1}, a[0] > 0: (ln a)' = a'/a integrated."""
    inv = _poly_inv(a, K)
    da = a[1:] * np.arange(1, K + 1)
    dl = np.convolve(da, inv)[:K]
    out = np.zeros(K + 1)
    out[0] = math.log(a[0])
    out[1:] = dl / np.arange(1, K + 1)
    return out


def _lnW_jets(N: int, s: float, xi: float, K: int) -> np.ndarray:
    """[L'(xi), ..., L^(K)(xi)] for L = ln W_N, via elimination of the
    entry-wise Taylor matrix over R[eps]/eps^{K+1}."""
    lead = np.array([_entry_ln(m, xi, s) for m in range(2 * N - 1)])
    c = 0.5 * lead[0::2][:N]
    A = np.empty((N, N, K + 1))
    for j in range(N):
        for k in range(N):
            m = j + k
            scale = c[j] + c[k]
            A[j, k, 0] = math.exp(lead[m] - scale)
            fact = 1.0
            for r in range(1, K + 1):
                fact *= r
                sg, ln = _entry_deriv_ln(m, r, xi, s)
                A[j, k, r] = sg * math.exp(ln - scale) / fact \
                    if math.isfinite(ln) else 0.0
    acc = np.zeros(K + 1)
    for p in range(N):
        piv = A[p, p]
        acc += _poly_log(piv, K)
        if p == N - 1:
            break
        inv = _poly_inv(piv, K)
        for i in range(p + 1, N):
            factor = _poly_mul(A[i, p], inv, K)
            for kk in range(p + 1, N):
                A[i, kk] -= _poly_mul(factor, A[p, kk], K)
    fact = 1.0
    out = np.empty(K)
    for r in range(1, K + 1):
        fact *= r
        out[r - 1] = acc[r] * fact
    return out


class _FiniteJet:
    __slots__ = ("v", "dv")

    def __init__(self, v, dv):
        self.v = v
        self.dv = dv


class _FiniteSol:
    """Jet provider with the same interface slice as the Painleve solution:
    jet(t, k) returns the value and t-derivatives of
    vtilde(t) = u_N(t;s) - N t/2, the numerator of f'(t) = vtilde/t for the
    charfn-convention u(t) = phi_N(t/2)."""

    def __init__(self, N: int, s: float):
        self.N = N
        self.s = s

    def jet(self, t: float, k: int) -> _FiniteJet:
        L = _lnW_jets(self.N, self.s, t, k + 2)    # L', ..., L^(k+2)
        uj = [t * L[r] + r * L[r - 1] if r > 0 else t * L[0]
              for r in range(k + 1)]               # u_N^(r)(t)
        v = uj[0] - 0.5 * self.N * t
        dv = [uj[r] - (0.5 * self.N if r == 1 else 0.0)
              for r in range(1, k + 1)]
        return _FiniteJet(v, dv)


@dataclass
class FiniteCharFnTable:
    """Finite-N analog of the charfn table; duck-typed for the shared
    moments machinery (u_at, u_series, sol.jet, u_tail_bound)."""
    s: float
    N: int
    J: int
    T_end: float
    u_series: LogSeries = field(repr=False)
    sol: _FiniteSol = field(repr=False)
    lnW0: float
    tail_C: float

    def f_at(self, t):
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        t = np.atleast_1d(t)
        out = np.empty(t.shape)
        for i, ti in enumerate(t.ravel()):
            if ti <= 0.0:
                out.flat[i] = 0.0
            else:
                out.flat[i] = (w_hankel(self.N, ti, self.s).logdet
                               - self.lnW0 - 0.5 * self.N * ti) \
                    if self.s != 0.0 else -0.5 * self.N * ti
        return float(out[0]) if scalar else out

    def u_at(self, t):
        return np.exp(self.f_at(t))

    def u_tail_bound(self, t: float) -> float:
        return (self.tail_C * t ** (self.N * self.s)
                * math.exp(-0.5 * self.N * t))


_FINITE_TABLE_CACHE: dict = {}


def build_finite_charfn(N: int, s: float, J: int = 6) -> FiniteCharFnTable:
    """Characteristic-function table for phi_N = exp f_N."""
    if N > _N_CAP_U:
        raise ValueError(f"N={N} exceeds U-entry cap {_N_CAP_U}")
    key = (N, float(s), J)
    if key in _FINITE_TABLE_CACHE:
        return _FINITE_TABLE_CACHE[key]
    # small-t series of u(t) = phi_N(t/2) = exp[ln W_N(t) - ln W_N(0)
    # - N t/2]: the integrand numerator is vtilde(t) = u_N(t) - N t/2
    lnw = _lnW_series(N, s)
    vt = lnw.deriv().shift(1.0)                  # u_N = t d/dt ln W_N
    vt._add_term(1.0, 0, -0.5 * N)               # - N t/2
    u_series = _integrated_series(vt).exp()

    lnW0 = _w_logdet_zero(N, s) if s != 0.0 else 0.0
    sol = _FiniteSol(N, s)
    table = FiniteCharFnTable(s=s, N=N, J=J, T_end=1.0, u_series=u_series,
                              sol=sol, lnW0=lnW0, tail_C=1.0)
    # T_end: where f drops below ln(1e-16); model -Nt/2 + Ns ln t + C
    T = 80.0 / N + 8.0 * max(0.0, s)
    while table.f_at(T) > math.log(1e-16):
        T *= 1.5
        if T > 1e4:
            raise RuntimeError("finite-N tail does not decay")
    table.T_end = T
    table.tail_C = math.exp(float(table.f_at(T)) + 0.5 * N * T
                            - N * s * math.log(T))
    _FINITE_TABLE_CACHE[key] = table
    return table


def f_finite_n(N: int, s: float, h: complex,
               method: str = "auto") -> MomentResult:
    """F_N(s,h) for -1/2 < Re(h) < s + 1/2, N <= 12.

    h = 0 returns the exact Selberg product; integer h uses the derivative
    branch on phi_N; other h shares the integral-branch machinery of the
    moments module with the finite-N prefactor."""
    if N > _N_CAP_U:
        raise ValueError(f"N={N} exceeds cap {_N_CAP_U} for F_N")
    h = complex(h)
    pref = selberg_product(N, s)
    is_int = h.imag == 0.0 and h.real >= 0 and h.real.is_integer()
    if is_int and int(h.real) == 0:
        return MomentResult(complex(pref), "exact-product", 0.0, pref)
    table = build_finite_charfn(N, s)
    if is_int:
        hi = int(h.real)
        if hi >= s + 0.5:
            raise ValueError(f"h={hi} out of range h < s+1/2 = {s + 0.5}")
        val = pref * (-1.0) ** hi * u_deriv_at(table, 0.0, 2 * hi)
        return MomentResult(complex(val), "derivative", 0.0, pref)
    q = MomentQuery(s=s, h=h)
    res = F_integral_branch(q, table)
    scale = pref / res.prefactor
    return MomentResult(res.value * scale, res.branch,
                        res.quad_error * scale, pref)


# ---------------------------------------------------------------------------
# direct Weyl-integration oracle, N <= 2
# ---------------------------------------------------------------------------


def cue_weyl_quadrature(N: int, s: float, h: float) -> float:
    """F_N(s,h) = F_N(s,0) 2^{-2h} E_N[|sum x_j|^{2h}] by direct quadrature
    of the Hua-Pickrell-type eigenvalue density on R^N, x = tan(theta)."""
    if N not in (1, 2):
        raise ValueError(f"direct Weyl quadrature is an oracle for N <= 2, "
                         f"got N={N}")
    pref = selberg_product(N, s)
    if h == 0.0:
        return pref
    if N == 1:
        # weight (1+x^2)^{-s-1} dx = cos^{2s} dtheta
        def w(th):
            return math.cos(th) ** (2.0 * s)

        def num(th):
            return w(th) * abs(math.tan(th)) ** (2.0 * h)

        lo, hi = -0.5 * math.pi, 0.5 * math.pi
        nv, _ = _si.quad(num, lo, hi, epsabs=1e-13, epsrel=1e-12, limit=400)
        dv, _ = _si.quad(w, lo, hi, epsabs=1e-13, epsrel=1e-12, limit=400)
        return pref * 2.0 ** (-2.0 * h) * nv / dv
    # N = 2: weight prod (1+x_j^2)^{-s-2} (x_1-x_2)^2, x_j = tan(theta_j)
    c = 2.0 * s + 2.0

    def w2(t1, t2):
        return (math.cos(t1) ** c * math.cos(t2) ** c
                * (math.tan(t1) - math.tan(t2)) ** 2)

    def num2(t1, t2):
        tr = math.tan(t1) + math.tan(t2)
        return w2(t1, t2) * abs(tr) ** (2.0 * h)

    lo, hi = -0.5 * math.pi, 0.5 * math.pi
    nv, _ = _si.dblquad(num2, lo, hi, lo, hi, epsabs=1e-11, epsrel=1e-10)
    dv, _ = _si.dblquad(w2, lo, hi, lo, hi, epsabs=1e-11, epsrel=1e-10)
    return pref * 2.0 ** (-2.0 * h) * nv / dv
