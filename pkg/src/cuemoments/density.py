"""Hua-Pickrell density rho^(s)(x) by Fourier inversion of the
characteristic function, its absolute moments, and the correlation-kernel
evaluator of the underlying determinantal process.

The characteristic function of X(s) is phi(t) = u(2t) with u from the
charfn module (even in t), so

    rho(x) = (1/pi) int_0^oo cos(x t) u(2t) dt,

a manifestly even, real construction.  At s = 0 this is the standard Cauchy
density 1/(pi (1 + x^2)).

Pointwise values use cosine panels capped at a quarter-period so a 16-point
Gauss rule resolves the oscillation; truncation at T rides on the
exponential decay of u.  Mass and absolute moments split at |x| = X: inside,
quadrature over x = tan(theta); outside, the exact large-x expansion

    rho(x) ~ (1/pi) sum c_lam Gamma(lam+1) cos(pi(lam+1)/2) x^{-lam-1}

summed over the *non-smooth* small-t terms c_lam t^lam ln^j t of the even
extension of phi (odd or fractional exponents, and any log term; the first
is lam = 2s+1 by the odd-coefficient gap structure).  Smooth even terms
contribute beyond all orders because phi decays exponentially.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import specfun
from .charfn import CharFnTable, build_charfn

__all__ = ["DensityGrid", "density_eval", "density_moment", "hp_kernel"]

_GL_NODES16, _GL_WEIGHTS16 = np.polynomial.legendre.leggauss(16)
_X_SPLIT = 30.0


@dataclass
class DensityGrid:
    s: float
    x_grid: np.ndarray         # symmetric about 0
    rho: np.ndarray
    mass_defect: float
    min_value: float
    table: CharFnTable = field(repr=False)


def _rho_single(table: CharFnTable, x: float) -> float:
    """(1/pi) int_0^T cos(x t) u(2t) dt with quarter-period panels."""
    T = table.T_end / 2.0
    ax = abs(x)
    width = 2.0 if ax < 0.5 else min(2.0, math.pi / (2.0 * ax))
    n_panels = int(math.ceil(T / width))
    edges = np.linspace(0.0, T, n_panels + 1)
    # u(2t) has a t^{2s+1} kink at 0 (sub-quadratic for s < 1/2), so the
    # first panel is subdivided geometrically toward the origin
    first = edges[1] * 0.25 ** np.arange(25, -1, -1)
    edges = np.concatenate([[0.0], first, edges[2:]])
    lo, hi = edges[:-1, None], edges[1:, None]
    half = 0.5 * (hi - lo)
    t = lo + half * (_GL_NODES16[None, :] + 1.0)
    w = half * _GL_WEIGHTS16[None, :]
    vals = np.cos(x * t) * table.u_at(2.0 * t.ravel()).reshape(t.shape)
    return float(np.sum(w * vals)) / math.pi


# ---------------------------------------------------------------------------
# large-x tail from the non-smooth small-t structure of phi
# ---------------------------------------------------------------------------


def _phi_nonsmooth_terms(table: CharFnTable):
    """Non-smooth terms (lam, j, coeff) of phi(t) = u(2t) around t = 0:
    coeff * t^lam * ln^j t with lam not an even integer, or j >= 1.
    Roundoff-noise slots of the series Newton are dropped."""
    out = []
    c_max = max((abs(c) for c in table.u_series.terms.values()), default=0.0)
    for (p, l), c in table.u_series.terms.items():
        if abs(c) <= 1e-11 * c_max:
            continue
        c2 = c * 2.0 ** p        # u(2t): t^p picks up 2^p
        for j in range(l + 1):   # (ln 2t)^l = sum_j C(l,j) ln^j t (ln 2)^(l-j)
            coef = c2 * math.comb(l, j) * math.log(2.0) ** (l - j)
            even = abs(p / 2.0 - round(p / 2.0)) < 1e-9
            if j == 0 and even:
                continue         # smooth even part: no algebraic tail
            out.append((p, j, coef))
    return out


def _cos_transform_B(lam: float, order: int) -> float:
    """order-th lambda-derivative of B(lam) = Gamma(lam+1) cos(pi(lam+1)/2)
    (the cosine-transform amplitude of t^lam), by central differences."""
    def B(x: float) -> float:
        return specfun.gamma(x + 1.0) * math.cos(0.5 * math.pi * (x + 1.0))
    if order == 0:
        return B(lam)
    h = 1e-4
    if order == 1:
        return (B(lam + h) - B(lam - h)) / (2.0 * h)
    if order == 2:
        return (B(lam + h) - 2.0 * B(lam) + B(lam - h)) / h ** 2
    raise ValueError("tail log powers beyond 2 not supported")


def _power_log_tail(a: float, m: int, X: float) -> float:
    """int_X^oo x^{-a-1} ln^m x dx for a > 0:
    X^{-a} sum_i m!/(m-i)! ln^{m-i} X / a^{i+1}."""
    lX = math.log(X)
    acc = 0.0
    fact = 1.0
    for i in range(m + 1):
        if i > 0:
            fact *= (m - i + 1)
        acc += fact * lX ** (m - i) / a ** (i + 1)
    return X ** -a * acc


def _tail_moment(table: CharFnTable, X: float, two_h: float) -> float:
    """int_X^oo x^{two_h} rho(x) dx from the large-x expansion; requires
    every non-smooth exponent lam to satisfy lam > two_h (guaranteed for
    two_h < 2s+1 by the gap structure)."""
    total = 0.0
    for lam, j, coef in _phi_nonsmooth_terms(table):
        a = lam - two_h
        if a <= 1e-9:
            raise ValueError(
                f"divergent tail: exponent {lam} <= moment power {two_h}")
        # cosine transform of coef t^lam ln^j t:
        #   coef * x^{-lam-1} sum_i C(j,i) B^(i)(lam) (-ln x)^{j-i}
        for i in range(j + 1):
            amp = coef * math.comb(j, i) * _cos_transform_B(lam, i) \
                * (-1.0) ** (j - i)
            total += amp * _power_log_tail(a, j - i, X) / math.pi
    return total


# ---------------------------------------------------------------------------
# grid evaluation, mass, moments
# ---------------------------------------------------------------------------


def density_eval(s: float, x_grid=None,
                 table: CharFnTable | None = None) -> DensityGrid:
    """Evaluate rho^(s) on a symmetric grid (default: tangent-spaced out to
    |x| = 20, dense near the origin)."""
    if table is None:
        table = build_charfn(s)
    if x_grid is None:
        theta = np.linspace(0.0, math.atan(20.0), 61)[1:]
        xs = np.tan(theta)
        x_grid = np.concatenate([-xs[::-1], [0.0], xs])
    x_grid = np.asarray(x_grid, dtype=float)
    # evaluate on |x| once; mirror (rho is even by construction)
    uniq = np.unique(np.abs(x_grid))
    vals = {float(ax): _rho_single(table, float(ax)) for ax in uniq}
    rho = np.array([vals[abs(float(x))] for x in x_grid])

    mass = _moment_integral(table, s, 0.0)
    return DensityGrid(s=s, x_grid=x_grid, rho=rho,
                       mass_defect=abs(1.0 - mass),
                       min_value=float(np.min(rho)), table=table)


def _moment_integral(table: CharFnTable, s: float, two_h: float) -> float:
    """int |x|^{two_h} rho dx: tangent-substituted quadrature on |x| < X
    plus the analytic tail beyond."""
    # analytic piece on [0, a0]: rho is even and smooth at 0, so
    # int_0^a0 x^q rho dx = rho(0) a0^{q+1}/(q+1) + rho''(0)/2 a0^{q+3}/(q+3)
    # + O(a0^{q+5}); this absorbs the x^{two_h} singularity exactly
    a0 = 0.01
    rho0 = _rho_single(table, 0.0)
    d = 0.05
    rho2 = 2.0 * (_rho_single(table, d) - rho0) / d ** 2   # rho''(0)
    total = (rho0 * a0 ** (two_h + 1.0) / (two_h + 1.0)
             + 0.5 * rho2 * a0 ** (two_h + 3.0) / (two_h + 3.0))
    # panel edges octave-graded in x so each panel sees a smooth power law
    x_edges = [a0, 0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, _X_SPLIT]
    edges = np.arctan(x_edges)
    for a, b in zip(edges[:-1], edges[1:]):
        th = 0.5 * (b - a) * (_GL_NODES16 + 1.0) + a
        w = 0.5 * (b - a) * _GL_WEIGHTS16
        for ti, wi in zip(th, w):
            x = math.tan(ti)
            f = _rho_single(table, x) / math.cos(ti) ** 2
            total += wi * (x ** two_h * f if two_h != 0.0 else f)
    return 2.0 * (total + _tail_moment(table, _X_SPLIT, two_h))


def density_moment(grid: DensityGrid, two_h: float) -> float:
    """E|X(s)|^{2h} = int |x|^{2h} rho dx for -1 < 2h < 2s + 1."""
    s = grid.s
    if not -1.0 < two_h < 2.0 * s + 1.0 - 0.05:
        raise ValueError(
            f"moment exponent {two_h} outside (-1, {2*s+1}) (or within 0.05 "
            "of the divergent edge)")
    return _moment_integral(grid.table, s, two_h)


# ---------------------------------------------------------------------------
# correlation kernel of the underlying determinantal process
# ---------------------------------------------------------------------------


def _kernel_G(s: float, x: float) -> float:
    ax = abs(x)
    return (2.0 ** (2.0 * s - 0.5) * specfun.gamma(s + 0.5)
            * ax ** -0.5 * specfun.bessel_j(s - 0.5, 1.0 / ax))


def _kernel_H(s: float, x: float) -> float:
    ax = abs(x)
    return (math.copysign(1.0, x) * 2.0 ** (2.0 * s + 0.5)
            * specfun.gamma(s + 1.5)
            * ax ** -0.5 * specfun.bessel_j(s + 0.5, 1.0 / ax))


_DIAG_SWITCH = 1e-6


def hp_kernel(s: float, x: float, y: float) -> float:
    """Correlation kernel K^(s)(x,y) = c_s (G(x)H(y) - G(y)H(x))/(x - y),
    c_s = Gamma(s+1)^2/(2 pi Gamma(2s+1) Gamma(2s+2)); the diagonal is the
    confluent limit G'(x)H(x) - G(x)H'(x), taken by central differences of
    G and H when |x - y| < 1e-6."""
    if x == 0.0 or y == 0.0:
        raise ValueError("hp_kernel is defined on the punctured line "
                         "(x, y != 0)")
    c = (specfun.gamma(s + 1.0) ** 2
         / (2.0 * math.pi * specfun.gamma(2.0 * s + 1.0)
            * specfun.gamma(2.0 * s + 2.0)))
    if abs(x - y) >= _DIAG_SWITCH:
        num = (_kernel_G(s, x) * _kernel_H(s, y)
               - _kernel_G(s, y) * _kernel_H(s, x))
        return c * num / (x - y)
    x0 = 0.5 * (x + y)
    d = 1e-5 * max(1.0, abs(x0))
    gp = (_kernel_G(s, x0 + d) - _kernel_G(s, x0 - d)) / (2.0 * d)
    hp = (_kernel_H(s, x0 + d) - _kernel_H(s, x0 - d)) / (2.0 * d)
    return c * (gp * _kernel_H(s, x0) - _kernel_G(s, x0) * hp)
