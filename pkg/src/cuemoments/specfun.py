"""Special-function kernel: Gamma, digamma, Barnes G, Bessel I/J, confluent
hypergeometric U(a,b,z), and generalized Laguerre polynomials.

Everything here is pure and deterministic.  Gamma-family and Bessel functions
delegate to scipy.special (double precision, relative accuracy ~1e-13 in the
parameter ranges used here).  Barnes G and U(a,b,z) are implemented locally:
scipy has no Barnes G, and U is evaluated through its defining real integral

    U(a,b,z) = (1/Gamma(a)) * int_0^oo e^{-zx} x^{a-1} (1+x)^{b-a-1} dx,

valid for a > 0, z > 0, which is the only regime needed.  A log-scale variant
is provided for use inside large Hankel determinants.
"""

from __future__ import annotations

import functools
import math

import numpy as np
from scipy import integrate as _integrate
from scipy import special as _sp

__all__ = [
    "gamma",
    "gammaln",
    "digamma",
    "barnes_g_ln",
    "barnes_prefactor_ln",
    "bessel_i",
    "bessel_i_scaled",
    "bessel_j",
    "hyp_u",
    "hyp_u_ln",
    "laguerre",
]

_LN_2PI = math.log(2.0 * math.pi)


def _check_not_nonpositive_integer(x: float, name: str) -> None:
    if x <= 0 and float(x).is_integer():
        raise ValueError(f"{name} has a pole at non-positive integer x={x}")


def gamma(x: float) -> float:
    """Euler Gamma function for real x away from the poles."""
    _check_not_nonpositive_integer(x, "gamma")
    return float(_sp.gamma(x))


def gammaln(x: float):
    """ln Gamma(x) for x > 0 (vectorized over numpy arrays)."""
    return _sp.gammaln(x)


def digamma(x: float) -> float:
    """Digamma psi(x) for real x away from the poles."""
    _check_not_nonpositive_integer(x, "digamma")
    return float(_sp.digamma(x))


# ---------------------------------------------------------------------------
# Barnes G
# ---------------------------------------------------------------------------

# Gauss-Legendre rule reused for the Barnes integral; x*psi(x) is smooth on
# [0, 1] (the 1/x pole of psi is cancelled), so 60 nodes give ~1e-15.
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(60)


def _barnes_g_ln_01(w: float) -> float:
    """ln G(1+w) for w in [0, 1], via
    ln G(1+w) = (w/2) ln(2 pi) + w(1-w)/2 + int_0^w x psi(x) dx.
    """
    if w == 0.0:
        return 0.0
    # map GL nodes from [-1,1] to [0,w]
    x = 0.5 * w * (_GL_NODES + 1.0)
    integrand = x * _sp.digamma(x)
    integral = 0.5 * w * float(np.dot(_GL_WEIGHTS, integrand))
    return 0.5 * w * _LN_2PI + 0.5 * w * (1.0 - w) + integral


def barnes_g_ln(x: float) -> float:
    """ln G(x) for x > 0, with G the Barnes G-function, G(z+1) = Gamma(z) G(z)."""
    if x <= 0:
        raise ValueError(f"barnes_g_ln requires x > 0, got {x}")
    # Reduce to ln G(1+w) with w in [0,1] using the recurrence.
    acc = 0.0
    w = x - 1.0
    while w > 1.0:
        acc += float(_sp.gammaln(w))
        w -= 1.0
    while w < 0.0:
        # G(1+w) = G(2+w)/Gamma(1+w)
        acc -= float(_sp.gammaln(1.0 + w))
        w += 1.0
    return acc + _barnes_g_ln_01(w)


def barnes_prefactor_ln(s: float) -> float:
    """ln of the prefactor G(1+s)^2 / G(1+2s), s > -1/2."""
    return 2.0 * barnes_g_ln(1.0 + s) - barnes_g_ln(1.0 + 2.0 * s)


# ---------------------------------------------------------------------------
# Bessel functions
# ---------------------------------------------------------------------------


def bessel_i(nu: float, x: float) -> float:
    """Modified Bessel I_nu(x), nu > -1, x >= 0."""
    if nu <= -1:
        raise ValueError(f"bessel_i requires nu > -1, got {nu}")
    if x < 0:
        raise ValueError(f"bessel_i requires x >= 0, got {x}")
    return float(_sp.iv(nu, x))


def bessel_i_scaled(nu, x):
    """exp(-x) * I_nu(x), overflow-free for large x (vectorized)."""
    return _sp.ive(nu, x)


def bessel_j(nu: float, x: float) -> float:
    """Bessel J_nu(x), nu > -1, x > 0."""
    if nu <= -1:
        raise ValueError(f"bessel_j requires nu > -1, got {nu}")
    return float(_sp.jv(nu, x))


# ---------------------------------------------------------------------------
# Confluent hypergeometric U(a, b, z), a > 0, z > 0
# ---------------------------------------------------------------------------


@functools.lru_cache(maxsize=256)
def _gen_laguerre_rule(n: int, alpha: float):
    """Nodes and log-weights of the generalized Gauss-Laguerre rule with
    weight x^alpha e^{-x}; weights are returned as logs of the weights
    normalized by Gamma(alpha+1) (so they sum to 1)."""
    with np.errstate(over="ignore", invalid="ignore"):
        nodes, weights = _sp.roots_genlaguerre(n, alpha)
    with np.errstate(divide="ignore"):
        logw = np.log(weights) - float(_sp.gammaln(alpha + 1.0))
    return nodes, logw


def _hyp_u_ln_quad(a: float, b: float, z: float, n: int) -> float:
    """ln U(a,b,z) by the n-node generalized Gauss-Laguerre rule applied to
    U = z^{-a}/Gamma(a) * int_0^oo e^{-t} t^{a-1} (1+t/z)^{b-a-1} dt."""
    nodes, logw = _gen_laguerre_rule(n, a - 1.0)
    terms = logw + (b - a - 1.0) * np.log1p(nodes / z)
    return -a * math.log(z) + float(_sp.logsumexp(terms))


def _hyp_u_ln_fallback(a: float, b: float, z: float) -> float:
    """ln U(a,b,z) by adaptive quadrature; used when the fixed rule has not
    converged (very small z).  Splits at the scale where (1+x) ~ x and works
    on e^{-zx} x^{a-1}(1+x)^{b-a-1} with an overall scale factored out."""
    c = b - a - 1.0

    # Peak of the integrand (log-derivative root), used as scale-out point.
    # d/dx log = -z + (a-1)/x + c/(1+x); crude but adequate bracket:
    x_peak = max((a - 1.0 + max(c, 0.0)) / z, 1.0)
    log_scale = -z * x_peak + (a - 1.0) * math.log(x_peak) + c * math.log1p(x_peak)

    def f(x: float) -> float:
        if x <= 0.0:
            return 0.0
        lg = -z * x + (a - 1.0) * math.log(x) + c * math.log1p(x) - log_scale
        return math.exp(lg) if lg > -745.0 else 0.0

    upper = x_peak + (60.0 + 10.0 * math.sqrt(abs(a) + abs(c) + 1.0)) / z
    val1, _ = _integrate.quad(f, 0.0, x_peak, epsabs=0.0, epsrel=1e-13, limit=400)
    val2, _ = _integrate.quad(f, x_peak, upper, epsabs=0.0, epsrel=1e-13, limit=400)
    return log_scale + math.log(val1 + val2) - float(_sp.gammaln(a))


def hyp_u_ln(a: float, b: float, z: float) -> float:
    """ln U(a,b,z) for a > 0, z > 0 (U is positive there)."""
    if a <= 0:
        raise ValueError(f"hyp_u requires a > 0, got a={a}")
    if z <= 0:
        raise ValueError(f"hyp_u requires z > 0, got z={z}")
    v1 = _hyp_u_ln_quad(a, b, z, 200)
    v2 = _hyp_u_ln_quad(a, b, z, 400)
    if abs(v1 - v2) <= 1e-12 * (1.0 + abs(v2)):
        return v2
    v3 = _hyp_u_ln_quad(a, b, z, 800)
    if abs(v2 - v3) <= 1e-11 * (1.0 + abs(v3)):
        return v3
    return _hyp_u_ln_fallback(a, b, z)


def hyp_u(a: float, b: float, z: float) -> float:
    """Kummer U(a,b,z) for a > 0, z > 0, to ~1e-10 relative."""
    return math.exp(hyp_u_ln(a, b, z))


# ---------------------------------------------------------------------------
# Generalized Laguerre polynomials
# ---------------------------------------------------------------------------


def laguerre(n: int, alpha: float, x: float) -> float:
    """L_n^(alpha)(x) by the three-term recurrence
    (k+1) L_{k+1} = (2k+1+alpha-x) L_k - (k+alpha) L_{k-1}."""
    if n < 0:
        raise ValueError(f"laguerre requires n >= 0, got {n}")
    if n == 0:
        return 1.0
    lm1 = 1.0
    l0 = 1.0 + alpha - x
    for k in range(1, n):
        lp1 = ((2.0 * k + 1.0 + alpha - x) * l0 - (k + alpha) * lm1) / (k + 1.0)
        lm1, l0 = l0, lp1
    return l0
