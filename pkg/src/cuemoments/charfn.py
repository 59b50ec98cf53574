"""Characteristic-function layer: f(t) = int_0^t v(x;s) dx/x, u(t) = e^{f(t)},
and derivative jets u^(n)(t).

u(t) is the characteristic function E[exp(i(t/2)X(s))] of the Hua-Pickrell
law; the density module consumes it as phi(t) = u(2t).  At s = 0 the law is
standard Cauchy and u(t) = e^{-t/2} exactly.

Evaluation strategy:
  * f rides along with the ODE collocation solution (it is integrated as a
    fourth component there) and comes from the analytically integrated seed
    series below z_seed, so no separate cumulative quadrature is needed.
  * u^(n)(t) for t > 0 combines the Painleve jets v, v', ... with the
    Leibniz expansion of d^n/dt^n [v(t)/t] and the derivative recurrence
    u^(n+1) = sum_k C(n,k) u^(k) f^(n+1-k)  (partition-free Faa di Bruno).
  * u^(n)(0) comes from the exponentiated seed series; it is finite only for
    n below the first non-analytic exponent 2s+1 (gap structure: all odd
    Taylor slots below it vanish).
  * the large-t tail follows from integrating the large-z expansion of v
    term by term:  u(t) ~ C t^{-3s^2/4} exp(-t/2 + 2s sqrt(t)); the constant
    C is fitted on the last decade of the grid and the model is used only
    for truncation bounds, never for reported values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List

import numpy as np

from .painleve import (PainleveParams, PainleveSolution, classify_regime,
                       solve_painleve)
from .pseries import LogSeries

__all__ = ["CharFnTable", "build_charfn", "u_deriv_at"]

_U_TAIL_THRESHOLD = 1e-16
_J_CAP = 8
_GRID_POINTS = 600


@dataclass
class CharFnTable:
    """Immutable table of f, u and u-jets for one value of s."""
    s: float
    t_grid: np.ndarray           # increasing, t_grid[0] = 0
    f: np.ndarray                # f(t) on the grid (f[0] = 0)
    u: np.ndarray                # e^f on the grid
    jets: np.ndarray             # u^(1..J) at the grid nodes, shape (J, n)
    tail: tuple                  # (C, a, b): u ~ C t^b e^{-t/2 + a sqrt t}
    J: int
    T_end: float
    sol: PainleveSolution = field(repr=False)
    u_series: LogSeries = field(repr=False)   # small-t expansion of u

    # -- scalar / vector evaluation -----------------------------------------

    def f_at(self, t):
        """f(t) = int_0^t v dx/x, vectorized, t >= 0."""
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        t = np.atleast_1d(t)
        out = np.empty(t.shape)
        pos = t > 0.0
        out[~pos] = 0.0
        if np.any(pos):
            out[pos] = self.sol.state(t[pos])[3]
        return float(out[0]) if scalar else out

    def u_at(self, t):
        """u(t) = exp f(t), vectorized."""
        return np.exp(self.f_at(t))

    def u_tail_bound(self, t: float) -> float:
        """Model value C t^b e^{-t/2 + a sqrt t}; an upper-bound proxy for
        u beyond the grid (used for quadrature truncation only)."""
        C, a, b = self.tail
        return C * t ** b * math.exp(-0.5 * t + a * math.sqrt(t))


def _analytic_t_end(s: float) -> float:
    """Smallest t with -t/2 + 2s sqrt(t) - (3 s^2/4) ln t <= ln(threshold),
    by bisection on the (eventually decreasing) exponent model."""
    target = math.log(_U_TAIL_THRESHOLD)

    def expo(t: float) -> float:
        return -0.5 * t + 2.0 * s * math.sqrt(t) - 0.75 * s * s * math.log(t)

    hi = 80.0
    while expo(hi) > target:
        hi *= 1.5
        if hi > 1e5:
            raise RuntimeError("tail-extension failure: u does not decay")
    lo = hi / 1.5
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if expo(mid) > target:
            lo = mid
        else:
            hi = mid
    return hi


def _f_jets(t: float, vjets: List[float], n: int) -> List[float]:
    """[f'(t), ..., f^(n)(t)] from v-jets [v, v', ...]:
    f^(m) = d^{m-1}/dt^{m-1} [v/t]
          = sum_{k=0}^{m-1} C(m-1,k) v^(k) (-1)^{m-1-k} (m-1-k)! t^{k-m}."""
    out = []
    for m in range(1, n + 1):
        acc = 0.0
        for k in range(0, m):
            acc += (math.comb(m - 1, k) * vjets[k]
                    * (-1.0) ** (m - 1 - k) * math.factorial(m - 1 - k)
                    * t ** (k - m))
        out.append(acc)
    return out


def _u_jets_from_f(u0: float, fj: List[float]) -> List[float]:
    """[u^(1), ..., u^(n)] from u(t) and [f', ..., f^(n)] by
    u^(n+1) = sum_k C(n,k) u^(k) f^(n+1-k)."""
    n = len(fj)
    uj = [u0]
    for m in range(n):  # compute u^(m+1)
        acc = 0.0
        for k in range(0, m + 1):
            acc += math.comb(m, k) * uj[k] * fj[m - k]
        uj.append(acc)
    return uj[1:]


def build_charfn(s: float, T_max: float | None = None, J: int = 6) -> CharFnTable:
    """Build the characteristic-function table for s > -1/2.

    T_max defaults to (and is auto-extended to) the point where the tail
    model puts u below 1e-16."""
    if J > _J_CAP:
        raise ValueError(f"jet order J={J} exceeds cap {_J_CAP}")
    T_end = _analytic_t_end(s)
    if T_max is not None:
        T_end = max(T_end, float(T_max))
    sol = solve_painleve(s, T_end)

    # verify the threshold against the actual f, extending if needed
    for _ in range(6):
        f_end = float(sol.state(T_end)[3])
        if f_end <= math.log(_U_TAIL_THRESHOLD):
            break
        T_end *= 1.5
        sol = solve_painleve(s, T_end)
    else:
        raise RuntimeError("tail-extension failure: u(T) did not reach "
                           f"{_U_TAIL_THRESHOLD} by T={T_end}")

    t_grid = np.concatenate([[0.0], np.geomspace(1e-4, T_end, _GRID_POINTS)])
    f_vals = np.empty(t_grid.size)
    f_vals[0] = 0.0
    state = sol.state(t_grid[1:])
    f_vals[1:] = state[3]
    u_vals = np.exp(f_vals)

    # u-jets at the positive grid nodes via the Leibniz/Faa-di-Bruno chain
    jets = np.zeros((J, t_grid.size))
    for i in range(1, t_grid.size):
        t = float(t_grid[i])
        vj = sol.jet(t, J - 1)
        vjets = [vj.v] + vj.dv
        fj = _f_jets(t, vjets, J)
        jets[:, i] = _u_jets_from_f(float(u_vals[i]), fj)

    # small-t expansion of u = exp(f-series); the integrated series has the
    # same exponent lattice shifted by nothing (term z^p ln^l integrates to
    # exponent p with polynomial-in-ln coefficients)
    u_series = _integrated_series(sol.seed.series).exp()
    # jets at t = 0 from the series (finite slots only; gap structure)
    for n in range(1, J + 1):
        if _smooth_at_zero(s, n):
            jets[n - 1, 0] = math.factorial(n) * u_series.coeff(float(n))
        else:
            jets[n - 1, 0] = math.nan  # u not C^n at 0

    # tail fit on the last decade: ln C = f + t/2 - 2s sqrt t + (3s^2/4) ln t
    mask = t_grid >= T_end / 10.0
    tt = t_grid[mask]
    lnC = (f_vals[mask] + 0.5 * tt - 2.0 * s * np.sqrt(tt)
           + 0.75 * s * s * np.log(tt))
    tail = (float(np.exp(np.mean(lnC[-40:]))), 2.0 * s, -0.75 * s * s)

    return CharFnTable(s=s, t_grid=t_grid, f=f_vals, u=u_vals, jets=jets,
                       tail=tail, J=J, T_end=T_end, sol=sol,
                       u_series=u_series)


def _integrated_series(v_series: LogSeries) -> LogSeries:
    """Series of f(t) = int_0^t v(x) dx/x: term c x^{p-1} ln^l x integrates
    to c t^p sum_j (-1)^j l!/(l-j)! ln^{l-j} t / p^{j+1}."""
    out = LogSeries(pmax=v_series.pmax)
    for (p, l), c in v_series.terms.items():
        q = p - 1.0
        if q <= -1.0 + 1e-12:
            raise ValueError(f"non-integrable exponent {q} at origin")
        fact = 1.0
        for j in range(l + 1):
            if j > 0:
                fact *= (l - j + 1)
            out._add_term(q + 1.0, l - j,
                          c * (-1.0) ** j * fact / (q + 1.0) ** (j + 1))
    return out


def _smooth_at_zero(s: float, n: int) -> bool:
    """Whether u is C^n at t = 0: always for the analytic regimes (s = 0,
    integer s), otherwise only below the non-analytic exponent 2s+1."""
    if classify_regime(s) in ("exact_zero", "integer_s"):
        return True
    return n < 2.0 * s + 1.0 - 1e-9


def u_deriv_at(table: CharFnTable, t: float, n: int) -> float:
    """u^(n)(t) for 0 <= n <= J.

    At t = 0 the value comes from the exponentiated small-t series and is
    finite only for n below the non-analytic exponent 2s+1 (every n in the
    analytic s-regimes)."""
    if n > table.J:
        raise ValueError(f"order n={n} exceeds table J={table.J}")
    if n == 0:
        return float(table.u_at(t))
    if t == 0.0:
        if not _smooth_at_zero(table.s, n):
            raise ValueError(
                f"u is not C^{n} at t=0 for s={table.s} (2s+1 = "
                f"{2*table.s+1})")
        return math.factorial(n) * table.u_series.coeff(float(n))
    vj = table.sol.jet(float(t), n - 1)
    vjets = [vj.v] + vj.dv
    fj = _f_jets(float(t), vjets, n)
    u0 = float(table.u_at(t))
    return _u_jets_from_f(u0, fj)[n - 1]
