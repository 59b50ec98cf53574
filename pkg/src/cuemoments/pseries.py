"""Truncated generalized power series with logarithm factors.

Represents finite sums  sum_{(p, l)} c_{p,l} * z^p * (ln z)^l  with real
exponents p and integer log powers l >= 0, truncated at a maximal exponent.
This is the natural coefficient algebra for the small-z expansion of the
Painlevé sigma-function, whose exponent lattice is {k + 2*l*s} and which
acquires (ln z)-terms when 2s is an odd integer.

Exponent keys are rounded to 1e-9 so that lattice collisions (e.g. 4s+2
hitting an integer) merge instead of producing spurious near-duplicate rows.
"""

from __future__ import annotations

import math
from typing import Dict, Iterable, Tuple

__all__ = ["LogSeries"]

_KEY_DECIMALS = 9


def _key(p: float) -> float:
    return round(float(p), _KEY_DECIMALS)


class LogSeries:
    """Immutable-by-convention sparse series sum c_{p,l} z^p (ln z)^l."""

    __slots__ = ("terms", "pmax")

    def __init__(self, terms: Dict[Tuple[float, int], float] | None = None,
                 pmax: float = math.inf):
        self.terms: Dict[Tuple[float, int], float] = {}
        self.pmax = pmax
        if terms:
            for (p, l), c in terms.items():
                self._add_term(p, l, c)

    # -- construction helpers ------------------------------------------------

    @classmethod
    def monomial(cls, coeff: float, p: float, l: int = 0,
                 pmax: float = math.inf) -> "LogSeries":
        out = cls(pmax=pmax)
        out._add_term(p, l, coeff)
        return out

    def _add_term(self, p: float, l: int, c: float) -> None:
        if c == 0.0 or p > self.pmax + 1e-9:
            return
        k = (_key(p), int(l))
        new = self.terms.get(k, 0.0) + c
        if new == 0.0:
            self.terms.pop(k, None)
        else:
            self.terms[k] = new

    def copy(self) -> "LogSeries":
        out = LogSeries(pmax=self.pmax)
        out.terms = dict(self.terms)
        return out

    # -- algebra -------------------------------------------------------------

    def __add__(self, other: "LogSeries") -> "LogSeries":
        out = self.copy()
        out.pmax = min(self.pmax, other.pmax)
        for (p, l), c in other.terms.items():
            out._add_term(p, l, c)
        return out

    def __sub__(self, other: "LogSeries") -> "LogSeries":
        return self + other.scale(-1.0)

    def scale(self, a: float) -> "LogSeries":
        out = LogSeries(pmax=self.pmax)
        out.terms = {k: a * c for k, c in self.terms.items() if a * c != 0.0}
        return out

    def __mul__(self, other: "LogSeries") -> "LogSeries":
        out = LogSeries(pmax=min(self.pmax, other.pmax))
        for (p1, l1), c1 in self.terms.items():
            for (p2, l2), c2 in other.terms.items():
                p = p1 + p2
                if p > out.pmax + 1e-9:
                    continue
                out._add_term(p, l1 + l2, c1 * c2)
        return out

    def shift(self, dp: float) -> "LogSeries":
        """Multiply by z^dp."""
        out = LogSeries(pmax=self.pmax)
        for (p, l), c in self.terms.items():
            out._add_term(p + dp, l, c)
        return out

    def deriv(self) -> "LogSeries":
        """d/dz: z^p ln^l z -> p z^{p-1} ln^l z + l z^{p-1} ln^{l-1} z."""
        out = LogSeries(pmax=self.pmax)
        for (p, l), c in self.terms.items():
            if p != 0.0:
                out._add_term(p - 1.0, l, c * p)
            if l > 0:
                out._add_term(p - 1.0, l - 1, c * l)
        return out

    def exp(self) -> "LogSeries":
        """exp(series), requiring all exponents > 0 (no constant term)."""
        pmin = min((p for (p, _l) in self.terms), default=math.inf)
        if pmin <= 1e-12:
            raise ValueError("exp requires strictly positive exponents")
        out = LogSeries.monomial(1.0, 0.0, pmax=self.pmax)
        power = LogSeries.monomial(1.0, 0.0, pmax=self.pmax)
        kmax = int(self.pmax / pmin) + 1
        fact = 1.0
        for k in range(1, kmax + 1):
            power = power * self
            if not power.terms:
                break
            fact *= k
            out = out + power.scale(1.0 / fact)
        return out

    # -- evaluation ----------------------------------------------------------

    def eval(self, z: float) -> float:
        lz = math.log(z)
        tot = 0.0
        for (p, l), c in self.terms.items():
            tot += c * math.exp(p * lz) * lz ** l
        return tot

    def eval_many(self, z) -> "object":
        import numpy as np
        z = np.asarray(z, dtype=float)
        lz = np.log(z)
        tot = np.zeros_like(z)
        for (p, l), c in self.terms.items():
            tot += c * np.exp(p * lz) * lz ** l
        return tot

    def integrate_zero_to(self, z: float, p_shift: float = 0.0) -> float:
        """int_0^z x^{p + p_shift} ln^l x dx summed over terms.

        Requires every shifted exponent > -1 (integrable endpoint).
        Closed form: int_0^z x^q ln^l x dx =
            z^{q+1} * sum_{j=0}^{l} (-1)^j l!/(l-j)! ln^{l-j} z / (q+1)^{j+1}.
        """
        lz = math.log(z)
        tot = 0.0
        for (p, l), c in self.terms.items():
            q = p + p_shift
            if q <= -1.0 + 1e-12:
                raise ValueError(f"non-integrable exponent {q} at origin")
            acc = 0.0
            fact = 1.0
            for j in range(l + 1):
                if j > 0:
                    fact *= (l - j + 1)
                acc += (-1.0) ** j * fact * lz ** (l - j) / (q + 1.0) ** (j + 1)
            tot += c * math.exp((q + 1.0) * lz) * acc
        return tot

    # -- introspection -------------------------------------------------------

    def coeff(self, p: float, l: int = 0) -> float:
        return self.terms.get((_key(p), int(l)), 0.0)

    def items(self) -> Iterable[Tuple[float, int, float]]:
        for (p, l), c in sorted(self.terms.items()):
            yield p, l, c

    def min_exponent(self) -> float:
        return min((p for (p, _l) in self.terms), default=math.inf)

    def __repr__(self) -> str:
        bits = [f"{c:+.6g} z^{p:g}" + (f" ln^{l}" if l else "")
                for p, l, c in self.items()]
        return "LogSeries(" + " ".join(bits[:12]) + (" ..." if len(bits) > 12 else "") + ")"
