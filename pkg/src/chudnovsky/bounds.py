"""Numeric evaluation of complexity bounds, for cross-checking computed counts."""
from __future__ import annotations

import math
from dataclasses import dataclass, asdict
from fractions import Fraction

import mpmath
from scipy.special import lambertw

from .errors import BaseOutOfRange
from .strategy import Strategy, strategy_cost, top_strategy

_E_ROOT = math.exp(1 / math.e)
_REL_TOL = 1e-6


def iterated_log_threshold(base: float) -> int:
    """Value at or below which the iterated logarithm stops.

    For base >= e^(1/e) this is 1. Below that, repeated logarithms converge to
    the largest fixed point x0 of log_base, and the stop is floor(x0) + 1.
    """
    if base <= 1:
        raise BaseOutOfRange(f"base {base} must exceed 1")
    if base > _E_ROOT:
        return 1
    lna = math.log(base)
    # base^x = x  <=>  x = -W(-ln a) / ln a; branch -1 gives the larger root
    x0 = float((-lambertw(-lna, -1) / lna).real)
    r = round(x0)
    if abs(x0 - r) < 1e-9:
        x0 = r
    return math.floor(x0) + 1


def iterated_log(base: float, n: float) -> int:
    """Number of log_base applications until the value is <= the stopping threshold."""
    threshold = iterated_log_threshold(base)
    lb = math.log(base)
    x = float(n)
    count = 0
    while True:
        if abs(x - threshold) <= _REL_TOL * threshold:
            return _iterated_log_mp(base, n, threshold)
        if x <= threshold:
            return count
        x = math.log(x) / lb
        count += 1


def _iterated_log_mp(base, n, threshold) -> int:
    # high-precision rerun for chains that pass close to the threshold
    with mpmath.workdps(60):
        b = mpmath.mpf(base)
        sq = round(float(base) ** 2)
        if abs(b * b - sq) < mpmath.mpf(10) ** -12:
            b = mpmath.sqrt(sq)
        lb = mpmath.log(b)
        v = mpmath.mpf(n)
        steps = 0
        while v > threshold:
            v = mpmath.log(v) / lb
            steps += 1
    return steps


def theorem9_constant(q: int) -> Fraction:
    return Fraction(14, 5) if q == 2 else Fraction(1)


def theorem9_bound(q: int, n: int) -> float:
    """C n (4q^2/(q-1))^(log*_{sqrt q}(2n))."""
    if n < 2:
        raise ValueError("n must be >= 2")
    k = iterated_log(math.sqrt(q), 2 * n)
    value = float(theorem9_constant(q) * n * Fraction(4 * q * q, q - 1) ** k)
    return value


def lemma2_check(q: int, d: int) -> bool:
    """d q^(d/2+1) - q^d <= q^(d+1), decided in integers by squaring."""
    if d < 1:
        raise ValueError("d must be >= 1")
    # equivalent: d q^(d/2+1) <= q^(d+1) + q^d, both sides positive
    return d * d * q ** (d + 2) <= (q ** (d + 1) + q ** d) ** 2


@dataclass
class BoundReport:
    q: int
    n: int
    counts: dict
    theorem9: float
    lower: int
    iterated_log: int

    @property
    def ok(self) -> bool:
        return all(self.lower <= c <= self.theorem9 for c in self.counts.values())

    def as_dict(self) -> dict:
        d = asdict(self)
        d["ok"] = self.ok
        return d

    def text(self) -> str:
        rows = [("q", str(self.q)), ("n", str(self.n)),
                ("lower bound 2n-1", str(self.lower))]
        rows += [(f"count[{s}]", str(c)) for s, c in self.counts.items()]
        rows += [("log*_sqrt(q)(2n)", str(self.iterated_log)),
                 ("upper bound", f"{self.theorem9:.6g}"),
                 ("sandwich", "ok" if self.ok else "VIOLATED")]
        width = max(len(k) for k, _ in rows)
        return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


def bound_report(q: int, n: int) -> BoundReport:
    counts = {"deg": strategy_cost(q, n, Strategy.DEG)}
    if top_strategy(Strategy.DIV, q, n) is Strategy.DIV:
        counts["div"] = strategy_cost(q, n, Strategy.DIV)
    counts["opt"] = strategy_cost(q, n, Strategy.OPT)
    return BoundReport(q, n, counts, theorem9_bound(q, n), 2 * n - 1,
                       iterated_log(math.sqrt(q), 2 * n))


__all__ = ["BoundReport", "bound_report", "iterated_log", "iterated_log_threshold",
           "lemma2_check", "theorem9_bound"]
