"""Choice of interpolation points for multiplication in F_{q^n}.

Three families are built here:

``deg``  places taken by increasing degree until their degrees sum to 2n - 1;
``div``  places whose degrees divide d = ceil(log_q 2n), plus one adjusting place;
``opt``  an exact-weight minimum-cost selection that may use Hasse-derivative
         evaluations (multiplicity u > 1) at finite rational places.

Costs only depend on q, so all counting functions take the integer q; the
builders take a :class:`FieldConfig` because they produce actual places.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

from .errors import (
    Infeasible,
    InvalidSpec,
    PreconditionSmallN,
    UnsupportedMultiplicity,
)
from .evaluation import EvalPoint
from .field_core import FieldConfig
from .places import Place, count_places, first_places, rational_places

DEFAULT_UMAX = 3


class Strategy(str, enum.Enum):
    DEG = "deg"
    DIV = "div"
    OPT = "opt"

    @classmethod
    def parse(cls, value) -> "Strategy":
        if isinstance(value, Strategy):
            return value
        return cls(str(value).lower())

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class InterpolationSpec:
    field: FieldConfig
    n: int
    points: tuple[EvalPoint, ...]
    strategy: Strategy
    umax: int = DEFAULT_UMAX

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        validate_spec(self)

    @property
    def weight(self) -> int:
        return sum(pt.weight for pt in self.points)

    def places(self) -> list[Place]:
        return [pt.place for pt in self.points if not pt.is_lead]

    def profile(self) -> dict[int, int]:
        """Degree -> number of places (the lead point counts as degree 1)."""
        out: dict[int, int] = {}
        for pt in self.points:
            out[pt.degree] = out.get(pt.degree, 0) + 1
        return dict(sorted(out.items()))

    def cost(self) -> int:
        return sum(point_cost(pt, self.strategy, self.field.q, self.umax) for pt in self.points)


def validate_spec(spec: InterpolationSpec) -> None:
    if spec.weight != 2 * spec.n - 1:
        raise InvalidSpec(f"total weight {spec.weight} != 2n-1 = {2 * spec.n - 1}")
    if sum(pt.is_lead for pt in spec.points) > 1:
        raise InvalidSpec("more than one leading-coefficient point")
    places = spec.places()
    if len(set(places)) != len(places):
        raise InvalidSpec("a place appears twice")
    for pt in spec.points:
        if pt.place is not None and pt.place.minpoly.field != spec.field:
            raise InvalidSpec("place over a different field")
        if pt.u > 1 and not pt.u < spec.n - 1:
            raise InvalidSpec(f"multiplicity {pt.u} requires u < n - 1 = {spec.n - 1}")


# ---------------------------------------------------------------------------
# truncated products at rational places

# Each scheme lists the products (as pairs of index sets summed on each side)
# and how each output coefficient combines them with signs.
TRUNCATED_SCHEMES = {
    1: {"products": [((0,), (0,))],
        "outputs": [[(0, 1)]]},
    2: {"products": [((0,), (0,)), ((1,), (1,)), ((0, 1), (0, 1))],
        "outputs": [[(0, 1)], [(2, 1), (0, -1), (1, -1)]]},
    3: {"products": [((0,), (0,)), ((1,), (1,)), ((2,), (2,)),
                     ((0, 1), (0, 1)), ((0, 2), (0, 2))],
        "outputs": [[(0, 1)], [(3, 1), (0, -1), (1, -1)],
                    [(4, 1), (0, -1), (2, -1), (1, 1)]]},
}


def trunc_cost(d: int, u: int) -> int:
    """Bilinear cost of a product in F_{q^d}[[t]]/(t^u); only d = 1, u <= 3."""
    if d != 1 or u not in TRUNCATED_SCHEMES:
        raise UnsupportedMultiplicity(f"no truncated-product scheme for d={d}, u={u}")
    return len(TRUNCATED_SCHEMES[u]["products"])


# ---------------------------------------------------------------------------
# increasing degrees

def _weight_upto(q: int, d: int) -> int:
    return sum(k * count_places(q, k) for k in range(1, d + 1))


def nk_profile_deg(q: int, n: int) -> dict[int, int]:
    if n < 2:
        raise ValueError("n must be >= 2")
    W = 2 * n - 1
    d = 1
    while _weight_upto(q, d) < 2 * n + 1:
        d += 1
    r = W - _weight_upto(q, d - 1)
    N = {k: count_places(q, k) for k in range(1, d)}
    N[d] = max(0, -(-r // d))
    adj = (-r) % d
    if adj:
        N[adj] -= 1
    N = {k: v for k, v in N.items() if v}
    assert sum(k * v for k, v in N.items()) == W
    return N


def _degree_one_points(field: FieldConfig, count: int, us=()) -> list[EvalPoint]:
    """Lead point first, then finite rationals; ``us`` gives multiplicities in order."""
    if count < 1:
        return []
    finite = rational_places(field)[1:count]
    us = list(us) + [1] * (len(finite) - len(us))
    return [EvalPoint.lead()] + [EvalPoint.local(pl, u) for pl, u in zip(finite, us)]


def _points_from_profile(field: FieldConfig, profile: dict[int, int]) -> list[EvalPoint]:
    points = _degree_one_points(field, profile.get(1, 0))
    for k in sorted(profile):
        if k >= 2 and profile[k]:
            points += [EvalPoint.local(pl) for pl in first_places(field, k, profile[k])]
    return points


def build_spec_deg(field: FieldConfig, n: int) -> InterpolationSpec:
    profile = nk_profile_deg(field.q, n)
    if max(profile) >= n:
        raise InvalidSpec(f"degree profile {profile} reaches degree n = {n}")
    return InterpolationSpec(field, n, tuple(_points_from_profile(field, profile)), Strategy.DEG)


# ---------------------------------------------------------------------------
# degrees dividing d

@dataclass(frozen=True)
class DivTrace:
    d: int
    S: int
    ell: int
    delta: int
    profile: dict = dc_field(default_factory=dict)


def _proper_divisors(d: int) -> list[int]:
    return [k for k in range(1, d) if d % k == 0]


def div_degree(q: int, n: int) -> int:
    """Smallest d with q^d >= 2n."""
    d = 1
    while q ** d < 2 * n:
        d += 1
    return d


def div_profile(q: int, n: int) -> DivTrace:
    if not 2 * n > q + 2:
        raise PreconditionSmallN(f"n={n} must exceed q/2 + 1 for q={q}")
    d = div_degree(q, n)
    proper = _proper_divisors(d)
    ell = proper[-1] if proper else 1
    S = sum(k * count_places(q, k) for k in proper) - 1
    N = {1: q}
    for k in proper:
        if k != 1:
            N[k] = count_places(q, k)
    top, delta = divmod(2 * n - 1 - S, d)
    N[d] = N.get(d, 0) + top
    if N[d] > count_places(q, d):
        raise Infeasible(f"needs {N[d]} places of degree {d}, only {count_places(q, d)} exist")
    if delta and d % delta:
        N[delta] = N.get(delta, 0) + 1
    elif delta:
        if ell + delta == d and not N[d] < count_places(q, d):
            raise Infeasible(f"N_d = {N[d]} is not below B_d = {count_places(q, d)}")
        N[ell + delta] = N.get(ell + delta, 0) + 1
        N[ell] -= 1
    N = {k: v for k, v in sorted(N.items()) if v}
    assert sum(k * v for k, v in N.items()) == 2 * n - 1
    return DivTrace(d, S, ell, delta, N)


def div_applicable(q: int, n: int) -> bool:
    """True when the divisor construction exists and stays below degree n."""
    return 2 * n > q + 2 and div_degree(q, n) < n


def build_spec_div(field: FieldConfig, n: int) -> InterpolationSpec:
    profile = div_profile(field.q, n).profile
    return InterpolationSpec(field, n, tuple(_points_from_profile(field, profile)), Strategy.DIV)


# ---------------------------------------------------------------------------
# minimum-cost selection with derivative evaluations

@dataclass(frozen=True)
class OptPlan:
    cost: int
    use_lead: bool
    multiplicities: tuple[int, ...]  # one per finite rational used, descending
    counts: tuple[tuple[int, int], ...]  # (degree, count) for degree >= 2

    def profile(self) -> dict[int, int]:
        out = {1: int(self.use_lead) + len(self.multiplicities)}
        out.update(dict(self.counts))
        return {k: v for k, v in out.items() if v}


def _allowed_multiplicities(n: int, umax: int) -> list[int]:
    return [1] + [u for u in range(2, umax + 1) if u <= n - 2 and u in TRUNCATED_SCHEMES]


def _rational_options(q: int, n: int, umax: int, W: int):
    """(weight, cost, multiplicities) for every use of the degree-one items."""
    us = sorted(_allowed_multiplicities(n, umax), reverse=True)
    options = []

    def rec(i, left, chosen):
        if i == len(us):
            mults = tuple(chosen)
            w = sum(mults)
            if w <= W:
                options.append((w, sum(trunc_cost(1, u) for u in mults), mults))
            return
        for k in range(left + 1):
            if sum(chosen) + k * us[i] > W:
                break
            rec(i + 1, left - k, chosen + [us[i]] * k)

    rec(0, min(q, W), [])
    return options


@lru_cache(maxsize=None)
def opt_plan(q: int, n: int, umax: int = DEFAULT_UMAX) -> OptPlan:
    if n < 2:
        raise ValueError("n must be >= 2")
    W = 2 * n - 1
    # best[w] = (key, plan-parts)
    best: dict[int, tuple] = {}
    for use_lead in (True, False):
        for w, c, mults in _rational_options(q, n, umax, W - int(use_lead)):
            w += int(use_lead)
            c += int(use_lead)
            maxdeg = 1 if w else 0
            key = (c, maxdeg, max(mults, default=1), -int(use_lead), tuple(-u for u in mults))
            if w not in best or key < best[w][0]:
                best[w] = (key, (use_lead, mults, ()))
    for d in range(2, n):
        if d > W:
            break
        mu = opt_cost(q, d, umax)
        cap = min(count_places(q, d), W // d)
        new = dict(best)
        for w, (key, parts) in best.items():
            for k in range(1, cap + 1):
                w2 = w + k * d
                if w2 > W:
                    break
                key2 = (key[0] + k * mu, d) + key[2:] + ((d, -k),)
                if w2 not in new or key2 < new[w2][0]:
                    new[w2] = (key2, (parts[0], parts[1], parts[2] + ((d, k),)))
        best = new
    if W not in best:
        raise Infeasible(f"no exact-weight selection for q={q}, n={n}")
    key, (use_lead, mults, counts) = best[W]
    return OptPlan(key[0], use_lead, mults, counts)


def build_spec_opt(field: FieldConfig, n: int, umax: int = DEFAULT_UMAX) -> InterpolationSpec:
    plan = opt_plan(field.q, n, umax)
    points = []
    if plan.use_lead:
        points.append(EvalPoint.lead())
    finite = rational_places(field)[1:]
    points += [EvalPoint.local(pl, u) for pl, u in zip(finite, plan.multiplicities)]
    for d, k in plan.counts:
        points += [EvalPoint.local(pl) for pl in first_places(field, d, k)]
    return InterpolationSpec(field, n, tuple(points), Strategy.OPT, umax)


# ---------------------------------------------------------------------------
# costs

def sub_strategy(strategy: Strategy, q: int, k: int) -> Strategy:
    """Strategy used for the sub-algorithm of a degree-k place."""
    strategy = Strategy.parse(strategy)
    if strategy is Strategy.DIV and not div_applicable(q, k):
        return Strategy.DEG
    return strategy


def top_strategy(strategy: Strategy, q: int, n: int) -> Strategy:
    """Strategy actually used at the top level (div needs n > q/2 + 1)."""
    strategy = Strategy.parse(strategy)
    if strategy is Strategy.DIV and not 2 * n > q + 2:
        return Strategy.DEG
    return strategy


def build_spec(field: FieldConfig, n: int, strategy, umax: int = DEFAULT_UMAX) -> InterpolationSpec:
    strategy = top_strategy(strategy, field.q, n)
    if strategy is Strategy.DEG:
        return build_spec_deg(field, n)
    if strategy is Strategy.DIV:
        return build_spec_div(field, n)
    return build_spec_opt(field, n, umax)


def profile_for(q: int, n: int, strategy: Strategy, umax: int = DEFAULT_UMAX) -> dict[int, int]:
    strategy = top_strategy(strategy, q, n)
    if strategy is Strategy.DEG:
        return nk_profile_deg(q, n)
    if strategy is Strategy.DIV:
        return div_profile(q, n).profile
    return opt_plan(q, n, umax).profile()


@lru_cache(maxsize=None)
def deg_cost(q: int, n: int) -> int:
    if n == 1:
        return 1
    return sum(v * deg_cost(q, k) for k, v in nk_profile_deg(q, n).items())


@lru_cache(maxsize=None)
def opt_cost(q: int, n: int, umax: int = DEFAULT_UMAX) -> int:
    if n == 1:
        return 1
    return opt_plan(q, n, umax).cost


@lru_cache(maxsize=None)
def div_cost(q: int, n: int) -> int:
    """Cost of the top-level divisor construction (deg below its range)."""
    if n == 1:
        return 1
    if not 2 * n > q + 2:
        return deg_cost(q, n)
    return sum(v * sub_cost(Strategy.DIV, q, k) for k, v in div_profile(q, n).profile.items())


def sub_cost(strategy: Strategy, q: int, k: int, umax: int = DEFAULT_UMAX) -> int:
    """Cost of the sub-algorithm for one degree-k place under ``strategy``."""
    if k == 1:
        return 1
    s = sub_strategy(strategy, q, k)
    if s is Strategy.DEG:
        return deg_cost(q, k)
    if s is Strategy.DIV:
        return div_cost(q, k)
    return opt_cost(q, k, umax)


def strategy_cost(q: int, n: int, strategy, umax: int = DEFAULT_UMAX) -> int:
    strategy = Strategy.parse(strategy)
    if n == 1:
        return 1
    if strategy is Strategy.DEG:
        return deg_cost(q, n)
    if strategy is Strategy.DIV:
        return div_cost(q, n)
    return opt_cost(q, n, umax)


def point_cost(point: EvalPoint, strategy, q: int, umax: int = DEFAULT_UMAX) -> int:
    if point.is_lead:
        return 1
    if point.degree == 1:
        return trunc_cost(1, point.u)
    return sub_cost(Strategy.parse(strategy), q, point.degree, umax)
