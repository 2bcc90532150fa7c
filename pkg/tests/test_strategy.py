import itertools

import pytest

from chudnovsky import errors
from chudnovsky.evaluation import EvalPoint
from chudnovsky.field_core import Poly, field_make
from chudnovsky.places import Place, count_places, rational_places
from chudnovsky.reference import DEG_COUNTS, OPT_COUNTS
from chudnovsky.strategy import (TRUNCATED_SCHEMES, InterpolationSpec, Strategy, build_spec,
                                 build_spec_deg, build_spec_div, build_spec_opt, deg_cost,
                                 div_applicable, div_profile, nk_profile_deg, opt_cost, opt_plan,
                                 strategy_cost, trunc_cost)

from conftest import field_of


def P(field, *coeffs):
    return Poly(field, [field.element(c) for c in coeffs])


def nonzero(profile):
    return {k: v for k, v in profile.items() if v}


# ---- Deg -----------------------------------------------------------------

@pytest.mark.parametrize("q,n,expected", [
    (2, 4, {1: 2, 2: 1, 3: 1}),
    (2, 5, {1: 3, 2: 0, 3: 2}),
    (3, 6, {1: 4, 2: 2, 3: 1}),
])
def test_nk_profile_examples(q, n, expected):
    assert nk_profile_deg(q, n) == nonzero(expected)


def test_deg_spec_karatsuba_points():
    F = field_make(2)
    spec = build_spec_deg(F, 2)
    inf, P0, P1 = rational_places(F)
    assert spec.points == (EvalPoint.lead(), EvalPoint.local(P0), EvalPoint.local(P1))


def test_deg_spec_q3_n3():
    F = field_make(3)
    spec = build_spec_deg(F, 3)
    assert spec.profile() == {1: 3, 2: 1}
    assert spec.places()[-1] == Place(P(F, 1, 0, 1))


def test_deg_spec_uses_all_rationals_for_q4_n3():
    F = field_of("2^2")
    spec = build_spec_deg(F, 3)
    assert spec.profile() == {1: 5}
    assert spec.cost() == 5


@pytest.mark.parametrize("q", [2, 3, 4])
def test_deg_cost_matches_reference(q):
    for n, ref in DEG_COUNTS[q].items():
        assert deg_cost(q, n) == ref


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_deg_profile_invariants(q):
    for n in range(2, 40):
        prof = nk_profile_deg(q, n)
        assert sum(k * c for k, c in prof.items()) == 2 * n - 1
        assert all(c <= count_places(q, k) for k, c in prof.items())
        # below the top degree every place is used, except one dropped place at most
        top = max(prof)
        short = [count_places(q, k) - prof.get(k, 0) for k in range(1, top)]
        assert sorted(short)[-1:] in ([], [0], [1]) and sum(short) <= 1


# ---- Div -----------------------------------------------------------------

def test_div_example_q2_n6():
    assert div_profile(2, 6).profile == {1: 2, 2: 1, 3: 1, 4: 1}


def test_div_example_q2_n8():
    tr = div_profile(2, 8)
    assert (tr.d, tr.S) == (4, 4)
    assert tr.profile == {1: 2, 2: 1, 3: 1, 4: 2}


def test_div_q3_n14_degree_choice():
    # 3^3 = 27 < 28 = 2n, so the first admissible degree is 4
    tr = div_profile(3, 14)
    assert tr.d == 4
    assert sum(k * c for k, c in tr.profile.items()) == 27


def test_div_requires_large_n():
    with pytest.raises(errors.PreconditionSmallN):
        div_profile(4, 3)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_div_profile_invariants(q):
    for n in range(q // 2 + 2, 80):
        tr = div_profile(q, n)
        assert q ** tr.d >= 2 * n
        assert sum(k * c for k, c in tr.profile.items()) == 2 * n - 1
        for k, c in tr.profile.items():
            assert c <= count_places(q, k)


def test_div_applicable():
    assert not div_applicable(4, 3)
    assert div_applicable(2, 6)


# ---- Opt -----------------------------------------------------------------

@pytest.mark.parametrize("q,n,cost", [(2, 4, 10), (3, 6, 15), (2, 7, 22), (2, 5, 14)])
def test_opt_examples(q, n, cost):
    assert opt_cost(q, n) == cost


def test_opt_q2_n4_decomposition():
    F = field_make(2)
    spec = build_spec_opt(F, 4)
    assert spec.cost() == 10
    assert sorted(pt.u for pt in spec.points if pt.degree == 1 and not pt.is_lead) == [2, 2]


def test_opt_q3_n6_plan():
    plan = opt_plan(3, 6)
    assert plan.cost == 15
    assert plan.use_lead
    assert sorted(plan.multiplicities) == [1, 1, 2]


@pytest.mark.parametrize("q", [2, 3, 4])
def test_opt_never_worse(q):
    for n in range(2, 19):
        c = opt_cost(q, n)
        assert c <= deg_cost(q, n)
        ref = OPT_COUNTS[q].get(n)
        if ref is not None:
            assert c <= ref


def test_opt_respects_multiplicity_bound():
    for q, n in itertools.product([2, 3, 4], range(2, 25)):
        spec = build_spec_opt(field_of(str(q)), n)
        assert all(pt.u < n - 1 or pt.u == 1 for pt in spec.points)
        assert all(pt.u <= 3 for pt in spec.points)


def test_opt_umax_one_never_uses_multiplicity():
    for n in range(2, 12):
        spec = build_spec_opt(field_make(2), n, umax=1)
        assert all(pt.u == 1 for pt in spec.points)


# ---- truncated products --------------------------------------------------

def test_trunc_costs():
    assert [trunc_cost(1, u) for u in (1, 2, 3)] == [1, 3, 5]
    with pytest.raises(errors.UnsupportedMultiplicity):
        trunc_cost(1, 4)
    with pytest.raises(errors.UnsupportedMultiplicity):
        trunc_cost(2, 2)


def _apply_scheme(F, u, a, b):
    sch = TRUNCATED_SCHEMES[u]
    prods = []
    for I, J in sch["products"]:
        prods.append(sum((a[i] for i in I), F.zero) * sum((b[j] for j in J), F.zero))
    out = []
    for combo in sch["outputs"]:
        acc = F.zero
        for j, sign in combo:
            acc = acc + prods[j] if sign > 0 else acc - prods[j]
        out.append(acc)
    return out


@pytest.mark.parametrize("spec", ["2", "3", "2^2", "5"])
@pytest.mark.parametrize("u", [1, 2, 3])
def test_truncated_schemes_exhaustive(spec, u):
    F = field_of(spec)
    els = list(F.elements())
    for a in itertools.product(els, repeat=u):
        for b in itertools.product(els, repeat=u):
            expected = [sum((a[i] * b[k - i] for i in range(k + 1)), F.zero) for k in range(u)]
            assert _apply_scheme(F, u, a, b) == expected
        if F.q ** (2 * u) > 5000:
            break


# ---- validation & dispatch ----------------------------------------------

def test_spec_weight_must_match():
    F = field_make(2)
    with pytest.raises(errors.InvalidSpec):
        InterpolationSpec(F, 2, [EvalPoint.lead()], Strategy.DEG)


def test_spec_rejects_repeated_place():
    F = field_make(3)
    P0 = rational_places(F)[1]
    with pytest.raises(errors.InvalidSpec):
        InterpolationSpec(F, 2, [EvalPoint.lead(), EvalPoint.local(P0), EvalPoint.local(P0)],
                          Strategy.DEG)


def test_spec_rejects_large_multiplicity():
    F = field_make(3)
    inf, P0, P1, P2 = rational_places(F)
    with pytest.raises(errors.InvalidSpec):
        InterpolationSpec(F, 2, [EvalPoint.lead(), EvalPoint.local(P0, 2)], Strategy.OPT)


def test_strategy_parse():
    assert Strategy.parse("DIV") is Strategy.DIV
    with pytest.raises(ValueError):
        Strategy.parse("fast")


def test_div_top_level_falls_back_when_not_applicable():
    F = field_of("2^2")
    assert build_spec(F, 3, "div").cost() == 5


@pytest.mark.parametrize("strategy", ["deg", "div", "opt"])
def test_specs_are_deterministic(strategy):
    F = field_make(3)
    for n in range(2, 20):
        a = build_spec(F, n, strategy)
        b = build_spec(F, n, strategy)
        assert a.points == b.points
        assert a.cost() == strategy_cost(3, n, strategy)


def test_div_spec_matches_profile():
    F = field_make(2)
    for n in range(3, 40):
        spec = build_spec_div(F, n)
        assert spec.profile() == div_profile(2, n).profile
