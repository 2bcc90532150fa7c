import math

import pytest

from chudnovsky import errors
from chudnovsky.bounds import (bound_report, iterated_log, iterated_log_threshold, lemma2_check,
                               theorem9_bound)
from chudnovsky.strategy import deg_cost

SQRT2 = math.sqrt(2)


def test_iterated_log_sqrt2():
    assert iterated_log(SQRT2, 5) == 0
    assert iterated_log(SQRT2, 6) == 2
    assert iterated_log(SQRT2, 12) == 4


def test_iterated_log_trivial():
    assert iterated_log(math.sqrt(3), 1) == 0


def test_threshold():
    # sqrt(2)^x = x has largest root 4
    assert iterated_log_threshold(SQRT2) == 5
    assert iterated_log_threshold(2.0) == 1
    assert iterated_log_threshold(math.sqrt(3)) == 1
    with pytest.raises(errors.BaseOutOfRange):
        iterated_log_threshold(1.0)


def test_iterated_log_monotone():
    for base in (SQRT2, math.sqrt(3), 2.0, 3.0):
        vals = [iterated_log(base, n) for n in range(1, 3000)]
        assert vals == sorted(vals)


def test_theorem9_examples():
    assert theorem9_bound(2, 6) == pytest.approx(14 / 5 * 6 * 16 ** 4)
    assert theorem9_bound(2, 6) == pytest.approx(1101004.8)
    k = iterated_log(math.sqrt(3), 4)
    assert theorem9_bound(3, 2) == pytest.approx(2 * 18 ** k)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_theorem9_above_trivial_floor(q):
    for n in range(2, 60):
        assert theorem9_bound(q, n) >= 2 * n - 1


@pytest.mark.parametrize("q", [2, 3, 4])
def test_deg_between_bounds(q):
    for n in range(2, 41):
        assert 2 * n - 1 <= deg_cost(q, n) <= theorem9_bound(q, n)


@pytest.mark.parametrize("q,d", [(2, 1), (2, 10), (9, 4)])
def test_lemma2_examples(q, d):
    assert lemma2_check(q, d)


def test_lemma2_sweep():
    for q in (2, 3, 4, 5, 7, 8, 9):
        for d in range(1, 40):
            assert lemma2_check(q, d)


def test_lemma2_against_floats():
    for q in (2, 3, 4, 5):
        for d in range(1, 20):
            lhs = d * q ** (d / 2 + 1) - q ** d
            assert lemma2_check(q, d) == (lhs <= q ** (d + 1) + 1e-9 * q ** (d + 1))


def test_bound_report():
    rep = bound_report(2, 6)
    assert rep.ok
    assert rep.counts == {"deg": 18, "div": 22, "opt": 18}
    assert "sandwich" in rep.text()
    assert rep.as_dict()["ok"] is True


def test_bound_report_omits_inapplicable_div():
    assert "div" not in bound_report(4, 3).counts
