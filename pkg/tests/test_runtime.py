import numpy as np
import pytest
from hypothesis import given, settings, strategies as hs

from chudnovsky import errors
from chudnovsky.compiler import compile_algorithm
from chudnovsky.field_core import Poly, field_make
from chudnovsky.runtime import (ExtElement, multiply, multiply_batch, oracle_multiply,
                                oracle_multiply_batch, random_elements, splitmix64, verify,
                                verify_algorithm)

from conftest import field_of


def P(field, *coeffs):
    return Poly(field, [field.element(c) for c in coeffs])


def ext(Q, *coeffs):
    return ExtElement.from_poly(Q, P(Q.field, *coeffs))


def test_x_squared_q2():
    F = field_make(2)
    Q = P(F, 1, 1, 1)
    alg = compile_algorithm(F, 2, "deg", Q=Q)
    z, trace = multiply(alg, ext(Q, 0, 1), ext(Q, 0, 1))
    assert z == ext(Q, 1, 1)
    assert trace.total == 3
    assert oracle_multiply(F, Q, ext(Q, 0, 1), ext(Q, 0, 1)) == ext(Q, 1, 1)


def test_oracle_reduction_q3():
    F = field_make(3)
    Q = P(F, 1, 2, 0, 1)
    assert oracle_multiply(F, Q, ext(Q, 0, 0, 1), ext(Q, 0, 1)) == ext(Q, 2, 1)


def test_oracle_identity():
    F = field_make(5)
    Q = P(F, 2, 0, 1)  # x^2 + 2 has no root mod 5
    x = ext(Q, 3, 4)
    assert oracle_multiply(F, Q, x, ext(Q, 1)) == x


@pytest.mark.parametrize("spec,n,strategy", [("2", 5, "deg"), ("3", 4, "opt"),
                                             ("2^2", 7, "div"), ("3^2", 3, "deg")])
def test_multiply_by_one(spec, n, strategy):
    F = field_of(spec)
    alg = compile_algorithm(F, n, strategy)
    X = random_elements(F, 100, n, seed=3)
    one = np.zeros_like(X)
    one[:, 0] = 1
    Z, _ = multiply_batch(alg, X, one)
    assert np.array_equal(Z, X)


def test_q3_n6_against_oracle():
    F = field_make(3)
    alg = compile_algorithm(F, 6, "deg")
    X = random_elements(F, 1000, 12, seed=11)
    Z, trace = multiply_batch(alg, X[:, :6], X[:, 6:])
    assert np.array_equal(Z, oracle_multiply_batch(F, alg.Q, X[:, :6], X[:, 6:]))
    assert trace.total == 16
    assert sum(trace.breakdown) == 16


def test_batch_oracle_matches_polynomial_oracle():
    F = field_of("3^2")
    alg = compile_algorithm(F, 4, "deg")
    X = random_elements(F, 50, 8, seed=1)
    Z = oracle_multiply_batch(F, alg.Q, X[:, :4], X[:, 4:])
    for row in range(50):
        x = ExtElement.from_indices(alg.Q, X[row, :4])
        y = ExtElement.from_indices(alg.Q, X[row, 4:])
        assert oracle_multiply(F, alg.Q, x, y).indices == tuple(Z[row])


@pytest.mark.parametrize("spec,n,strategy,count", [("2", 2, "deg", 3), ("2^2", 3, "deg", 5),
                                                   ("2", 5, "opt", 14)])
def test_verify_examples(spec, n, strategy, count):
    rep = verify(field_of(spec), n, strategy, trials=1000, seed=42)
    assert rep.passed and rep.bilinear_count == count


@pytest.mark.parametrize("spec", ["2", "3", "2^2", "5"])
@pytest.mark.parametrize("strategy", ["deg", "div", "opt"])
def test_verify_small_sweep(spec, strategy):
    F = field_of(spec)
    for n in range(2, 12):
        rep = verify(F, n, strategy, trials=200, seed=n)
        assert rep.passed, rep.lines()


def test_trace_breakdown_matches_schedule():
    F = field_make(2)
    alg = compile_algorithm(F, 10, "opt")
    x = ExtElement.from_indices(alg.Q, [1] * 10)
    _, trace = multiply(alg, x, x)
    assert trace.breakdown == tuple(e.cost for e in alg.schedule)


def test_wrong_operand_rejected():
    F = field_make(2)
    alg = compile_algorithm(F, 3, "deg")
    other = P(F, 1, 0, 1, 1) if alg.Q != P(F, 1, 0, 1, 1) else P(F, 1, 1, 0, 1)
    with pytest.raises(errors.ConfigMismatch):
        multiply(alg, ext(other, 1), ext(alg.Q, 1))


def test_ext_element_length_checked():
    F = field_make(2)
    Q = P(F, 1, 1, 1)
    with pytest.raises(errors.DegreeMismatch):
        ExtElement(F, Q, (F.one,))


@settings(max_examples=60)
@given(hs.sampled_from(["2", "3", "2^2", "5"]), hs.integers(2, 9), hs.integers(0, 2 ** 31))
def test_commutative_and_distributive(spec, n, seed):
    F = field_of(spec)
    alg = compile_algorithm(F, n, "opt")
    R = random_elements(F, 20, 3 * n, seed)
    X, Y, W = R[:, :n], R[:, n:2 * n], R[:, 2 * n:]
    add = F.np_tables.add
    xy, _ = multiply_batch(alg, X, Y)
    yx, _ = multiply_batch(alg, Y, X)
    assert np.array_equal(xy, yx)
    lhs, _ = multiply_batch(alg, X, add[Y, W])
    xw, _ = multiply_batch(alg, X, W)
    assert np.array_equal(lhs, add[xy, xw])


# ---- randomness ----------------------------------------------------------

def test_splitmix64_reference_value():
    # first output of splitmix64 seeded with 0
    _, z = splitmix64(np.array([0], dtype=np.uint64))
    assert int(z[0]) == 0xE220A8397B1DCDAF


def test_random_elements_deterministic_and_in_range():
    F = field_of("3^2")
    a = random_elements(F, 30, 5, seed=7)
    assert np.array_equal(a, random_elements(F, 30, 5, seed=7))
    assert a.min() >= 0 and a.max() < F.q
    assert not np.array_equal(a, random_elements(F, 30, 5, seed=8))


def test_trial_streams_are_prefix_stable():
    F = field_make(5)
    assert np.array_equal(random_elements(F, 10, 4, 1)[3], random_elements(F, 4, 4, 1)[3])


def test_verify_report_lines():
    rep = verify_algorithm(compile_algorithm(field_make(2), 2), trials=10, seed=0)
    assert rep.lines()[0].startswith("PASS q=2 n=2 strategy=deg")
