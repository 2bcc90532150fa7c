import copy
import json

import numpy as np
import pytest

from chudnovsky import errors
from chudnovsky.compiler import (bilinear_complexity, compile_algorithm, default_Q,
                                 export_algorithm, export_json, import_algorithm, import_json)
from chudnovsky.field_core import Poly, field_make
from chudnovsky.linalg import identity, mat_inverse, mat_mul
from chudnovsky.reference import DEG_COUNTS
from chudnovsky.strategy import strategy_cost

from conftest import field_of


def P(field, *coeffs):
    return Poly(field, [field.element(c) for c in coeffs])


@pytest.mark.parametrize("spec,n,count", [("2", 2, 3), ("3", 6, 16), ("2^2", 3, 5)])
def test_compile_counts(spec, n, count):
    assert compile_algorithm(field_of(spec), n, "deg").bilinear_count == count


@pytest.mark.parametrize("q,n,count", [(2, 18, 90), (3, 17, 60), (4, 15, 43)])
def test_bilinear_complexity_examples(q, n, count):
    assert bilinear_complexity(q, n, "deg") == count


@pytest.mark.parametrize("spec", ["2", "3", "2^2"])
def test_compiled_counts_match_reference(spec):
    F = field_of(spec)
    for n in range(2, 19):
        assert compile_algorithm(F, n, "deg").bilinear_count == DEG_COUNTS[F.q][n]


@pytest.mark.parametrize("spec", ["2", "3", "2^2", "5"])
def test_karatsuba_forms(spec):
    F = field_of(spec)
    alg = compile_algorithm(F, 2, "deg")
    assert alg.bilinear_count == 3
    assert [e.kind for e in alg.schedule] == ["scalar"] * 3
    forms = {tuple(int(v) for v in row) for row in alg.evalL}
    assert forms == {(1, 0), (0, 1), (1, 1)}


@pytest.mark.parametrize("spec", ["2", "3", "2^2"])
@pytest.mark.parametrize("strategy", ["deg", "div", "opt"])
def test_recon_inverts_evaluation(spec, strategy):
    F = field_of(spec)
    for n in range(2, 14):
        alg = compile_algorithm(F, n, strategy)
        for core in [alg.core, *alg.cores.values()]:
            E = core.evaluation_full()
            N = 2 * core.n - 1
            assert np.array_equal(mat_mul(F, core.recon, E), identity(N))


def test_static_count_is_schedule_sum():
    F = field_make(2)
    for n in range(2, 30):
        for s in ("deg", "div", "opt"):
            alg = compile_algorithm(F, n, s)
            assert alg.bilinear_count == sum(e.cost for e in alg.schedule)
            assert alg.bilinear_count == strategy_cost(2, n, s)


def test_single_core_for_q3_n3():
    alg = compile_algorithm(field_make(3), 3, "deg")
    assert list(alg.cores) == [2]
    doc = export_algorithm(alg)
    assert list(doc["cores"]) == ["2"]


def test_default_Q_avoids_support():
    F = field_make(2)
    alg = compile_algorithm(F, 2, "deg")
    assert alg.Q == P(F, 1, 1, 1)
    alg = compile_algorithm(F, 3, "deg")
    support = {pl.minpoly for pl in alg.spec.places()}
    assert alg.Q.degree == 3 and alg.Q not in support
    assert alg.Q == default_Q(F, 3, support)


def test_Q_in_support_rejected():
    F = field_make(2)
    # the (2, 3) Div spec interpolates at a place of degree 3
    alg = compile_algorithm(F, 3, "div")
    place3 = [pl.minpoly for pl in alg.spec.places() if pl.degree == 3][0]
    assert alg.Q != place3
    with pytest.raises(errors.QInSupport):
        compile_algorithm(F, 3, "div", Q=place3)


def test_Q_must_be_irreducible_of_degree_n():
    F = field_make(2)
    with pytest.raises(errors.InvalidSpec):
        compile_algorithm(F, 2, "deg", Q=P(F, 1, 0, 1))
    with pytest.raises(errors.InvalidSpec):
        compile_algorithm(F, 3, "deg", Q=P(F, 1, 1, 1))


def test_n_below_two_rejected():
    with pytest.raises(ValueError):
        compile_algorithm(field_make(2), 1)


def test_compile_is_deterministic():
    F = field_of("3^2")
    a = export_json(compile_algorithm(F, 7, "opt"))
    b = export_json(compile_algorithm(F, 7, "opt"))
    assert a == b


def test_sub_cores_are_shared():
    F = field_make(2)
    alg = compile_algorithm(F, 9, "deg")
    subs = [e for e in alg.schedule if e.kind == "sub"]
    by_degree = {}
    for e in subs:
        by_degree.setdefault(e.degree, set()).add(id(alg.core.subcores[e.degree]))
    assert all(len(v) == 1 for v in by_degree.values())


# ---- JSON ----------------------------------------------------------------

@pytest.mark.parametrize("spec,n,strategy", [("2", 2, "deg"), ("3", 6, "deg"),
                                             ("2", 9, "opt"), ("2^2", 8, "div"), ("3^2", 5, "deg")])
def test_json_round_trip(spec, n, strategy):
    alg = compile_algorithm(field_of(spec), n, strategy)
    text = export_json(alg)
    back = import_json(text)
    assert back.Q == alg.Q and back.n == alg.n and back.field == alg.field
    assert back.bilinear_count == alg.bilinear_count
    assert np.array_equal(back.recon, alg.recon)
    assert export_json(back) == text


def test_tampered_recon_rejected():
    doc = export_algorithm(compile_algorithm(field_make(2), 2))
    bad = copy.deepcopy(doc)
    bad["recon"]["data"][0] = [1 - bad["recon"]["data"][0][0]]
    with pytest.raises(errors.SchemaViolation):
        import_algorithm(bad)


def test_tampered_count_rejected():
    doc = export_algorithm(compile_algorithm(field_make(3), 4))
    doc["bilinear_count"] += 1
    with pytest.raises(errors.SchemaViolation):
        import_algorithm(doc)


def test_missing_field_rejected():
    doc = export_algorithm(compile_algorithm(field_make(2), 3))
    del doc["evalL"]
    with pytest.raises(errors.SchemaViolation):
        import_algorithm(doc)


def test_field_mismatch_rejected():
    doc = export_algorithm(compile_algorithm(field_make(2), 2))
    doc["Q"] = [[1, 0], [1, 0], [1, 0]]
    with pytest.raises((errors.FieldMismatch, errors.SchemaViolation)):
        import_algorithm(doc)


def test_not_json():
    with pytest.raises(errors.SchemaViolation):
        import_json("{")


def test_matrix_entries_are_digit_arrays():
    doc = json.loads(export_json(compile_algorithm(field_of("2^2"), 3)))
    assert all(len(v) == 2 for v in doc["evalL"]["data"])


# ---- linear algebra ------------------------------------------------------

def test_mat_inverse_singular():
    F = field_make(3)
    with pytest.raises(errors.SingularEvaluation):
        mat_inverse(F, np.array([[1, 2], [2, 1]]))


def test_mat_inverse_random():
    F = field_of("2^3")
    rng = np.random.default_rng(5)
    done = 0
    while done < 20:
        M = rng.integers(0, F.q, size=(5, 5))
        try:
            Minv = mat_inverse(F, M)
        except errors.SingularEvaluation:
            continue
        assert np.array_equal(mat_mul(F, M, Minv), identity(5))
        done += 1
