"""Compile an interpolation specification into a multiplication algorithm for F_{q^n}.

A :class:`DegreeCore` multiplies two polynomials of degree < n and returns the
full product (degree <= 2n - 2): evaluate both at the spec points, multiply the
evaluation data point by point, interpolate with ``recon``. Places of degree
d >= 2 delegate their product to the shared degree-d core and reduce the result
modulo their own minimal polynomial. A :class:`CompiledAlgorithm` is the
degree-n core plus reduction modulo Q.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Optional

import numpy as np

from . import strategy as st
from .errors import (
    FieldMismatch,
    InvalidSpec,
    NoIrreducibleFound,
    QInSupport,
    SchemaViolation,
    SingularEvaluation,
)
from .evaluation import EvalPoint, eval_row_block, evaluation_matrix
from .field_core import (
    FieldConfig,
    Poly,
    field_make,
    irreducibles,
    poly_is_irreducible,
)
from .linalg import LinearMap, identity, mat_inverse, mat_mul
from .places import Place
from .strategy import InterpolationSpec, Strategy

SCHEMA_VERSION = 1


@dataclass(frozen=True, eq=False)
class ScheduleEntry:
    """How the product at one spec point is formed.

    ``kind`` is ``"scalar"``, ``"truncated"`` (Hasse block of length u) or
    ``"sub"`` (degree-d place through the shared core, then ``reduce``).
    """

    kind: str
    offset: int
    width: int
    cost: int
    u: int = 1
    degree: int = 1
    reduce: Optional[np.ndarray] = None


@dataclass(frozen=True, eq=False)
class DegreeCore:
    field: FieldConfig
    n: int
    spec: InterpolationSpec
    evalL: np.ndarray
    recon: np.ndarray
    schedule: tuple[ScheduleEntry, ...]
    subcores: dict  # degree -> DegreeCore
    bilinear_count: int

    @cached_property
    def evalL_map(self) -> LinearMap:
        return LinearMap(self.field, self.evalL)

    @cached_property
    def recon_map(self) -> LinearMap:
        return LinearMap(self.field, self.recon)

    @cached_property
    def reduce_maps(self) -> tuple:
        return tuple(LinearMap(self.field, e.reduce) if e.reduce is not None else None
                     for e in self.schedule)

    def evaluation_full(self) -> np.ndarray:
        """The (2n-1) x (2n-1) evaluation matrix that ``recon`` inverts."""
        return evaluation_matrix(self.spec.points, 2 * self.n - 1, self.field)

    def all_cores(self) -> dict:
        """Every sub-core reachable from this one, keyed by degree."""
        out = {}
        stack = list(self.subcores.values())
        while stack:
            c = stack.pop()
            if c.n in out:
                if out[c.n] is not c:
                    raise AssertionError(f"two distinct cores for degree {c.n}")
                continue
            out[c.n] = c
            stack.extend(c.subcores.values())
        return dict(sorted(out.items()))


@dataclass(frozen=True, eq=False)
class CompiledAlgorithm:
    field: FieldConfig
    n: int
    Q: Poly
    strategy: Strategy
    umax: int
    core: DegreeCore
    reduceQ: np.ndarray

    @property
    def spec(self) -> InterpolationSpec:
        return self.core.spec

    @property
    def evalL(self) -> np.ndarray:
        return self.core.evalL

    @property
    def recon(self) -> np.ndarray:
        return self.core.recon

    @property
    def schedule(self) -> tuple[ScheduleEntry, ...]:
        return self.core.schedule

    @property
    def bilinear_count(self) -> int:
        return self.core.bilinear_count

    @property
    def cores(self) -> dict:
        return self.core.all_cores()

    @cached_property
    def reduceQ_map(self) -> LinearMap:
        return LinearMap(self.field, self.reduceQ)


# ---------------------------------------------------------------------------
# construction

def _schedule_for(spec: InterpolationSpec, sub_core) -> tuple[tuple[ScheduleEntry, ...], dict]:
    entries = []
    subcores = {}
    offset = 0
    for pt in spec.points:
        w = pt.weight
        if pt.is_lead or (pt.degree == 1 and pt.u == 1):
            entries.append(ScheduleEntry("scalar", offset, w, 1))
        elif pt.degree == 1:
            entries.append(ScheduleEntry("truncated", offset, w, st.trunc_cost(1, pt.u), u=pt.u))
        else:
            d = pt.degree
            core = subcores.get(d) or sub_core(d)
            subcores[d] = core
            red = eval_row_block(EvalPoint.local(pt.place), 2 * d - 1)
            entries.append(ScheduleEntry("sub", offset, w, core.bilinear_count,
                                         degree=d, reduce=red))
        offset += w
    return tuple(entries), subcores


def build_core(spec: InterpolationSpec, sub_core) -> DegreeCore:
    """Assemble the matrices for ``spec``; ``sub_core(d)`` supplies degree-d cores."""
    field, n = spec.field, spec.n
    evalL = evaluation_matrix(spec.points, n, field)
    E = evaluation_matrix(spec.points, 2 * n - 1, field)
    recon = mat_inverse(field, E)
    schedule, subcores = _schedule_for(spec, sub_core)
    count = sum(e.cost for e in schedule)
    return DegreeCore(field, n, spec, evalL, recon, schedule, subcores, count)


@lru_cache(maxsize=None)
def _core(field: FieldConfig, d: int, strategy: Strategy, umax: int) -> DegreeCore:
    # cores for sub-degrees; strategy is already resolved for degree d
    spec = st.build_spec(field, d, strategy, umax)
    return build_core(spec, lambda k: _sub_core(field, k, strategy, umax))


def _sub_core(field, k, parent_strategy, umax):
    return _core(field, k, st.sub_strategy(parent_strategy, field.q, k), umax)


def default_Q(field: FieldConfig, n: int, exclude=()) -> Poly:
    excluded = set(exclude)
    for f in irreducibles(field, n):
        if f not in excluded:
            return f
    raise NoIrreducibleFound(f"no usable irreducible of degree {n}")


def compile_algorithm(field: FieldConfig, n: int, strategy="deg", Q: Poly | None = None,
                      umax: int = st.DEFAULT_UMAX) -> CompiledAlgorithm:
    """Build the multiplication algorithm for F_q[x]/(Q) with deg Q = n."""
    if n < 2:
        raise ValueError("n must be >= 2")
    strategy = Strategy.parse(strategy)
    spec = st.build_spec(field, n, strategy, umax)
    support = [pl.minpoly for pl in spec.places()]
    if Q is None:
        Q = default_Q(field, n, support)
    else:
        if Q.field != field:
            raise FieldMismatch("Q is over a different field")
        if Q.degree != n or not poly_is_irreducible(Q):
            raise InvalidSpec(f"Q must be monic irreducible of degree {n}")
        if Q in support:
            raise QInSupport(f"Q = {Q} is one of the interpolation places")
    core = build_core(spec, lambda k: _sub_core(field, k, strategy, umax))
    reduceQ = eval_row_block(EvalPoint.local(Place(Q)), 2 * n - 1)
    return CompiledAlgorithm(field, n, Q, strategy, umax, core, reduceQ)


def bilinear_complexity(q: int | FieldConfig, n: int, strategy="deg",
                        umax: int = st.DEFAULT_UMAX) -> int:
    """Bilinear count of the construction, without building any matrix."""
    if isinstance(q, FieldConfig):
        q = q.q
    if n < 1:
        raise ValueError("n must be >= 1")
    return st.strategy_cost(q, n, strategy, umax)


# ---------------------------------------------------------------------------
# JSON

def _enc_elem(field, idx):
    return list(field.digits_of(int(idx)))


def _enc_matrix(field, M):
    M = np.asarray(M)
    return {"rows": int(M.shape[0]), "cols": int(M.shape[1]),
            "data": [_enc_elem(field, v) for v in M.ravel()]}


def _enc_point(field, pt):
    if pt.is_lead:
        return {"kind": "lead", "place": "infinity", "u": 1}
    return {"kind": "local", "place": [_enc_elem(field, c) for c in pt.place.minpoly.indices],
            "u": pt.u}


def _enc_core(core: DegreeCore) -> dict:
    f = core.field
    sched = []
    for e in core.schedule:
        item = {"kind": e.kind, "offset": e.offset, "width": e.width, "cost": e.cost}
        if e.kind == "truncated":
            item["u"] = e.u
        if e.kind == "sub":
            item["degree"] = e.degree
            item["reduce"] = _enc_matrix(f, e.reduce)
        sched.append(item)
    return {
        "n": core.n,
        "strategy": str(core.spec.strategy),
        "spec": [_enc_point(f, pt) for pt in core.spec.points],
        "evalL": _enc_matrix(f, core.evalL),
        "recon": _enc_matrix(f, core.recon),
        "schedule": sched,
        "bilinear_count": core.bilinear_count,
    }


def export_algorithm(alg: CompiledAlgorithm) -> dict:
    f = alg.field
    doc = {"version": SCHEMA_VERSION, "p": f.p, "m": f.m, "modulus": list(f.modulus),
           "n": alg.n, "strategy": str(alg.strategy), "umax": alg.umax,
           "Q": [_enc_elem(f, c) for c in alg.Q.indices]}
    doc.update({k: v for k, v in _enc_core(alg.core).items() if k != "n"})
    doc["spec_strategy"] = doc.pop("strategy")
    doc["strategy"] = str(alg.strategy)
    doc["reduceQ"] = _enc_matrix(f, alg.reduceQ)
    doc["cores"] = {str(d): _enc_core(c) for d, c in alg.cores.items()}
    return doc


def export_json(alg: CompiledAlgorithm) -> str:
    return json.dumps(export_algorithm(alg), separators=(",", ":"))


def _need(doc, key, kind=None):
    if not isinstance(doc, dict) or key not in doc:
        raise SchemaViolation(f"missing field {key!r}")
    v = doc[key]
    if kind is not None and not isinstance(v, kind):
        raise SchemaViolation(f"field {key!r} has wrong type")
    return v


def _dec_elem(field, digits):
    if not isinstance(digits, list) or len(digits) != field.m:
        raise FieldMismatch(f"element {digits!r} does not have {field.m} digits")
    if any(not isinstance(d, int) or not 0 <= d < field.p for d in digits):
        raise FieldMismatch(f"element {digits!r} has digits outside [0, {field.p})")
    return field.index_of(digits)


def _dec_matrix(field, obj, shape=None):
    rows, cols = _need(obj, "rows", int), _need(obj, "cols", int)
    data = _need(obj, "data", list)
    if len(data) != rows * cols:
        raise SchemaViolation("matrix data length does not match its shape")
    if shape is not None and (rows, cols) != shape:
        raise SchemaViolation(f"matrix shape {(rows, cols)} != expected {shape}")
    return np.array([_dec_elem(field, v) for v in data], dtype=np.int64).reshape(rows, cols)


def _dec_spec(field, n, items, strategy, umax):
    if not isinstance(items, list):
        raise SchemaViolation("spec must be a list")
    points = []
    for it in items:
        kind = _need(it, "kind", str)
        u = _need(it, "u", int)
        if kind == "lead":
            points.append(EvalPoint.lead())
        elif kind == "local":
            mp = Poly(field, [_dec_elem(field, c) for c in _need(it, "place", list)])
            if not mp.is_monic() or not poly_is_irreducible(mp):
                raise SchemaViolation(f"place {mp} is not monic irreducible")
            points.append(EvalPoint.local(Place(mp), u))
        else:
            raise SchemaViolation(f"unknown point kind {kind!r}")
    try:
        return InterpolationSpec(field, n, tuple(points), Strategy.parse(strategy), umax)
    except (InvalidSpec, ValueError) as exc:
        raise SchemaViolation(str(exc)) from exc


def _dec_core(field, obj, n, umax, resolve) -> DegreeCore:
    spec = _dec_spec(field, n, _need(obj, "spec", list), _need(obj, "strategy", str), umax)
    W = 2 * n - 1
    evalL = _dec_matrix(field, _need(obj, "evalL", dict), (W, n))
    recon = _dec_matrix(field, _need(obj, "recon", dict), (W, W))
    if not np.array_equal(evalL, evaluation_matrix(spec.points, n, field)):
        raise SchemaViolation("evalL does not match the spec points")
    E = evaluation_matrix(spec.points, W, field)
    if not np.array_equal(mat_mul(field, recon, E), identity(W)):
        raise SchemaViolation("recon is not the inverse of the evaluation matrix")
    expected, _ = _schedule_for(spec, lambda d: resolve(d))
    items = _need(obj, "schedule", list)
    if len(items) != len(expected):
        raise SchemaViolation("schedule length does not match the spec")
    sched = []
    subcores = {}
    for it, exp in zip(items, expected):
        if _need(it, "kind", str) != exp.kind or _need(it, "offset", int) != exp.offset:
            raise SchemaViolation("schedule entry disagrees with the spec")
        red = None
        if exp.kind == "sub":
            red = _dec_matrix(field, _need(it, "reduce", dict), exp.reduce.shape)
            if not np.array_equal(red, exp.reduce):
                raise SchemaViolation("reduction matrix disagrees with its place")
            subcores[exp.degree] = resolve(exp.degree)
        sched.append(exp)
    count = sum(e.cost for e in sched)
    if _need(obj, "bilinear_count", int) != count:
        raise SchemaViolation(f"bilinear_count {obj['bilinear_count']} != schedule total {count}")
    return DegreeCore(field, n, spec, evalL, recon, tuple(sched), subcores, count)


def import_algorithm(doc: dict) -> CompiledAlgorithm:
    """Rebuild and validate an exported algorithm."""
    if not isinstance(doc, dict):
        raise SchemaViolation("document must be a JSON object")
    p, m = _need(doc, "p", int), _need(doc, "m", int)
    modulus = _need(doc, "modulus", list)
    try:
        field = field_make(p, m, modulus)
    except ValueError as exc:
        raise FieldMismatch(str(exc)) from exc
    n = _need(doc, "n", int)
    if n < 2:
        raise SchemaViolation("n must be >= 2")
    umax = doc.get("umax", st.DEFAULT_UMAX)
    strategy = Strategy.parse(_need(doc, "strategy", str))
    Q = Poly(field, [_dec_elem(field, c) for c in _need(doc, "Q", list)])
    if Q.degree != n or not Q.is_monic() or not poly_is_irreducible(Q):
        raise SchemaViolation("Q is not monic irreducible of degree n")

    raw_cores = _need(doc, "cores", dict)
    built: dict[int, DegreeCore] = {}
    in_progress = set()

    def resolve(d: int) -> DegreeCore:
        if d in built:
            return built[d]
        if d in in_progress:
            raise SchemaViolation(f"cyclic core reference at degree {d}")
        obj = raw_cores.get(str(d))
        if obj is None:
            raise SchemaViolation(f"missing core for degree {d}")
        if _need(obj, "n", int) != d:
            raise SchemaViolation(f"core keyed {d} has n={obj['n']}")
        in_progress.add(d)
        built[d] = _dec_core(field, obj, d, umax, resolve)
        in_progress.discard(d)
        return built[d]

    top = dict(doc)
    top["strategy"] = _need(doc, "spec_strategy", str)
    core = _dec_core(field, top, n, umax, resolve)
    if Q in [pl.minpoly for pl in core.spec.places()]:
        raise QInSupport("Q is one of the interpolation places")
    reduceQ = _dec_matrix(field, _need(doc, "reduceQ", dict), (n, 2 * n - 1))
    if not np.array_equal(reduceQ, eval_row_block(EvalPoint.local(Place(Q)), 2 * n - 1)):
        raise SchemaViolation("reduceQ does not reduce modulo Q")
    return CompiledAlgorithm(field, n, Q, strategy, umax, core, reduceQ)


def import_json(text: str) -> CompiledAlgorithm:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaViolation(f"not JSON: {exc}") from exc
    return import_algorithm(doc)


__all__ = [
    "CompiledAlgorithm", "DegreeCore", "ScheduleEntry", "SingularEvaluation",
    "bilinear_complexity", "build_core", "compile_algorithm", "default_Q",
    "export_algorithm", "export_json", "import_algorithm", "import_json",
]
