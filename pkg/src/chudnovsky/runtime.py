"""Run compiled algorithms, count bilinear products, and check against schoolbook.

Execution is batched: a batch of T operand pairs is a pair of (T, n) arrays of
element indices. Only products of two evaluation-data values go through
:meth:`_Counter.bil`; that is the bilinear count. Products with fixed matrix
entries happen inside :class:`~chudnovsky.linalg.LinearMap` and are not counted.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np

from .compiler import CompiledAlgorithm, DegreeCore, compile_algorithm
from .errors import ConfigMismatch, DegreeMismatch
from .field_core import FieldConfig, FieldElement, Poly, format_poly
from .strategy import DEFAULT_UMAX, TRUNCATED_SCHEMES, Strategy


@dataclass(frozen=True)
class ExtElement:
    """An element of F_q[x]/(Q) as its n coefficients over F_q."""

    field: FieldConfig
    Q: Poly
    coeffs: tuple[FieldElement, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.Q.degree:
            raise DegreeMismatch(f"need {self.Q.degree} coefficients, got {len(self.coeffs)}")
        if any(c.field != self.field for c in self.coeffs):
            raise ConfigMismatch("coefficient over a different field")

    @classmethod
    def from_poly(cls, Q: Poly, f: Poly) -> "ExtElement":
        f = f % Q
        return cls(Q.field, Q, tuple(Q.field.element(i) for i in f.padded(Q.degree)))

    @classmethod
    def from_indices(cls, Q: Poly, idx) -> "ExtElement":
        return cls(Q.field, Q, tuple(Q.field.element(int(i)) for i in idx))

    @property
    def n(self) -> int:
        return len(self.coeffs)

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(c.index for c in self.coeffs)

    def to_poly(self) -> Poly:
        return Poly(self.field, self.coeffs)

    def __str__(self):
        return format_poly(self.to_poly())


@dataclass(frozen=True)
class MultTrace:
    """Bilinear multiplications per operand pair, split by top-level point."""

    total: int
    breakdown: tuple[int, ...] = dc_field(default=())


class _Counter:
    def __init__(self, field: FieldConfig):
        self.tables = field.np_tables
        self.count = 0

    def bil(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        self.count += a.size
        return self.tables.mul[a, b]


def _truncated(counter: _Counter, A: np.ndarray, B: np.ndarray, u: int) -> np.ndarray:
    t = counter.tables
    scheme = TRUNCATED_SCHEMES[u]

    def side(X, idx):
        acc = X[:, idx[0]]
        for i in idx[1:]:
            acc = t.add[acc, X[:, i]]
        return acc

    prods = [counter.bil(side(A, I), side(B, J)) for I, J in scheme["products"]]
    out = np.empty_like(A)
    for k, combo in enumerate(scheme["outputs"]):
        acc = np.zeros(A.shape[0], dtype=np.int64)
        for j, sign in combo:
            acc = t.add[acc, prods[j]] if sign > 0 else t.sub[acc, prods[j]]
        out[:, k] = acc
    return out


def core_product(core: DegreeCore, A: np.ndarray, B: np.ndarray, counter: _Counter,
                 breakdown: Optional[list] = None) -> np.ndarray:
    """Full product polynomials (T, 2n-1) of the rows of A and B (T, n)."""
    fa = core.evalL_map(A)
    fb = core.evalL_map(B)
    out = np.empty_like(fa)
    schedule = core.schedule
    reduce_maps = core.reduce_maps
    # batch all places of one degree through their shared core
    groups: dict[int, list[int]] = {}
    for i, e in enumerate(schedule):
        if e.kind == "sub":
            groups.setdefault(e.degree, []).append(i)
    per_entry = [0] * len(schedule)
    for i, e in enumerate(schedule):
        sl = slice(e.offset, e.offset + e.width)
        before = counter.count
        if e.kind == "scalar":
            out[:, sl] = counter.bil(fa[:, sl], fb[:, sl])
        elif e.kind == "truncated":
            out[:, sl] = _truncated(counter, fa[:, sl], fb[:, sl], e.u)
        else:
            continue
        per_entry[i] = counter.count - before
    T = A.shape[0]
    for d, idxs in groups.items():
        sub = core.subcores[d]
        SA = np.concatenate([fa[:, schedule[i].offset:schedule[i].offset + d] for i in idxs])
        SB = np.concatenate([fb[:, schedule[i].offset:schedule[i].offset + d] for i in idxs])
        before = counter.count
        H = core_product(sub, SA, SB, counter)
        share = (counter.count - before) // len(idxs)
        for j, i in enumerate(idxs):
            e = schedule[i]
            out[:, e.offset:e.offset + d] = reduce_maps[i](H[j * T:(j + 1) * T])
            per_entry[i] = share
    if breakdown is not None:
        breakdown.extend(per_entry)
    return core.recon_map(out)


def multiply_batch(alg: CompiledAlgorithm, X: np.ndarray, Y: np.ndarray):
    """Products of the rows of X and Y (index arrays of shape (T, n))."""
    X = np.atleast_2d(np.asarray(X, dtype=np.int64))
    Y = np.atleast_2d(np.asarray(Y, dtype=np.int64))
    if X.shape != Y.shape or X.shape[1] != alg.n:
        raise DegreeMismatch(f"operands must have shape (T, {alg.n})")
    T = X.shape[0]
    counter = _Counter(alg.field)
    per_entry: list[int] = []
    H = core_product(alg.core, X, Y, counter, per_entry)
    Z = alg.reduceQ_map(H)
    if counter.count % T:
        raise AssertionError("uneven bilinear count across the batch")
    trace = MultTrace(counter.count // T, tuple(c // T for c in per_entry))
    return Z, trace


def _check_operand(alg: CompiledAlgorithm, x: ExtElement):
    if x.field != alg.field or x.Q != alg.Q:
        raise ConfigMismatch("operand is not bound to the algorithm's field and Q")


def multiply(alg: CompiledAlgorithm, x: ExtElement, y: ExtElement) -> tuple[ExtElement, MultTrace]:
    _check_operand(alg, x)
    _check_operand(alg, y)
    Z, trace = multiply_batch(alg, [x.indices], [y.indices])
    return ExtElement.from_indices(alg.Q, Z[0]), trace


# ---------------------------------------------------------------------------
# oracle

def oracle_multiply(field: FieldConfig, Q: Poly, x: ExtElement, y: ExtElement) -> ExtElement:
    """Schoolbook product followed by reduction modulo Q."""
    for v in (x, y):
        if v.field != field or v.Q != Q:
            raise ConfigMismatch("operand is not bound to this field and Q")
    return ExtElement.from_poly(Q, (x.to_poly() * y.to_poly()) % Q)


def oracle_multiply_batch(field: FieldConfig, Q: Poly, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Vectorized schoolbook product and long division; no interpolation involved."""
    t = field.np_tables
    X = np.asarray(X, dtype=np.int64)
    Y = np.asarray(Y, dtype=np.int64)
    T, n = X.shape
    acc = np.zeros((T, 2 * n - 1), dtype=np.int64)
    for i in range(n):
        acc[:, i:i + n] = t.add[acc[:, i:i + n], t.mul[X[:, i:i + 1], Y]]
    q = np.array(Q.padded(n + 1), dtype=np.int64)
    for k in range(2 * n - 2, n - 1, -1):
        c = acc[:, k:k + 1]
        acc[:, k - n:k + 1] = t.sub[acc[:, k - n:k + 1], t.mul[c, q[None, :]]]
    return acc[:, :n]


# ---------------------------------------------------------------------------
# seeded randomness

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def splitmix64(state: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """One splitmix64 step on an array of states; returns (new_state, output)."""
    with np.errstate(over="ignore"):
        state = state + _GOLDEN
        z = state
        z = (z ^ (z >> np.uint64(30))) * _MIX1
        z = (z ^ (z >> np.uint64(27))) * _MIX2
        z = z ^ (z >> np.uint64(31))
    return state, z


def random_elements(field: FieldConfig, trials: int, count: int, seed: int) -> np.ndarray:
    """(trials, count) element indices; trial t uses the stream seeded by seed + t."""
    p, m = field.p, field.m
    per_word = max(1, int(64 / math.log2(p)) - 1) if p > 2 else 64
    need = count * m
    state = (np.arange(trials, dtype=np.uint64) + np.uint64(seed % (1 << 64)))
    digits = np.empty((trials, need), dtype=np.int64)
    filled = 0
    pu = np.uint64(p)
    while filled < need:
        state, word = splitmix64(state)
        for _ in range(min(per_word, need - filled)):
            digits[:, filled] = (word % pu).astype(np.int64)
            word = word // pu
            filled += 1
    return digits.reshape(trials, count, m) @ field.np_tables.powers


@dataclass
class VerifyReport:
    q: int
    n: int
    strategy: str
    trials: int
    seed: int
    bilinear_count: int
    mismatches: int
    trace_ok: bool
    Q: str = ""
    failing_pair: Optional[tuple[str, str]] = None

    @property
    def passed(self) -> bool:
        return self.mismatches == 0 and self.trace_ok

    def lines(self) -> list[str]:
        status = "PASS" if self.passed else "FAIL"
        out = [f"{status} q={self.q} n={self.n} strategy={self.strategy} trials={self.trials} "
               f"seed={self.seed} bilinear_count={self.bilinear_count} Q={self.Q}"]
        if self.mismatches:
            out.append(f"mismatches={self.mismatches} first x={self.failing_pair[0]} "
                       f"y={self.failing_pair[1]}")
        if not self.trace_ok:
            out.append("trace total differs from the static bilinear count")
        return out


def verify_algorithm(alg: CompiledAlgorithm, trials: int, seed: int) -> VerifyReport:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    R = random_elements(alg.field, trials, 2 * alg.n, seed)
    X, Y = R[:, :alg.n], R[:, alg.n:]
    Z, trace = multiply_batch(alg, X, Y)
    ref = oracle_multiply_batch(alg.field, alg.Q, X, Y)
    bad = np.nonzero(np.any(Z != ref, axis=1))[0]
    pair = None
    if bad.size:
        i = bad[0]
        pair = (str(ExtElement.from_indices(alg.Q, X[i])), str(ExtElement.from_indices(alg.Q, Y[i])))
    return VerifyReport(alg.field.q, alg.n, str(alg.strategy), trials, seed, alg.bilinear_count,
                        int(bad.size), trace.total == alg.bilinear_count,
                        format_poly(alg.Q), pair)


def verify(field: FieldConfig, n: int, strategy=Strategy.DEG, trials: int = 1000, seed: int = 0,
           umax: int = DEFAULT_UMAX, Q: Poly | None = None) -> VerifyReport:
    alg = compile_algorithm(field, n, strategy, Q=Q, umax=umax)
    return verify_algorithm(alg, trials, seed)
