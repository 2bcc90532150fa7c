"""Generalized evaluation maps on polynomials over F_q.

Three kinds of evaluation data are produced for a polynomial f:

* the residue f mod P at a finite place P of any degree,
* the first u Hasse coefficients of f in powers of (x - a) at a rational place,
* the coefficient of x^k (leading coefficient of f viewed in L(k P_inf)).

``eval_row_block`` gives the same data as a matrix acting on coefficient
vectors; matrices hold element indices.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DegreeTooLarge, InvalidSpec
from .field_core import FieldConfig, FieldElement, Poly
from .places import Place


@dataclass(frozen=True)
class EvalPoint:
    """Leading coefficient at infinity (``place is None``) or a local expansion."""

    place: Optional[Place] = None
    u: int = 1

    def __post_init__(self):
        if self.u < 1:
            raise InvalidSpec("multiplicity must be positive")
        if self.place is not None:
            if self.place.is_infinite:
                raise InvalidSpec("no local expansions at the infinite place")
            if self.u > 1 and self.place.degree != 1:
                raise InvalidSpec("multiplicity > 1 only at finite rational places")
        elif self.u != 1:
            raise InvalidSpec("the leading-coefficient point has weight 1")

    @classmethod
    def lead(cls) -> "EvalPoint":
        return cls(None, 1)

    @classmethod
    def local(cls, place: Place, u: int = 1) -> "EvalPoint":
        return cls(place, u)

    @property
    def is_lead(self) -> bool:
        return self.place is None

    @property
    def degree(self) -> int:
        return 1 if self.place is None else self.place.degree

    @property
    def weight(self) -> int:
        return 1 if self.place is None else self.u * self.place.degree

    def __str__(self):
        if self.place is None:
            return "inf-lead"
        return f"{self.place}" + (f"^{self.u}" if self.u > 1 else "")


@dataclass(frozen=True)
class EvalVector:
    """Evaluation blocks aligned with a sequence of points.

    A leading-coefficient block is ``(FieldElement,)``; a local block is a tuple
    of ``u`` residues, each a Poly of degree below the place degree.
    """

    points: tuple[EvalPoint, ...]
    blocks: tuple[tuple, ...]

    def flatten(self) -> tuple[FieldElement, ...]:
        out = []
        for pt, block in zip(self.points, self.blocks):
            if pt.is_lead:
                out.extend(block)
            else:
                d = pt.degree
                for r in block:
                    field = r.field
                    out.extend(field.element(i) for i in r.padded(d))
        return tuple(out)

    def __add__(self, other: "EvalVector") -> "EvalVector":
        if self.points != other.points:
            raise ValueError("evaluation vectors over different points")
        blocks = tuple(tuple(a + b for a, b in zip(x, y))
                       for x, y in zip(self.blocks, other.blocks))
        return EvalVector(self.points, blocks)


def residue_at(f: Poly, place: Place) -> Poly:
    return f % place.minpoly


def hasse_expansion(f: Poly, a: FieldElement, u: int) -> tuple[FieldElement, ...]:
    """First ``u`` coefficients of f written in powers of (x - a).

    Each coefficient is the remainder of one synthetic division by (x - a).
    """
    field = f.field
    add, mul = field.add_table, field.mul_table
    ai = a.index
    cur = list(f.indices)
    out = []
    for _ in range(u):
        if not cur:
            out.append(0)
            continue
        # synthetic division: quotient digits and remainder
        acc = 0
        quo = [0] * (len(cur) - 1)
        for k in range(len(cur) - 1, -1, -1):
            acc = add[mul[acc][ai]][cur[k]]
            if k > 0:
                quo[k - 1] = acc
        out.append(acc)
        cur = quo
    return tuple(field.element(i) for i in out)


def leading_coeff(f: Poly, k: int) -> FieldElement:
    """Coefficient of x^k, requiring deg f <= k."""
    if f.degree > k:
        raise DegreeTooLarge(f"degree {f.degree} exceeds {k}")
    return f.coeff(k)


def _binomial_rows_mod_p(u: int, ncols: int, p: int) -> list[list[int]]:
    # rows[j][i] = C(i, j) mod p, by Pascal's rule
    rows = [[0] * ncols for _ in range(u)]
    prev = [1] + [0] * (u - 1)
    for i in range(ncols):
        if i > 0:
            cur = [1] + [(prev[j] + prev[j - 1]) % p for j in range(1, u)]
        else:
            cur = prev
        for j in range(u):
            rows[j][i] = cur[j]
        prev = cur
    return rows


def eval_row_block(point: EvalPoint, ncols: int, field: FieldConfig | None = None) -> np.ndarray:
    """Matrix with ``point.weight`` rows whose columns evaluate 1, x, ..., x^(ncols-1).

    For a lead point the field cannot be read off the point and must be passed.
    """
    if ncols < 1:
        raise ValueError("ncols must be >= 1")
    if point.is_lead:
        block = np.zeros((1, ncols), dtype=np.int64)
        block[0, ncols - 1] = 1
        return block
    minpoly = point.place.minpoly
    field = minpoly.field
    add, sub, mul = field.add_table, field.sub_table, field.mul_table
    d = minpoly.degree
    if point.u > 1:
        a = point.place.root.index
        binom = _binomial_rows_mod_p(point.u, ncols, field.p)
        block = np.zeros((point.u, ncols), dtype=np.int64)
        # entry (j, i) = C(i, j) * a^(i - j)
        apow = [1]
        for _ in range(ncols):
            apow.append(mul[apow[-1]][a])
        for j in range(point.u):
            for i in range(j, ncols):
                c = binom[j][i]
                if c:
                    block[j, i] = mul[field.from_int(c).index][apow[i - j]]
        return block
    coef = minpoly.padded(d + 1)
    cols = []
    for l in range(ncols):
        if l < d:
            col = [0] * d
            col[l] = 1
        else:
            # multiply the previous column by the class of x
            prev = cols[-1]
            top = prev[d - 1]
            col = [sub[0][mul[coef[0]][top]]]
            for k in range(1, d):
                col.append(sub[prev[k - 1]][mul[coef[k]][top]])
        cols.append(col)
    return np.array(cols, dtype=np.int64).T.reshape(d, ncols)


def _points_of(spec) -> tuple[EvalPoint, ...]:
    return tuple(spec.points) if hasattr(spec, "points") else tuple(spec)


def evaluate_spec(f: Poly, spec, k: int) -> EvalVector:
    """Evaluate f (deg f <= k) at every point of ``spec`` (an InterpolationSpec or point list)."""
    if f.degree > k:
        raise DegreeTooLarge(f"degree {f.degree} exceeds {k}")
    points = _points_of(spec)
    blocks = []
    for pt in points:
        if pt.is_lead:
            blocks.append((leading_coeff(f, k),))
        elif pt.u > 1:
            coeffs = hasse_expansion(f, pt.place.root, pt.u)
            blocks.append(tuple(Poly(f.field, [c]) for c in coeffs))
        else:
            blocks.append((residue_at(f, pt.place),))
    return EvalVector(points, tuple(blocks))


def evaluation_matrix(points: Sequence[EvalPoint], ncols: int, field: FieldConfig) -> np.ndarray:
    """Stack the row blocks of ``points`` into one matrix."""
    return np.vstack([eval_row_block(pt, ncols, field) for pt in points])
