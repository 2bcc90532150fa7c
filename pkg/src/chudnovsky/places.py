"""Places of the rational function field F_q(x).

A finite place is a monic irreducible polynomial; the infinite place has
degree 1 and comes first among rational places.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import islice
from typing import Optional

from .errors import InfinitePlaceHasNoQuotientRepresentation, NotMonic, ReducibleModulus
from .field_core import (FieldConfig, FieldElement, Poly, format_poly, irreducibles,
                         poly_is_irreducible)


_is_irreducible = lru_cache(maxsize=4096)(poly_is_irreducible)


@dataclass(frozen=True)
class Place:
    """``minpoly is None`` marks the place at infinity."""

    minpoly: Optional[Poly] = None

    def __post_init__(self):
        f = self.minpoly
        if f is None:
            return
        if not f.is_monic():
            raise NotMonic(f"place polynomial {f} is not monic")
        if f.degree < 1 or not _is_irreducible(f):
            raise ReducibleModulus(f"place polynomial {f} is not irreducible")

    @classmethod
    def infinity(cls) -> "Place":
        return cls(None)

    @property
    def is_infinite(self) -> bool:
        return self.minpoly is None

    @property
    def degree(self) -> int:
        return 1 if self.minpoly is None else self.minpoly.degree

    @property
    def root(self) -> FieldElement:
        """The element a with minpoly x - a (rational finite places only)."""
        if self.minpoly is None or self.minpoly.degree != 1:
            raise ValueError("only finite rational places have a root in F_q")
        return -self.minpoly.coeff(0)

    def wire(self) -> str:
        return "inf" if self.minpoly is None else format_poly(self.minpoly)

    def __str__(self):
        return "P_inf" if self.minpoly is None else f"({self.minpoly})"


def count_places(q: int | FieldConfig, d: int) -> int:
    """Number B_d of degree-d places of F_q(x); B_1 = q + 1 includes infinity."""
    if isinstance(q, FieldConfig):
        q = q.q
    if d < 1:
        raise ValueError("degree must be >= 1")
    return _count(q, d)


@lru_cache(maxsize=None)
def _count(q: int, d: int) -> int:
    rest = sum(k * _count(q, k) for k in range(1, d) if d % k == 0)
    return (q ** d + 1 - rest) // d


def rational_places(field: FieldConfig) -> list[Place]:
    """[P_inf] followed by x - a for a in canonical element order."""
    neg = field.neg_table
    return [Place.infinity()] + [
        Place(Poly(field, [neg[a], 1])) for a in range(field.q)
    ]


@lru_cache(maxsize=None)
def _first_places(field: FieldConfig, d: int, count: int) -> tuple[Place, ...]:
    return tuple(Place(f) for f in islice(irreducibles(field, d), count))


def first_places(field: FieldConfig, d: int, count: int) -> list[Place]:
    """The first ``count`` finite places of degree ``d >= 2`` in canonical order."""
    if d == 1:
        return rational_places(field)[1:1 + count]
    return list(_first_places(field, d, count))


def enumerate_places(field: FieldConfig, d: int) -> list[Place]:
    if d == 1:
        return rational_places(field)
    return first_places(field, d, count_places(field, d))


@dataclass(frozen=True)
class ResidueField:
    """F_q[x]/(minpoly) for a finite place; elements are Polys of degree < d."""

    base: FieldConfig
    place: Place

    @property
    def degree(self) -> int:
        return self.place.degree

    @property
    def size(self) -> int:
        return self.base.q ** self.degree

    def reduce(self, f: Poly) -> Poly:
        return f % self.place.minpoly

    def add(self, a: Poly, b: Poly) -> Poly:
        return self.reduce(a + b)

    def mul(self, a: Poly, b: Poly) -> Poly:
        return self.reduce(a * b)

    def generator(self) -> Poly:
        """The class of x."""
        return self.reduce(Poly.x(self.base))


def residue_field(place: Place) -> ResidueField:
    if place.is_infinite:
        raise InfinitePlaceHasNoQuotientRepresentation(
            "the infinite place is handled by leading-coefficient evaluation")
    return ResidueField(place.minpoly.field, place)
