"""Exact arithmetic in F_q = F_p[t]/(m(t)) and dense polynomials over F_q.

Elements of F_q are digit vectors over F_p (low-to-high). Every element also has
an integer *index* ``sum(d_i * p**i)``; index order is the canonical element
order used throughout the package (0, 1, ..., p-1, t, t+1, ...).

Polynomials over F_q keep their coefficients as element indices internally and
do table-driven arithmetic; the digit-vector arithmetic on :class:`FieldElement`
is the reference the tables are built from.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    ConfigMismatch,
    DegreeMismatch,
    DivisionByZero,
    NotMonic,
    NotPrime,
    ReducibleModulus,
)

# Table-driven arithmetic keeps q*q entries per table.
MAX_TABLE_Q = 1 << 12


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    i = 3
    while i * i <= p:
        if p % i == 0:
            return False
        i += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    k = 2
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# digit-vector arithmetic over F_p (reference implementation)

def _digits_add(a, b, p):
    return tuple((x + y) % p for x, y in zip(a, b))


def _digits_neg(a, p):
    return tuple((-x) % p for x in a)


def _digits_mul(a, b, p, modulus):
    m = len(a)
    prod = [0] * (2 * m - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    # modulus is monic of degree m
    for k in range(2 * m - 2, m - 1, -1):
        c = prod[k]
        if c:
            for i in range(m):
                prod[k - m + i] = (prod[k - m + i] - c * modulus[i]) % p
    return tuple(prod[:m])


@dataclass(frozen=True)
class FieldConfig:
    """The field F_q with q = p**m, presented as F_p[t]/(modulus)."""

    p: int
    m: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p ** self.m

    def __repr__(self):
        if self.m == 1:
            return f"F_{self.p}"
        return f"F_{self.p}^{self.m}[{','.join(map(str, self.modulus))}]"

    # -- elements ---------------------------------------------------------
    def digits_of(self, index: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.m):
            index, r = divmod(index, self.p)
            out.append(r)
        return tuple(out)

    def index_of(self, digits: Sequence[int]) -> int:
        idx = 0
        for d in reversed(digits):
            idx = idx * self.p + d
        return idx

    def element(self, index: int) -> "FieldElement":
        return FieldElement(self, self.digits_of(index))

    def elements(self) -> Iterator["FieldElement"]:
        """All elements in canonical order."""
        for i in range(self.q):
            yield self.element(i)

    @property
    def zero(self) -> "FieldElement":
        return self.element(0)

    @property
    def one(self) -> "FieldElement":
        return self.element(1)

    def from_int(self, value: int) -> "FieldElement":
        """Image of an integer under Z -> F_p -> F_q."""
        return self.element(value % self.p)

    # -- tables -----------------------------------------------------------
    @cached_property
    def _tables(self):
        q = self.q
        if q > MAX_TABLE_Q:
            raise ValueError(f"field of size {q} is too large for table arithmetic")
        digits = [self.digits_of(i) for i in range(q)]
        add = [[self.index_of(_digits_add(a, b, self.p)) for b in digits] for a in digits]
        mul = [[self.index_of(_digits_mul(a, b, self.p, self.modulus)) for b in digits]
               for a in digits]
        neg = [self.index_of(_digits_neg(a, self.p)) for a in digits]
        sub = [[add[a][neg[b]] for b in range(q)] for a in range(q)]
        inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if mul[a][b] == 1:
                    inv[a] = b
                    break
        return digits, add, mul, neg, sub, inv

    @property
    def add_table(self):
        return self._tables[1]

    @property
    def mul_table(self):
        return self._tables[2]

    @property
    def neg_table(self):
        return self._tables[3]

    @property
    def sub_table(self):
        return self._tables[4]

    @property
    def inv_table(self):
        return self._tables[5]

    @cached_property
    def frobenius_table(self) -> list[int]:
        """Index of a**p for every element a."""
        mul = self.mul_table
        out = []
        for a in range(self.q):
            r = 1
            for _ in range(self.p):
                r = mul[r][a]
            out.append(r)
        return out

    @cached_property
    def np_tables(self) -> "NumpyTables":
        _, add, mul, neg, sub, inv = self._tables
        digits = np.array(self._tables[0], dtype=np.int64).reshape(self.q, self.m)
        return NumpyTables(
            add=np.array(add, dtype=np.int64),
            mul=np.array(mul, dtype=np.int64),
            neg=np.array(neg, dtype=np.int64),
            sub=np.array(sub, dtype=np.int64),
            inv=np.array(inv, dtype=np.int64),
            digits=digits,
            powers=np.array([self.p ** i for i in range(self.m)], dtype=np.int64),
        )


@dataclass(frozen=True)
class NumpyTables:
    add: np.ndarray
    mul: np.ndarray
    neg: np.ndarray
    sub: np.ndarray
    inv: np.ndarray
    digits: np.ndarray
    powers: np.ndarray


@dataclass(frozen=True)
class FieldElement:
    """An element of F_q as a digit vector over F_p, low-to-high."""

    field: FieldConfig
    coeffs: tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        if len(coeffs) != self.field.m:
            raise DegreeMismatch(f"expected {self.field.m} digits, got {len(coeffs)}")
        if any(not 0 <= c < self.field.p for c in coeffs):
            raise ValueError(f"digits must lie in [0, {self.field.p})")

    @property
    def index(self) -> int:
        return self.field.index_of(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _check(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.field != self.field:
            raise ConfigMismatch(f"{self.field!r} vs {other.field!r}")
        return other

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return FieldElement(self.field, _digits_add(self.coeffs, other.coeffs, self.field.p))

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return FieldElement(self.field, _digits_neg(self.coeffs, self.field.p))

    def __mul__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        f = self.field
        return FieldElement(f, _digits_mul(self.coeffs, other.coeffs, f.p, f.modulus))

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        return self ** (self.field.q - 2)

    def __truediv__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __str__(self):
        return format_element(self)

    def __repr__(self):
        return f"FieldElement({format_element(self)!r}, {self.field!r})"


def elem_add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def elem_sub(a: FieldElement, b: FieldElement) -> FieldElement:
    return a - b


def elem_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def elem_neg(a: FieldElement) -> FieldElement:
    return -a


def elem_inv(a: FieldElement) -> FieldElement:
    return a.inverse()


# ---------------------------------------------------------------------------
# polynomials over F_q

def _normalize(c: list[int]) -> tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class Poly:
    """Dense polynomial over a :class:`FieldConfig`, always normalized.

    Coefficients are stored as element indices (low-to-high). ``coeffs`` returns
    them as :class:`FieldElement` objects. The zero polynomial has an empty
    coefficient list and reports ``degree == -1`` in place of minus infinity.
    """

    __slots__ = ("field", "_c")

    def __init__(self, field: FieldConfig, coeffs: Iterable = ()):
        raw = []
        for c in coeffs:
            if isinstance(c, FieldElement):
                if c.field != field:
                    raise ConfigMismatch(f"{c.field!r} vs {field!r}")
                raw.append(c.index)
            else:
                c = int(c)
                if not 0 <= c < field.q:
                    raise ValueError(f"element index {c} out of range for q={field.q}")
                raw.append(c)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "_c", _normalize(raw))

    @classmethod
    def _raw(cls, field, c: tuple[int, ...]) -> "Poly":
        obj = cls.__new__(cls)
        object.__setattr__(obj, "field", field)
        object.__setattr__(obj, "_c", c)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def x(cls, field: FieldConfig) -> "Poly":
        return cls._raw(field, (0, 1))

    @classmethod
    def constant(cls, field: FieldConfig, c) -> "Poly":
        return cls(field, [c])

    @classmethod
    def monomial(cls, field: FieldConfig, k: int, c=1) -> "Poly":
        return cls(field, [0] * k + [c])

    # -- inspection -------------------------------------------------------
    @property
    def indices(self) -> tuple[int, ...]:
        return self._c

    @property
    def coeffs(self) -> tuple[FieldElement, ...]:
        return tuple(self.field.element(i) for i in self._c)

    @property
    def degree(self) -> int:
        return len(self._c) - 1

    def is_zero(self) -> bool:
        return not self._c

    def is_monic(self) -> bool:
        return bool(self._c) and self._c[-1] == 1

    def coeff(self, k: int) -> FieldElement:
        return self.field.element(self._c[k] if 0 <= k < len(self._c) else 0)

    @property
    def lead(self) -> FieldElement:
        return self.coeff(self.degree)

    def padded(self, length: int) -> tuple[int, ...]:
        """Coefficient indices zero-padded (or checked) to ``length``."""
        if len(self._c) > length:
            raise DegreeMismatch(f"degree {self.degree} does not fit in {length} coefficients")
        return self._c + (0,) * (length - len(self._c))

    def sort_key(self) -> tuple[int, int]:
        """Canonical order: by degree, then by coefficient vector read as a base-q number."""
        q = self.field.q
        v = 0
        for c in reversed(self._c):
            v = v * q + c
        return (self.degree, v)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.field == other.field and self._c == other._c

    def __hash__(self):
        return hash((self.field, self._c))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        return f"Poly({format_poly(self)!r}, {self.field!r})"

    def __str__(self):
        if not self._c:
            return "0"
        terms = []
        for k in range(len(self._c) - 1, -1, -1):
            c = self._c[k]
            if not c:
                continue
            cs = format_element(self.field.element(c))
            if self.field.m > 1 and c != 1:
                cs = f"({cs})"
            if k == 0:
                terms.append(cs)
            else:
                mono = "x" if k == 1 else f"x^{k}"
                terms.append(mono if c == 1 else f"{cs}*{mono}")
        return " + ".join(terms)

    # -- arithmetic -------------------------------------------------------
    def _same(self, other):
        if not isinstance(other, Poly):
            return False
        if other.field != self.field:
            raise ConfigMismatch(f"{self.field!r} vs {other.field!r}")
        return True

    def __add__(self, other):
        if not self._same(other):
            return NotImplemented
        add = self.field.add_table
        a, b = self._c, other._c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = add[out[i]][c]
        return Poly._raw(self.field, _normalize(out))

    def __neg__(self):
        neg = self.field.neg_table
        return Poly._raw(self.field, tuple(neg[c] for c in self._c))

    def __sub__(self, other):
        if not self._same(other):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, FieldElement):
            other = Poly(self.field, [other])
        if not self._same(other):
            return NotImplemented
        a, b = self._c, other._c
        if not a or not b:
            return Poly._raw(self.field, ())
        add, mul = self.field.add_table, self.field.mul_table
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                row = mul[x]
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = add[out[i + j]][row[y]]
        return Poly._raw(self.field, _normalize(out))

    __rmul__ = __mul__

    def scale(self, c: int) -> "Poly":
        row = self.field.mul_table[c]
        return Poly._raw(self.field, _normalize([row[x] for x in self._c]))

    def __divmod__(self, other):
        if not self._same(other):
            return NotImplemented
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        f = self.field
        sub, mul = f.sub_table, f.mul_table
        b = other._c
        db = len(b) - 1
        inv_lead = f.inv_table[b[-1]]
        rem = list(self._c)
        if len(rem) <= db:
            return Poly._raw(f, ()), self
        quo = [0] * (len(rem) - db)
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k]
            if not c:
                continue
            t = mul[c][inv_lead]
            quo[k - db] = t
            row = mul[t]
            for i in range(db + 1):
                if b[i]:
                    rem[k - db + i] = sub[rem[k - db + i]][row[b[i]]]
        return Poly._raw(f, _normalize(quo)), Poly._raw(f, _normalize(rem[:db]))

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __call__(self, a: FieldElement) -> FieldElement:
        """Horner evaluation at an element of F_q."""
        f = self.field
        add, mul = f.add_table, f.mul_table
        ai = a.index
        acc = 0
        for c in reversed(self._c):
            acc = add[mul[acc][ai]][c]
        return f.element(acc)

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(self.field.inv_table[self._c[-1]])

    def powmod(self, e: int, modulus: "Poly") -> "Poly":
        result = Poly._raw(self.field, (1,)) % modulus
        base = self % modulus
        while e:
            if e & 1:
                result = (result * base) % modulus
            base = (base * base) % modulus
            e >>= 1
        return result


def poly_add(a: Poly, b: Poly) -> Poly:
    return a + b


def poly_sub(a: Poly, b: Poly) -> Poly:
    return a - b


def poly_mul(a: Poly, b: Poly) -> Poly:
    return a * b


def poly_divmod(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    return divmod(a, b)


def poly_mod(a: Poly, b: Poly) -> Poly:
    return a % b


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


_EARLY_REJECT = 3


def _qth_power_mod(h: Poly, f: Poly) -> Poly:
    """h^q mod f through m applications of the additive map c x^i -> c^p x^(ip)."""
    field = f.field
    p = field.p
    frob = field.frobenius_table
    for _ in range(field.m):
        spread = [0] * (p * (len(h._c) - 1) + 1) if h._c else []
        for i, c in enumerate(h._c):
            spread[i * p] = frob[c]
        h = Poly._raw(field, _normalize(spread)) % f
    return h


def poly_is_irreducible(f: Poly) -> bool:
    """Rabin's test: x^(q^d) = x mod f and gcd(x^(q^(d/r)) - x, f) = 1 for primes r | d."""
    if not f.is_monic():
        raise NotMonic(f"{f} is not monic")
    d = f.degree
    if d < 1:
        raise DegreeMismatch("irreducibility needs degree >= 1")
    if d == 1:
        return True
    x = Poly.x(f.field)
    # frob[k] = x^(q^k) mod f
    frob = [x % f]
    for k in range(1, d + 1):
        frob.append(_qth_power_mod(frob[-1], f))
        # a factor of degree k <= d/2 already settles it
        if k <= _EARLY_REJECT and 2 * k <= d and poly_gcd(frob[k] - x, f).degree > 0:
            return False
    if frob[d] != x % f:
        return False
    for r in prime_factors(d):
        g = poly_gcd(frob[d // r] - x, f)
        if g.degree > 0:
            return False
    return True


def monic_polys(field: FieldConfig, d: int) -> Iterator[Poly]:
    """All monic polynomials of degree ``d`` in canonical order."""
    q = field.q
    for v in range(q ** d):
        c = []
        for _ in range(d):
            v, r = divmod(v, q)
            c.append(r)
        c.append(1)
        yield Poly._raw(field, tuple(c))


def irreducibles(field: FieldConfig, d: int) -> Iterator[Poly]:
    """Monic irreducible polynomials of degree ``d`` in canonical order."""
    for f in monic_polys(field, d):
        if poly_is_irreducible(f):
            yield f


@lru_cache(maxsize=None)
def prime_field(p: int) -> FieldConfig:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    return FieldConfig(p, 1, (0, 1))


def field_make(p: int, m: int = 1, modulus: Sequence[int] | None = None) -> FieldConfig:
    """Validated F_{p^m}; with no modulus, the canonically-first monic irreducible is used."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if m < 1:
        raise DegreeMismatch("extension degree must be >= 1")
    base = prime_field(p)
    if modulus is None:
        if m == 1:
            return base
        for f in irreducibles(base, m):
            return FieldConfig(p, m, tuple(f.padded(m + 1)))
        raise ReducibleModulus(f"no irreducible of degree {m} over F_{p}")  # pragma: no cover
    mod = [int(c) % p for c in modulus]
    while mod and mod[-1] == 0:
        mod.pop()
    if len(mod) - 1 != m:
        raise DegreeMismatch(f"modulus has degree {len(mod) - 1}, expected {m}")
    if mod[-1] != 1:
        raise NotMonic("modulus must be monic")
    if not poly_is_irreducible(Poly(base, mod)):
        raise ReducibleModulus(f"modulus {mod} is reducible over F_{p}")
    return FieldConfig(p, m, tuple(mod))


# ---------------------------------------------------------------------------
# wire format

def format_element(a: FieldElement) -> str:
    return ".".join(str(d) for d in a.coeffs)


def parse_element(field: FieldConfig, text: str) -> FieldElement:
    parts = text.strip().split(".")
    try:
        digits = [int(s) for s in parts]
    except ValueError:
        raise ValueError(f"bad element encoding {text!r}") from None
    if len(digits) > field.m:
        raise DegreeMismatch(f"element {text!r} has more than {field.m} digits")
    digits += [0] * (field.m - len(digits))
    if any(not 0 <= d < field.p for d in digits):
        raise ValueError(f"digit out of range in {text!r}")
    return FieldElement(field, tuple(digits))


def format_poly(f: Poly) -> str:
    if f.is_zero():
        return "0"
    return ",".join(format_element(c) for c in f.coeffs)


def parse_poly(field: FieldConfig, text: str) -> Poly:
    text = text.strip()
    if not text:
        return Poly(field)
    return Poly(field, [parse_element(field, s) for s in text.split(",")])


def parse_qspec(text: str, modulus: Sequence[int] | None = None) -> FieldConfig:
    """Parse ``"p"`` or ``"p^m"`` into a field, optionally with explicit modulus digits."""
    text = text.strip()
    if "^" in text:
        p_s, m_s = text.split("^", 1)
        p, m = int(p_s), int(m_s)
    else:
        n = int(text)
        p, m = _as_prime_power(n)
    return field_make(p, m, modulus)


def _as_prime_power(n: int) -> tuple[int, int]:
    if n < 2:
        raise NotPrime(f"{n} is not a prime power")
    for p in prime_factors(n):
        m, r = 0, n
        while r % p == 0:
            r //= p
            m += 1
        if r == 1:
            return p, m
    raise NotPrime(f"{n} is not a prime power")
