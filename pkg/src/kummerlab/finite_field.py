"""Arithmetic in F_{p^m} and q-th power residue tests in its extensions.

An element of F_{p^m} = F_p[u]/(modulus) is stored as the integer
``c_0 + c_1 p + ... + c_{m-1} p^{m-1}`` built from its power-basis
coordinates.  That integer is also the canonical element order used for
every deterministic choice downstream (nonresidues, factor orderings).

Multiplication goes through discrete exp/log tables built once per field,
addition through a table for small fields and digit arithmetic otherwise.
Fields are interned, so ``FieldSpec`` instances compare by identity cheaply.
"""

from __future__ import annotations

import functools
import itertools
from typing import Iterator, Sequence

from . import _parse
from .errors import DivisionByZero, FieldMismatch, NoNonresidue, ParseError

MAX_FIELD_SIZE = 1 << 20
_ADD_TABLE_LIMIT = 1024


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# Plain F_p polynomial helpers (lists, low degree first), used only while
# building field tables and choosing moduli.

def _fp_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_mod(a: list[int], b: Sequence[int], p: int) -> list[int]:
    a = _fp_trim(list(a))
    inv_lead = pow(b[-1], p - 2, p)
    db = len(b) - 1
    while len(a) - 1 >= db:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - db
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bc) % p
        _fp_trim(a)
    return a


def _fp_irreducible(poly: Sequence[int], p: int) -> bool:
    deg = len(poly) - 1
    if deg <= 0:
        return False
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _fp_mod(poly, list(low) + [1], p):
                return False
    return True


@functools.lru_cache(maxsize=None)
def canonical_modulus(p: int, m: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree m over F_p.

    Coefficient tuples are compared low degree first.
    """
    for low in itertools.product(range(p), repeat=m):
        poly = list(low) + [1]
        if _fp_irreducible(poly, p):
            return tuple(poly)
    raise AssertionError("an irreducible polynomial of every degree exists")


class FieldSpec:
    """The finite field F_{p^m} with a fixed monic irreducible modulus."""

    __slots__ = ("p", "m", "modulus", "size", "_exp", "_log", "_add", "_neg",
                 "_digits")

    def __init__(self, p: int, m: int, modulus: tuple[int, ...]):
        self.p = p
        self.m = m
        self.modulus = modulus
        self.size = p ** m
        self._build_tables()

    def _from_digits(self, digits: Sequence[int]) -> int:
        v = 0
        for c in reversed(digits):
            v = v * self.p + c
        return v

    def _to_digits(self, v: int) -> list[int]:
        out = []
        for _ in range(self.m):
            v, c = divmod(v, self.p)
            out.append(c)
        return out

    def _raw_mul(self, a: int, b: int) -> int:
        p = self.p
        da, db = self._to_digits(a), self._to_digits(b)
        prod = [0] * (2 * self.m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        red = _fp_mod(prod, self.modulus, p)
        return self._from_digits(red + [0] * (self.m - len(red)))

    def _build_tables(self) -> None:
        size, p = self.size, self.p
        self._digits = [self._to_digits(v) for v in range(size)] if size <= 1 << 16 else None
        self._neg = [self._from_digits([(-c) % p for c in self._to_digits(v)]) for v in range(size)]
        if p == 2:
            self._add = None
        elif size <= _ADD_TABLE_LIMIT:
            table = [0] * (size * size)
            digits = [self._to_digits(v) for v in range(size)]
            for a in range(size):
                da = digits[a]
                for b in range(size):
                    table[a * size + b] = self._from_digits(
                        [(x + y) % p for x, y in zip(da, digits[b])])
            self._add = table
        else:
            self._add = None
        order = size - 1
        factors = prime_factors(order)
        for g in range(1, size):
            if order == 1 or all(self._raw_pow(g, order // r) != 1 for r in factors):
                break
        exp = [0] * order
        log = [0] * size
        x = 1
        for i in range(order):
            exp[i] = x
            log[x] = i
            x = self._raw_mul(x, g)
        self._exp = exp
        self._log = log

    def _raw_pow(self, a: int, n: int) -> int:
        result = 1
        while n:
            if n & 1:
                result = self._raw_mul(result, a)
            a = self._raw_mul(a, a)
            n >>= 1
        return result

    # integer-coded arithmetic, used by FFElem and by polynomial code

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self._add is not None:
            return self._add[a * self.size + b]
        if self.m == 1:
            return (a + b) % self.p
        p = self.p
        da = self._digits[a] if self._digits else self._to_digits(a)
        db = self._digits[b] if self._digits else self._to_digits(b)
        return self._from_digits([(x + y) % p for x, y in zip(da, db)])

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self._neg[b])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.size - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero in a finite field")
        return self._exp[(-self._log[a]) % (self.size - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def power(self, a: int, n: int) -> int:
        if a == 0:
            if n < 0:
                raise DivisionByZero("negative power of zero")
            return 1 if n == 0 else 0
        return self._exp[(self._log[a] * n) % (self.size - 1)]

    def from_int(self, n: int) -> int:
        return n % self.p

    def generator_power(self, k: int) -> int:
        """The k-th power of the fixed primitive element."""
        return self._exp[k % (self.size - 1)]

    def dlog(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("discrete log of zero")
        return self._log[a]

    # element-level API

    def __call__(self, value: int | Sequence[int]) -> FFElem:
        """Element from an integer of F_p or from a coordinate sequence."""
        if isinstance(value, int):
            return FFElem(self, value % self.p)
        coords = list(value)
        if len(coords) > self.m or any(not 0 <= c < self.p for c in coords):
            raise ParseError(f"bad coordinates {coords} for F_{self.p}^{self.m}")
        return FFElem(self, self._from_digits(coords + [0] * (self.m - len(coords))))

    def element(self, code: int) -> FFElem:
        if not 0 <= code < self.size:
            raise ValueError(f"element code {code} out of range")
        return FFElem(self, code)

    @property
    def zero(self) -> FFElem:
        return FFElem(self, 0)

    @property
    def one(self) -> FFElem:
        return FFElem(self, 1)

    @property
    def gen(self) -> FFElem:
        """The class of u, the root of the modulus."""
        return FFElem(self, self.p if self.m > 1 else 0)

    def elements(self) -> Iterator[FFElem]:
        for v in range(self.size):
            yield FFElem(self, v)

    def nonzero_elements(self) -> Iterator[FFElem]:
        for v in range(1, self.size):
            yield FFElem(self, v)

    def coords(self, code: int) -> list[int]:
        return list(self._digits[code]) if self._digits else self._to_digits(code)

    def format_code(self, code: int) -> str:
        if self.m == 1:
            return str(code)
        return format_poly_terms(self.coords(code), "u")

    def spec_text(self) -> str:
        text = f"p={self.p},m={self.m}"
        if self.m > 1:
            text += ",mod=" + format_poly_terms(list(self.modulus), "u")
        return text

    def __repr__(self) -> str:
        return f"FieldSpec({self.spec_text()})"

    def __reduce__(self):
        return (make_field, (self.p, self.m, self.modulus))


def format_poly_terms(coeffs: Sequence[int | str], var: str) -> str:
    """Render low-degree-first coefficients as text, highest degree first."""
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0 or c == "0":
            continue
        c = str(c)
        if i == 0:
            parts.append(c)
            continue
        mono = var if i == 1 else f"{var}^{i}"
        if c == "1":
            parts.append(mono)
        elif any(ch in c for ch in "+-"):
            parts.append(f"({c})*{mono}")
        else:
            parts.append(f"{c}*{mono}")
    return "+".join(parts) if parts else "0"


@functools.lru_cache(maxsize=None)
def _intern_field(p: int, m: int, modulus: tuple[int, ...]) -> FieldSpec:
    return FieldSpec(p, m, modulus)


def make_field(p: int, m: int = 1, modulus: Sequence[int] | None = None) -> FieldSpec:
    """Interned constructor; validates p, m and the modulus."""
    if not is_prime(p):
        raise ParseError(f"{p} is not prime")
    if m < 1:
        raise ParseError("extension degree must be positive")
    if p ** m > MAX_FIELD_SIZE:
        raise ParseError(f"F_{p}^{m} exceeds the supported size")
    if modulus is None:
        modulus = canonical_modulus(p, m)
    else:
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != m + 1 or modulus[-1] != 1:
            raise ParseError("modulus must be monic of degree m")
        if not _fp_irreducible(list(modulus), p):
            raise ParseError("modulus is reducible")
    return _intern_field(p, m, modulus)


class _IntPolyRing:
    """Integer-coefficient polynomials in one named variable, reduced mod p."""

    def __init__(self, p: int, var: str):
        self.p = p
        self.var = var

    def from_int(self, n: int) -> list[int]:
        return _fp_trim([n % self.p])

    def variable(self, name: str) -> list[int]:
        if name != self.var:
            raise ParseError(f"unknown variable {name!r} (expected {self.var!r})")
        return [0, 1]

    def add(self, a, b):
        n = max(len(a), len(b))
        return _fp_trim([((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)) % self.p
                         for i in range(n)])

    def neg(self, a):
        return [(-c) % self.p for c in a]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if not a or not b:
            return []
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % self.p
        return _fp_trim(out)

    def power(self, a, n):
        out = [1]
        for _ in range(n):
            out = self.mul(out, a)
        return out


def parse_field_spec(text: str) -> FieldSpec:
    """Parse ``"p=3,m=1"`` or ``"p=2,m=2,mod=u^2+u+1"``."""
    entries = {}
    for part in text.split(","):
        if "=" not in part:
            raise ParseError(f"bad field spec component {part!r}")
        key, value = part.split("=", 1)
        key = key.strip()
        if key in entries:
            raise ParseError(f"duplicate key {key!r}")
        entries[key] = value.strip()
    unknown = set(entries) - {"p", "m", "mod"}
    if unknown or "p" not in entries:
        raise ParseError(f"field spec needs p (and optionally m, mod): {text!r}")
    try:
        p = int(entries["p"])
        m = int(entries.get("m", "1"))
    except ValueError as exc:
        raise ParseError(f"bad integer in field spec {text!r}") from exc
    if not is_prime(p):
        raise ParseError(f"{p} is not prime")
    modulus = None
    if "mod" in entries:
        modulus = tuple(_parse.parse_expression(entries["mod"], _IntPolyRing(p, "u")))
    return make_field(p, m, modulus)


class FFElem:
    """An element of a ``FieldSpec``; immutable."""

    __slots__ = ("field", "v")

    def __init__(self, field: FieldSpec, v: int):
        self.field = field
        self.v = v

    def _coerce(self, other) -> int:
        if isinstance(other, FFElem):
            if other.field is not self.field:
                raise FieldMismatch("elements of different fields")
            return other.v
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FFElem(self.field, self.field.add(self.v, o))

    __radd__ = __add__

    def __neg__(self):
        return FFElem(self.field, self.field.neg(self.v))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FFElem(self.field, self.field.sub(self.v, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FFElem(self.field, self.field.sub(o, self.v))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FFElem(self.field, self.field.mul(self.v, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FFElem(self.field, self.field.div(self.v, o))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FFElem(self.field, self.field.div(o, self.v))

    def inverse(self) -> FFElem:
        return FFElem(self.field, self.field.inv(self.v))

    def __pow__(self, n: int) -> FFElem:
        # square-and-multiply; negative exponents go through the inverse
        if n < 0:
            return self.inverse() ** (-n)
        f = self.field
        result, base = 1, self.v
        while n:
            if n & 1:
                result = f.mul(result, base)
            base = f.mul(base, base)
            n >>= 1
        return FFElem(f, result)

    def __eq__(self, other) -> bool:
        if isinstance(other, FFElem):
            return self.field is other.field and self.v == other.v
        if isinstance(other, int):
            return self.v == other % self.field.p
        return NotImplemented

    def __hash__(self) -> int:
        return hash((id(self.field), self.v))

    def __lt__(self, other: FFElem) -> bool:
        return self.v < other.v

    def __int__(self) -> int:
        return self.v

    def is_zero(self) -> bool:
        return self.v == 0

    def is_one(self) -> bool:
        return self.v == 1

    def coords(self) -> list[int]:
        return self.field.coords(self.v)

    def __str__(self) -> str:
        return self.field.format_code(self.v)

    def __repr__(self) -> str:
        return f"FFElem({self}, {self.field.spec_text()})"


def is_qth_power_ext(x, q: int, f: int) -> bool:
    """Whether ``x`` is a q-th power in the degree-f extension of its field.

    ``x`` may be any nonzero finite field element exposing ``field.size``,
    ``**`` and ``is_one`` (base-field elements and residue-field elements
    both qualify).  The extension is never built: with s = |field| the
    exponent (s^f - 1)/q is reduced modulo s - 1, the order of x.
    """
    if x.is_zero():
        raise ValueError("zero has no residue class; handle it through orders")
    if q <= 1 or f < 1:
        raise ValueError("q must be prime and f positive")
    s = x.field.size
    big = s ** f - 1
    if big % q:
        return True
    return (x ** ((big // q) % (s - 1))).is_one()


def find_q_nonresidue(field, q: int):
    """Smallest element (canonical order) that is not a q-th power."""
    if (field.size - 1) % q:
        raise NoNonresidue(f"q={q} does not divide |F|-1={field.size - 1}; every element is a q-th power")
    for x in field.nonzero_elements():
        if not is_qth_power_ext(x, q, 1):
            return x
    raise AssertionError("unreachable: q | |F|-1 forces a nonresidue")


def multiplicative_order(x: FFElem) -> int:
    if x.is_zero():
        raise ValueError("zero has no multiplicative order")
    order = x.field.size - 1
    for r in prime_factors(order):
        while order % r == 0 and (x ** (order // r)).is_one():
            order //= r
    return order
