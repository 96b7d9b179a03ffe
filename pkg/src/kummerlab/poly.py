"""Univariate polynomials over a finite field, and their factorization.

A ``Poly`` stores integer element codes of its ``FieldSpec``, lowest degree
first, with no trailing zeros.  The canonical order on polynomials is by
degree, then by the coefficient tuple compared lowest degree first; factor
lists and irreducible enumerations follow it.

Factorization is squarefree decomposition, then distinct-degree splitting,
then trial division by the monic irreducibles of the degree that is left
(deterministic; desk scale).
"""

from __future__ import annotations

import functools
import itertools
import math
from typing import Iterable, Iterator, Sequence

from .errors import DivisionByZero, FieldMismatch, PreconditionError
from .finite_field import FFElem, FieldSpec, format_poly_terms, prime_factors

NEG_INF = -math.inf


class Poly:
    __slots__ = ("field", "c")

    def __init__(self, field: FieldSpec, coeffs: Iterable[int] = ()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.field = field
        self.c = tuple(c)

    @classmethod
    def const(cls, field: FieldSpec, value: int | FFElem) -> Poly:
        code = value.v if isinstance(value, FFElem) else field.from_int(value)
        return cls(field, (code,))

    @classmethod
    def t(cls, field: FieldSpec) -> Poly:
        return cls(field, (0, 1))

    @classmethod
    def monomial(cls, field: FieldSpec, n: int, coeff: int = 1) -> Poly:
        return cls(field, [0] * n + [coeff])

    # basic accessors

    @property
    def deg(self) -> int:
        """Degree, with -1 for the zero polynomial (internal convenience)."""
        return len(self.c) - 1

    @property
    def degree(self) -> float:
        """Degree, with -inf for the zero polynomial."""
        return NEG_INF if not self.c else len(self.c) - 1

    @property
    def lc(self) -> int:
        return self.c[-1] if self.c else 0

    def coefficient(self, i: int) -> FFElem:
        return FFElem(self.field, self.c[i] if i < len(self.c) else 0)

    def is_zero(self) -> bool:
        return not self.c

    def is_one(self) -> bool:
        return self.c == (1,)

    def is_monic(self) -> bool:
        return bool(self.c) and self.c[-1] == 1

    def key(self) -> tuple:
        return (len(self.c), self.c)

    def _check(self, other: Poly) -> None:
        if other.field is not self.field:
            raise FieldMismatch("polynomials over different fields")

    def _coerce(self, other) -> Poly:
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, FFElem)):
            return Poly.const(self.field, other)
        return NotImplemented

    # ring operations

    def __add__(self, other) -> Poly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        f = self.field
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, y in enumerate(b):
            out[i] = f.add(out[i], y)
        return Poly(f, out)

    __radd__ = __add__

    def __neg__(self) -> Poly:
        f = self.field
        return Poly(f, [f.neg(x) for x in self.c])

    def __sub__(self, other) -> Poly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> Poly:
        return (-self) + other

    def __mul__(self, other) -> Poly:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.c, other.c
        if not a or not b:
            return Poly(self.field)
        f = self.field
        mul, add = f.mul, f.add
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = add(out[i + j], mul(x, y))
        return Poly(f, out)

    __rmul__ = __mul__

    def scale(self, code: int) -> Poly:
        f = self.field
        return Poly(f, [f.mul(code, x) for x in self.c])

    def __pow__(self, n: int) -> Poly:
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly(self.field, (1,))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other: Poly) -> tuple[Poly, Poly]:
        self._check(other)
        if not other.c:
            raise DivisionByZero("polynomial division by zero")
        f = self.field
        rem = list(self.c)
        db = len(other.c) - 1
        inv_lead = f.inv(other.c[-1])
        if len(rem) - 1 < db:
            return Poly(f), self
        quot = [0] * (len(rem) - db)
        b = other.c
        for shift in range(len(rem) - 1 - db, -1, -1):
            coef = rem[shift + db]
            if coef:
                q = f.mul(coef, inv_lead)
                quot[shift] = q
                for i, bc in enumerate(b):
                    if bc:
                        rem[shift + i] = f.sub(rem[shift + i], f.mul(q, bc))
        return Poly(f, quot), Poly(f, rem[:db])

    def __floordiv__(self, other: Poly) -> Poly:
        return divmod(self, other)[0]

    def __mod__(self, other: Poly) -> Poly:
        return divmod(self, other)[1]

    def exact_div(self, other: Poly) -> Poly:
        q, r = divmod(self, other)
        if r.c:
            raise PreconditionError("polynomial division is not exact")
        return q

    def monic(self) -> Poly:
        if not self.c:
            return self
        return self.scale(self.field.inv(self.c[-1]))

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.field is other.field and self.c == other.c
        if isinstance(other, int):
            return self.c == Poly.const(self.field, other).c
        return NotImplemented

    def __hash__(self) -> int:
        return hash((id(self.field), self.c))

    def __lt__(self, other: Poly) -> bool:
        return self.key() < other.key()

    def __call__(self, x):
        """Evaluate at a field element (Horner)."""
        if isinstance(x, FFElem):
            f = self.field
            acc = 0
            for coef in reversed(self.c):
                acc = f.add(f.mul(acc, x.v), coef)
            return FFElem(f, acc)
        acc = None
        for coef in reversed(self.c):
            term = x.lift_code(coef) if hasattr(x, "lift_code") else coef
            acc = term if acc is None else acc * x + term
        return acc if acc is not None else 0

    def eval_code(self, code: int) -> int:
        f = self.field
        acc = 0
        for coef in reversed(self.c):
            acc = f.add(f.mul(acc, code), coef)
        return acc

    def derivative(self) -> Poly:
        f = self.field
        return Poly(f, [f.mul(f.from_int(i), self.c[i]) for i in range(1, len(self.c))])

    def powmod(self, n: int, mod: Poly) -> Poly:
        result = Poly(self.field, (1,)) % mod
        base = self % mod
        while n:
            if n & 1:
                result = (result * base) % mod
            base = (base * base) % mod
            n >>= 1
        return result

    def compose(self, other: Poly) -> Poly:
        acc = Poly(self.field)
        for coef in reversed(self.c):
            acc = acc * other + Poly(self.field, (coef,))
        return acc

    def format(self, var: str = "t") -> str:
        return format_poly_terms([self.field.format_code(x) for x in self.c], var)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"Poly({self.format()})"


def gcd(a: Poly, b: Poly) -> Poly:
    while b.c:
        a, b = b, a % b
    return a.monic()


def xgcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """Return (g, s, t) with s*a + t*b = g monic (or zero)."""
    f = a.field
    r0, r1 = a, b
    s0, s1 = Poly(f, (1,)), Poly(f)
    t0, t1 = Poly(f), Poly(f, (1,))
    while r1.c:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if not r0.c:
        return r0, s0, t0
    inv = f.inv(r0.lc)
    return r0.scale(inv), s0.scale(inv), t0.scale(inv)


def inverse_mod(a: Poly, mod: Poly) -> Poly:
    g, s, _ = xgcd(a % mod, mod)
    if not g.is_one():
        raise DivisionByZero("polynomial is not invertible modulo the given modulus")
    return s % mod


def monic_polys(field: FieldSpec, d: int) -> Iterator[Poly]:
    """All monic polynomials of degree d in canonical order."""
    for low in itertools.product(range(field.size), repeat=d):
        yield Poly(field, low + (1,))


def polys_up_to(field: FieldSpec, d: int) -> Iterator[Poly]:
    """All polynomials of degree <= d (zero first) in canonical order."""
    yield Poly(field)
    for deg in range(0, d + 1):
        for low in itertools.product(range(field.size), repeat=deg):
            for lead in range(1, field.size):
                yield Poly(field, low + (lead,))


def is_irreducible(f: Poly) -> bool:
    """Rabin's test over the coefficient field."""
    n = f.deg
    if n < 1:
        return False
    if n == 1:
        return True
    f = f.monic()
    size = f.field.size
    x = Poly.t(f.field)
    frob = [x % f]
    for _ in range(n):
        frob.append(frob[-1].powmod(size, f))
    if frob[n] != x % f:
        return False
    for r in prime_factors(n):
        if not gcd(frob[n // r] - x, f).is_one():
            return False
    return True


@functools.lru_cache(maxsize=None)
def _irreducibles_cached(field: FieldSpec, d: int) -> tuple[Poly, ...]:
    return tuple(g for g in monic_polys(field, d) if is_irreducible(g))


def irreducibles(field: FieldSpec, d: int) -> tuple[Poly, ...]:
    """Monic irreducibles of degree d in canonical order (memoized)."""
    if field.size ** d > 2_000_000:
        from .errors import LimitExceeded
        raise LimitExceeded(f"enumerating irreducibles of degree {d} over F_{field.size} is out of scale")
    return _irreducibles_cached(field, d)


def _squarefree_parts(f: Poly) -> list[tuple[Poly, int]]:
    """Squarefree decomposition of a monic polynomial: [(g_i, i)]."""
    p = f.field.p
    out: list[tuple[Poly, int]] = []
    if f.deg < 1:
        return out
    df = f.derivative()
    if df.is_zero():
        root = _pth_root(f)
        return [(g, k * p) for g, k in _squarefree_parts(root)]
    c = gcd(f, df)
    w = f.exact_div(c)
    i = 1
    while w.deg > 0:
        y = gcd(w, c)
        z = w.exact_div(y)
        if z.deg > 0:
            out.append((z, i))
        i += 1
        w = y
        c = c.exact_div(y)
    if c.deg > 0:
        root = _pth_root(c)
        out.extend((g, k * p) for g, k in _squarefree_parts(root))
    return out


def _pth_root(f: Poly) -> Poly:
    """f(t) = g(t^p) with coefficients raised to 1/p."""
    field = f.field
    p = field.p
    # Frobenius inverse on F_{p^m}: x -> x^(p^(m-1))
    e = p ** (field.m - 1)
    return Poly(field, [field.power(f.c[i], e) for i in range(0, len(f.c), p)])


def _distinct_degree(f: Poly) -> list[tuple[Poly, int]]:
    out = []
    size = f.field.size
    x = Poly.t(f.field)
    h = x % f
    d = 0
    rest = f
    while rest.deg >= 2 * (d + 1):
        d += 1
        h = h.powmod(size, rest)
        g = gcd(h - x, rest)
        if g.deg > 0:
            out.append((g, d))
            rest = rest.exact_div(g)
            h = h % rest
    if rest.deg > 0:
        out.append((rest, rest.deg))
    return out


def _equal_degree(f: Poly, d: int) -> list[Poly]:
    if f.deg == d:
        return [f]
    found = []
    rest = f
    for g in irreducibles(f.field, d):
        while True:
            q, r = divmod(rest, g)
            if r.c:
                break
            found.append(g)
            rest = q
        if rest.deg <= d:
            break
    if rest.deg > 0:
        found.append(rest)
    return found


def factor_poly(f: Poly) -> list[tuple[Poly, int]]:
    """Monic irreducible factors with multiplicities, in canonical order.

    The leading coefficient is dropped; it is ``f.lc``.
    """
    if f.is_zero():
        raise PreconditionError("cannot factor the zero polynomial")
    counts: dict[Poly, int] = {}
    for part, mult in _squarefree_parts(f.monic()):
        for chunk, d in _distinct_degree(part):
            for g in _equal_degree(chunk, d):
                counts[g] = counts.get(g, 0) + mult
    return sorted(counts.items(), key=lambda item: item[0].key())


def multiply_out(field: FieldSpec, lead: int, factors: Sequence[tuple[Poly, int]]) -> Poly:
    acc = Poly(field, (lead,))
    for g, k in factors:
        acc = acc * g ** k
    return acc
