"""The rational function field K = F_{p^m}(t): elements, places and divisors.

Elements are reduced fractions with a monic denominator.  A place is either
a monic irreducible polynomial or the degree valuation at infinity, whose
uniformizer is 1/t.  Residue fields are F_{p^m}[t]/(pi); at infinity the
residue field is F_{p^m} itself, modelled as F_{p^m}[t]/(t).
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from . import _parse
from .errors import (ContradictoryConstraints, DivisionByZero, LimitExceeded, ParseError,
                     PoleAtPlace, PreconditionError)
from .finite_field import FFElem, FieldSpec
from .poly import Poly, factor_poly, gcd, inverse_mod, irreducibles, is_irreducible

INFINITY = math.inf  # order of zero

_factor_memo = functools.lru_cache(maxsize=8192)(factor_poly)


def factor(f: Poly) -> list[tuple[Poly, int]]:
    """Memoized ``factor_poly`` (the memo is thread-safe)."""
    return _factor_memo(f)


class RatFunc:
    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, *, reduced: bool = False):
        if den is None:
            den = Poly(num.field, (1,))
        if den.is_zero():
            raise DivisionByZero("denominator is zero")
        if not reduced:
            if num.is_zero():
                den = Poly(num.field, (1,))
            else:
                g = gcd(num, den)
                if not g.is_one():
                    num, den = num // g, den // g
                lead = den.lc
                if lead != 1:
                    inv = num.field.inv(lead)
                    num, den = num.scale(inv), den.scale(inv)
        self.num = num
        self.den = den

    @property
    def field(self) -> FieldSpec:
        return self.num.field

    @classmethod
    def const(cls, field: FieldSpec, value: int | FFElem) -> RatFunc:
        return cls(Poly.const(field, value), reduced=True)

    @classmethod
    def t(cls, field: FieldSpec) -> RatFunc:
        return cls(Poly.t(field), reduced=True)

    @classmethod
    def of(cls, field: FieldSpec, value) -> RatFunc:
        if isinstance(value, RatFunc):
            return value
        if isinstance(value, Poly):
            return cls(value, reduced=True)
        if isinstance(value, str):
            return parse_ratfunc(value, field)
        return cls.const(field, value)

    def _coerce(self, other) -> RatFunc:
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc(other, reduced=True)
        if isinstance(other, (int, FFElem)):
            return RatFunc.const(self.field, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, reduced=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> RatFunc:
        if self.num.is_zero():
            raise DivisionByZero("inverse of zero")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int) -> RatFunc:
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc(self.num ** n, self.den ** n, reduced=True)

    def __eq__(self, other) -> bool:
        o = self._coerce(other) if not isinstance(other, RatFunc) else other
        if o is NotImplemented:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def key(self) -> tuple:
        return (self.num.key(), self.den.key())

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def is_constant(self) -> bool:
        return self.num.deg <= 0 and self.den.deg == 0

    def is_poly(self) -> bool:
        return self.den.is_one()

    def heights(self) -> tuple[int, int]:
        return max(self.num.deg, 0), self.den.deg

    def __str__(self) -> str:
        num = self.num.format()
        if self.den.is_one():
            return num
        den = self.den.format()
        if "+" in num or "-" in num[1:]:
            num = f"({num})"
        if "+" in den or "-" in den or "*" in den or "^" in den:
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self) -> str:
        return f"RatFunc({self})"


class _PolyRing:
    """Fold target for the parser: polynomials over F_{p^m} in t."""

    def __init__(self, field: FieldSpec, strict: bool):
        self.field = field
        self.strict = strict

    def from_int(self, n: int) -> Poly:
        if self.strict and not 0 <= n < self.field.p:
            raise ParseError(f"coefficient {n} not in [0, {self.field.p})")
        return Poly.const(self.field, n)

    def variable(self, name: str) -> Poly:
        if name == "t":
            return Poly.t(self.field)
        if name == "u" and self.field.m > 1:
            return Poly.const(self.field, self.field.gen)
        raise ParseError(f"unknown symbol {name!r}")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def power(self, a, n):
        return a ** n


def parse_poly(text: str, field: FieldSpec, strict: bool = False) -> Poly:
    return _parse.parse_expression(text, _PolyRing(field, strict))


def parse_ratfunc(text: str, field: FieldSpec, strict: bool = False) -> RatFunc:
    """Parse an element of K.

    Integer literals are reduced modulo p (so ``3*t`` is zero over F_3);
    with ``strict=True`` literals outside [0, p) are rejected instead.
    Over F_{p^m} with m > 1 the symbol ``u`` names the field generator.
    """
    num_text, den_text = _parse.split_fraction(text)
    num = parse_poly(num_text, field, strict)
    if den_text is None:
        return RatFunc(num, reduced=True)
    den = parse_poly(den_text, field, strict)
    if den.is_zero():
        raise DivisionByZero(f"denominator of {text!r} is zero in characteristic {field.p}")
    return RatFunc(num, den)


# residue fields

class ResidueField:
    """F_{p^m}[t]/(modulus) for a monic irreducible modulus."""

    __slots__ = ("base", "modulus", "degree", "size")

    def __init__(self, base: FieldSpec, modulus: Poly):
        self.base = base
        self.modulus = modulus
        self.degree = modulus.deg
        self.size = base.size ** modulus.deg

    def __call__(self, value) -> ResidueElem:
        if isinstance(value, ResidueElem):
            return value
        if isinstance(value, Poly):
            return ResidueElem(self, value % self.modulus)
        if isinstance(value, RatFunc):
            return ResidueElem(self, value.num * inverse_mod(value.den, self.modulus) % self.modulus)
        return ResidueElem(self, Poly.const(self.base, value))

    def nonzero_elements(self) -> Iterator[ResidueElem]:
        n, base = self.degree, self.base
        for deg in range(n):
            for low in itertools.product(range(base.size), repeat=deg):
                for lead in range(1, base.size):
                    yield ResidueElem(self, Poly(base, low + (lead,)))

    def elements(self) -> Iterator[ResidueElem]:
        yield ResidueElem(self, Poly(self.base))
        yield from self.nonzero_elements()

    @property
    def one(self) -> ResidueElem:
        return ResidueElem(self, Poly(self.base, (1,)))

    def __eq__(self, other) -> bool:
        return isinstance(other, ResidueField) and self.modulus == other.modulus

    def __hash__(self) -> int:
        return hash(self.modulus)

    def __repr__(self) -> str:
        return f"ResidueField(F_{self.base.size}[t]/({self.modulus}))"


class ResidueElem:
    __slots__ = ("field", "poly")

    def __init__(self, field: ResidueField, poly: Poly):
        self.field = field
        self.poly = poly

    def _other(self, other) -> Poly:
        if isinstance(other, ResidueElem):
            return other.poly
        return self.field(other).poly

    def __add__(self, other):
        return ResidueElem(self.field, self.poly + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return ResidueElem(self.field, self.poly - self._other(other))

    def __neg__(self):
        return ResidueElem(self.field, -self.poly)

    def __mul__(self, other):
        return ResidueElem(self.field, (self.poly * self._other(other)) % self.field.modulus)

    __rmul__ = __mul__

    def inverse(self) -> ResidueElem:
        return ResidueElem(self.field, inverse_mod(self.poly, self.field.modulus))

    def __truediv__(self, other):
        return self * ResidueElem(self.field, self._other(other)).inverse()

    def __pow__(self, n: int) -> ResidueElem:
        if n < 0:
            return self.inverse() ** (-n)
        return ResidueElem(self.field, self.poly.powmod(n, self.field.modulus))

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def is_one(self) -> bool:
        return self.poly.is_one()

    def __eq__(self, other) -> bool:
        if isinstance(other, ResidueElem):
            return self.poly == other.poly
        return self.poly == self.field(other).poly

    def __hash__(self) -> int:
        return hash(self.poly)

    def key(self) -> tuple:
        return self.poly.key()

    def __str__(self) -> str:
        return self.poly.format("t") if self.field.degree > 1 else self.field.base.format_code(
            self.poly.c[0] if self.poly.c else 0)

    def __repr__(self) -> str:
        return f"ResidueElem({self})"


# places

@dataclass(frozen=True)
class Place:
    """A place of K: ``poly`` is a monic irreducible, or None at infinity."""

    field: FieldSpec
    poly: Poly | None = None

    @classmethod
    def infinity(cls, field: FieldSpec) -> Place:
        return cls(field, None)

    @classmethod
    def finite(cls, poly: Poly, check: bool = True) -> Place:
        if check and (not poly.is_monic() or not is_irreducible(poly)):
            raise PreconditionError(f"{poly} is not a monic irreducible polynomial")
        return cls(poly.field, poly)

    @property
    def is_infinite(self) -> bool:
        return self.poly is None

    @property
    def degree(self) -> int:
        return 1 if self.poly is None else self.poly.deg

    def key(self) -> tuple:
        # finite places in canonical polynomial order, infinity last
        return (1,) if self.poly is None else (0, self.poly.key())

    def __lt__(self, other: Place) -> bool:
        return self.key() < other.key()

    def uniformizer(self) -> RatFunc:
        if self.poly is None:
            return RatFunc(Poly(self.field, (1,)), Poly.t(self.field), reduced=True)
        return RatFunc(self.poly, reduced=True)

    def residue_field(self) -> ResidueField:
        return _residue_field(self.field, self.poly if self.poly is not None else Poly.t(self.field))

    def __str__(self) -> str:
        return "inf" if self.poly is None else self.poly.format()

    def __repr__(self) -> str:
        return f"Place({self})"


@functools.lru_cache(maxsize=None)
def _residue_field(field: FieldSpec, modulus: Poly) -> ResidueField:
    return ResidueField(field, modulus)


def parse_place(text: str, field: FieldSpec) -> Place:
    text = text.strip()
    if text in ("inf", "infinity", "oo"):
        return Place.infinity(field)
    poly = parse_poly(text, field)
    if not poly.is_monic() or not is_irreducible(poly):
        raise ParseError(f"place {text!r} is not a monic irreducible polynomial")
    return Place(field, poly)


def places_up_to(field: FieldSpec, max_degree: int, include_infinity: bool = True) -> list[Place]:
    out = [Place(field, g) for d in range(1, max_degree + 1) for g in irreducibles(field, d)]
    if include_infinity:
        out.append(Place.infinity(field))
    return out


def _multiplicity(f: Poly, pi: Poly) -> int:
    k = 0
    while True:
        q, r = divmod(f, pi)
        if not r.is_zero():
            return k
        f = q
        k += 1


def ord_at(x: RatFunc, place: Place) -> int | float:
    """Order of x at the place; ``INFINITY`` for x = 0."""
    if x.is_zero():
        return INFINITY
    if place.poly is None:
        return x.den.deg - x.num.deg
    return _multiplicity(x.num, place.poly) - _multiplicity(x.den, place.poly)


def residue_at(x: RatFunc, place: Place) -> ResidueElem:
    """Residue of x in the residue field of the place (x must be integral)."""
    kappa = place.residue_field()
    if x.is_zero():
        return kappa(0)
    o = ord_at(x, place)
    if o < 0:
        raise PoleAtPlace(f"{x} has a pole at {place}")
    if o > 0:
        return kappa(0)
    if place.poly is None:
        return kappa(Poly(x.field, (x.field.div(x.num.lc, x.den.lc),)))
    return kappa(x)


def unit_part_residue(x: RatFunc, place: Place) -> ResidueElem:
    """Residue of x * uniformizer^(-ord x): the leading coefficient at the place."""
    o = ord_at(x, place)
    if o == INFINITY:
        raise PreconditionError("zero has no unit part")
    return residue_at(x * place.uniformizer() ** (-o), place)


# divisors

class Divisor:
    """Finite formal sum of places with nonzero integer orders."""

    __slots__ = ("entries",)

    def __init__(self, entries: dict | Iterable = ()):
        items = entries.items() if isinstance(entries, dict) else entries
        clean = {}
        for place, k in items:
            k = clean.get(place, 0) + k
            clean[place] = k
        self.entries = dict(sorted(((p, k) for p, k in clean.items() if k), key=lambda e: e[0].key()))

    def degree(self) -> int:
        return sum(k * place.degree for place, k in self.entries.items())

    def support(self) -> list[Place]:
        return list(self.entries)

    def is_empty(self) -> bool:
        return not self.entries

    def is_qth_power(self, q: int) -> bool:
        return all(k % q == 0 for k in self.entries.values())

    def zeros(self) -> list[Place]:
        return [p for p, k in self.entries.items() if k > 0]

    def poles(self) -> list[Place]:
        return [p for p, k in self.entries.items() if k < 0]

    def __getitem__(self, place: Place) -> int:
        return self.entries.get(place, 0)

    def __add__(self, other: Divisor) -> Divisor:
        return Divisor(list(self.entries.items()) + list(other.entries.items()))

    def __neg__(self) -> Divisor:
        return Divisor({p: -k for p, k in self.entries.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, Divisor) and self.entries == other.entries

    def to_json(self) -> dict[str, int]:
        return {str(p): k for p, k in self.entries.items()}

    def __repr__(self) -> str:
        return f"Divisor({self.to_json()})"


def divisor_of(x: RatFunc) -> Divisor:
    if x.is_zero():
        raise PreconditionError("zero has no divisor")
    field = x.field
    entries: dict[Place, int] = {}
    if x.num.deg > 0:
        for g, k in factor(x.num):
            entries[Place(field, g)] = k
    if x.den.deg > 0:
        for g, k in factor(x.den):
            entries[Place(field, g)] = -k
    entries[Place.infinity(field)] = x.den.deg - x.num.deg
    return Divisor(entries)


# q-th powers in K

class PowerTest:
    """Outcome of a q-th power test; truthy iff the element is a q-th power."""

    __slots__ = ("value", "root")

    def __init__(self, value: bool, root: RatFunc | None = None):
        self.value = value
        self.root = root

    def __bool__(self) -> bool:
        return self.value

    def __repr__(self) -> str:
        return f"PowerTest({self.value}, root={self.root})"


def _constant_qth_root(field: FieldSpec, code: int, q: int) -> int | None:
    order = field.size - 1
    if order == 0:
        return code
    log = field.dlog(code)
    g = math.gcd(q, order)
    if log % g:
        return None
    # solve q*k = log (mod order)
    k = (log // g) * pow(q // g, -1, order // g) % (order // g) if order // g > 1 else 0
    return field.generator_power(k)


def is_qth_power_in_K(x: RatFunc, q: int) -> PowerTest:
    """Whether x is a q-th power in K; the root is attached when it is."""
    if x.is_zero():
        raise PreconditionError("zero is excluded from q-th power tests")
    field = x.field
    root_num = Poly(field, (1,))
    root_den = Poly(field, (1,))
    for poly, target in ((x.num, "num"), (x.den, "den")):
        if poly.deg <= 0:
            continue
        for g, k in factor(poly):
            if k % q:
                return PowerTest(False)
            if target == "num":
                root_num = root_num * g ** (k // q)
            else:
                root_den = root_den * g ** (k // q)
    lead = _constant_qth_root(field, x.num.lc, q)
    if lead is None:
        return PowerTest(False)
    return PowerTest(True, RatFunc(root_num.scale(lead), root_den))


# weak approximation

@dataclass(frozen=True)
class Constraint:
    """Prescribe ord_place(x) = order and, optionally, the unit part modulo place^precision."""

    place: Place
    order: int
    residue: object | None = None
    precision: int = 1


def _as_constraint(item) -> Constraint:
    if isinstance(item, Constraint):
        return item
    return Constraint(*item)


def _unit_target(c: Constraint, modulus: Poly) -> Poly:
    """The prescribed unit class as a polynomial modulo ``modulus``."""
    field = c.place.field
    r = c.residue
    if isinstance(r, ResidueElem):
        r = r.poly
    if isinstance(r, (int, FFElem)):
        r = Poly.const(field, r)
    if isinstance(r, RatFunc):
        if not gcd(r.den, c.place.poly).is_one():
            raise ContradictoryConstraints(f"residue target {r} is not integral at {c.place}")
        r = r.num * inverse_mod(r.den, modulus)
    r = r % modulus
    if (r % c.place.poly).is_zero():
        raise ContradictoryConstraints(f"residue target at {c.place} is not a unit")
    return r


def _crt(residues: Sequence[tuple[Poly, Poly]], field: FieldSpec) -> tuple[Poly, Poly]:
    n0 = Poly(field)
    m = Poly(field, (1,))
    for r, mod in residues:
        # n0 + m*s == r mod mod
        s = ((r - n0) * inverse_mod(m % mod, mod)) % mod
        n0 = n0 + m * s
        m = m * mod
        n0 = n0 % m
    return n0, m


def _lexmin_in_coset(base: Poly, modulus: Poly, top: int, free: int) -> Poly:
    """Lexicographically smallest base + modulus*h with deg h < free (h low part).

    ``top`` is unused here but documents that the leading part is already in base.
    """
    field = base.field
    coeffs = list(base.c) + [0] * max(0, modulus.deg + free - len(base.c))
    low = 0
    while low < len(modulus.c) and modulus.c[low] == 0:
        low += 1
    mc = modulus.c
    for i in range(free):
        pos = low + i
        val = coeffs[pos]
        if val:
            # subtract (val / mc[low]) * modulus * t^i
            factor_code = field.div(val, mc[low])
            for j, y in enumerate(mc):
                if y:
                    coeffs[i + j] = field.sub(coeffs[i + j], field.mul(factor_code, y))
    return Poly(field, coeffs)


def weak_approx(constraints: Sequence, *, max_extra: int = 24) -> RatFunc:
    """An element of K meeting prescribed orders and unit classes at finitely many places.

    The output is canonical: the denominator is the product of the prescribed
    pole factors times the least power of the first unconstrained monic
    irreducible that makes the system solvable, and among numerators of that
    denominator the one of least degree, then least coefficient vector, wins.
    Residue targets at infinity prescribe the leading-coefficient ratio
    (precision 1 only).
    """
    cons = [_as_constraint(c) for c in constraints]
    seen = set()
    for c in cons:
        if c.place in seen:
            raise ContradictoryConstraints(f"two constraints at {c.place}")
        seen.add(c.place)
        if c.precision < 1:
            raise PreconditionError("precision must be positive")
    if not cons:
        raise PreconditionError("weak approximation needs at least one constraint")
    field = cons[0].place.field
    finite = [c for c in cons if not c.place.is_infinite]
    inf = [c for c in cons if c.place.is_infinite]
    inf_c = inf[0] if inf else None
    if inf_c is not None and inf_c.residue is not None and inf_c.precision != 1:
        raise PreconditionError("residue targets at infinity support precision 1 only")

    d0 = Poly(field, (1,))
    for c in finite:
        if c.order < 0:
            d0 = d0 * c.place.poly ** (-c.order)
    constrained = {c.place.poly for c in finite}
    extra = None
    for d in itertools.count(1):
        extra = next((g for g in irreducibles(field, d) if g not in constrained), None)
        if extra is not None:
            break

    inf_lead = None
    if inf_c is not None and inf_c.residue is not None:
        r = inf_c.residue
        if isinstance(r, ResidueElem):
            r = r.poly.c[0] if r.poly.c else 0
        elif isinstance(r, FFElem):
            r = r.v
        elif isinstance(r, RatFunc):
            r = residue_at(r, Place.infinity(field)).poly
            r = r.c[0] if r.c else 0
        elif isinstance(r, Poly):
            r = r.c[0] if r.c and r.deg == 0 else None
        else:
            r = field.from_int(r)
        if not r:
            raise ContradictoryConstraints("residue target at infinity is not a unit")
        inf_lead = r

    for e in range(max_extra + 1):
        den = d0 * extra ** e
        class_options = []
        for c in finite:
            pi = c.place.poly
            s = max(c.order, 0)
            cofactor = den.exact_div(pi ** max(0, -c.order))
            if c.residue is not None:
                mod = pi ** (s + c.precision)
                unit = _unit_target(c, pi ** c.precision)
                class_options.append([((pi ** s) * unit * cofactor % mod, mod)])
            else:
                mod = pi ** (s + 1)
                kappa = c.place.residue_field()
                opts = [((pi ** s) * u.poly * cofactor % mod, mod) for u in kappa.nonzero_elements()]
                class_options.append(opts)
        n_combos = 1
        for opts in class_options:
            n_combos *= len(opts)
        if n_combos > 200_000:
            raise LimitExceeded("too many residue-class combinations in weak approximation")
        best = None
        for combo in itertools.product(*class_options):
            n0, m = _crt(combo, field)
            if inf_c is None:
                cand = n0 if not n0.is_zero() else m
                if best is None or cand.key() < best.key():
                    best = cand
                continue
            target_deg = den.deg - inf_c.order
            if target_deg < 0:
                break
            if target_deg < m.deg:
                if n0.deg != target_deg:
                    continue
                if inf_lead is not None and n0.lc != inf_lead:
                    continue
                cand = n0
                if best is None or cand.key() < best.key():
                    best = cand
                continue
            k = target_deg - m.deg
            leads = [inf_lead] if inf_lead is not None else range(1, field.size)
            for lead in leads:
                base = n0 + m * Poly.monomial(field, k, lead)
                cand = _lexmin_in_coset(base, m, target_deg, k)
                if best is None or cand.key() < best.key():
                    best = cand
        if best is not None:
            x = RatFunc(best, den)
            _verify_constraints(x, cons)
            return x
    raise LimitExceeded("weak approximation did not terminate within the extra-degree budget")


def _verify_constraints(x: RatFunc, cons: Sequence[Constraint]) -> None:
    for c in cons:
        if ord_at(x, c.place) != c.order:
            raise AssertionError(f"weak approximation missed the order at {c.place}")
        if c.residue is None:
            continue
        unit = x * c.place.uniformizer() ** (-c.order)
        if c.place.is_infinite:
            got = residue_at(unit, c.place)
            want = c.residue
            if isinstance(want, RatFunc):
                want = residue_at(want, c.place)
            if got != want if isinstance(want, ResidueElem) else got != c.place.residue_field()(want):
                raise AssertionError("weak approximation missed the residue at infinity")
            continue
        mod = c.place.poly ** c.precision
        got = unit.num * inverse_mod(unit.den, mod) % mod
        if got != _unit_target(c, mod):
            raise AssertionError(f"weak approximation missed the residue at {c.place}")


# enumeration helpers for sweeps and tests

def ratfuncs_up_to(field: FieldSpec, num_deg: int, den_deg: int) -> Iterator[RatFunc]:
    """Every nonzero reduced element with deg num <= num_deg, deg den <= den_deg.

    Each element appears once, in a deterministic order.
    """
    from .poly import monic_polys, polys_up_to
    dens = [Poly(field, (1,))] + [g for d in range(1, den_deg + 1) for g in monic_polys(field, d)]
    for den in dens:
        for num in polys_up_to(field, num_deg):
            if num.is_zero():
                continue
            if gcd(num, den).is_one():
                yield RatFunc(num, den, reduced=True)


def random_ratfunc(field: FieldSpec, rng, num_deg: int, den_deg: int) -> RatFunc:
    while True:
        dn = rng.randint(0, num_deg)
        dd = rng.randint(0, den_deg)
        num = Poly(field, [rng.randrange(field.size) for _ in range(dn)] + [rng.randrange(1, field.size)])
        den = Poly(field, [rng.randrange(field.size) for _ in range(dd)] + [1])
        return RatFunc(num, den)
