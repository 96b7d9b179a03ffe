"""Kummer towers L = K(c_1^(1/q), ..., c_n^(1/q)) over K = F_{p^m}(t) and their factor trees.

All radicands live in K.  A place of L is described by the base place below
it together with a path through the factor tree: one tag per nontrivial step,
``S<branch>`` (split), ``I`` (inert) or ``R`` (ramified).  Because q is prime
to p, every step is tame, so the whole decomposition is governed by orders
and residues of base-field elements:

* the ramification index along any path is 1 or q;
* once a step ramifies, its radicand (whose order at the base place is
  prime to q) becomes a q-th power in L, which lets any other base-field
  element be moved to order divisible by q without changing its class
  modulo q-th powers;
* a base-field unit is a q-th power in the completion iff its residue is a
  q-th power in the residue field of the path, which has degree f over the
  residue field of the base place.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterator, Sequence

from .errors import LimitExceeded, MissingRootOfUnity, PreconditionError
from .finite_field import FieldSpec, is_prime, is_qth_power_ext
from .ratfunc import (INFINITY, Place, RatFunc, ResidueElem, divisor_of, ord_at,
                      residue_at)

MAX_DEPTH = 6
MAX_PLACE_DEGREE = 6

SPLIT = "split"
INERT = "inert"
RAMIFIED = "ramified"


def _check_q(field: FieldSpec, q: int) -> None:
    if not is_prime(q):
        raise PreconditionError(f"q = {q} is not prime")
    if (field.size - 1) % q:
        raise MissingRootOfUnity(f"q = {q} does not divide {field.size} - 1")


# q-th powers in a tower: linear algebra over Z/q on (divisor, leading-log) vectors

def _class_vector(x: RatFunc, q: int, support: Sequence[Place]) -> list[int]:
    """Coordinates of x in K* / K*^q relative to a support containing supp(div x)."""
    div = divisor_of(x)
    field = x.field
    lead = field.div(x.num.lc, x.den.lc)
    vec = [div[p] % q for p in support]
    vec.append(field.dlog(lead) % q)
    return vec


def _in_span(target: list[int], basis: list[list[int]], q: int) -> bool:
    """Whether target lies in the Z/q-span of basis (q prime)."""
    rows = [list(b) for b in basis]
    t = list(target)
    width = len(t)
    pivots: list[tuple[int, list[int]]] = []
    for row in rows:
        for col, prow in pivots:
            if row[col]:
                factor = row[col]
                row = [(a - factor * b) % q for a, b in zip(row, prow)]
        col = next((i for i in range(width) if row[i]), None)
        if col is None:
            continue
        inv = pow(row[col], -1, q)
        row = [a * inv % q for a in row]
        # keep previously stored rows reduced in this column
        pivots = [(c, [(a - r[col] * b) % q for a, b in zip(r, row)]) for c, r in pivots]
        pivots.append((col, row))
    for col, prow in pivots:
        if t[col]:
            factor = t[col]
            t = [(a - factor * b) % q for a, b in zip(t, prow)]
    return not any(t)


def _support_of(elements: Sequence[RatFunc]) -> list[Place]:
    places: set[Place] = set()
    for x in elements:
        places.update(divisor_of(x).support())
    return sorted(places, key=Place.key)


def is_qth_power_in_extension(x: RatFunc, radicands: Sequence[RatFunc], q: int) -> bool:
    """Whether x lies in K^q times the group generated by the radicands."""
    if x.is_zero():
        raise PreconditionError("zero is excluded from q-th power tests")
    support = _support_of([x, *radicands])
    target = _class_vector(x, q, support)
    basis = [_class_vector(c, q, support) for c in radicands]
    return _in_span(target, basis, q)


@dataclass(frozen=True)
class Tower:
    field: FieldSpec
    q: int
    radicands: tuple[RatFunc, ...]
    nontrivial_flags: tuple[bool, ...]

    @property
    def depth(self) -> int:
        return len(self.radicands)

    @property
    def degree(self) -> int:
        return self.q ** sum(self.nontrivial_flags)

    def nontrivial_radicands(self) -> list[RatFunc]:
        return [c for c, flag in zip(self.radicands, self.nontrivial_flags) if flag]

    def extend(self, c: RatFunc) -> Tower:
        return tower_make(self.field, self.q, [*self.radicands, c])

    def prefix(self, n: int) -> Tower:
        return Tower(self.field, self.q, self.radicands[:n], self.nontrivial_flags[:n])

    def to_json(self) -> dict:
        return {"field": self.field.spec_text(), "q": self.q,
                "radicands": [str(c) for c in self.radicands],
                "nontrivial_flags": list(self.nontrivial_flags), "degree": self.degree}


def tower_make(field: FieldSpec, q: int, radicands: Sequence[RatFunc]) -> Tower:
    _check_q(field, q)
    radicands = tuple(radicands)
    if len(radicands) > MAX_DEPTH:
        raise LimitExceeded(f"tower depth {len(radicands)} exceeds {MAX_DEPTH}")
    flags = []
    for i, c in enumerate(radicands):
        if c.is_zero():
            raise PreconditionError(f"radicand {i} is zero")
        if c.field is not field:
            raise PreconditionError(f"radicand {i} lives over a different field")
        earlier = [d for d, flag in zip(radicands[:i], flags) if flag]
        flags.append(not is_qth_power_in_extension(c, earlier, q))
    return Tower(field, q, radicands, tuple(flags))


def empty_tower(field: FieldSpec, q: int) -> Tower:
    return tower_make(field, q, [])


def is_qth_power_in_tower(x: RatFunc, tower: Tower) -> bool:
    """Kummer criterion: x in L^q iff x * prod c_i^(e_i) in K^q for some exponent vector."""
    if tower.depth > MAX_DEPTH:
        raise LimitExceeded(f"tower depth {tower.depth} exceeds {MAX_DEPTH}")
    return is_qth_power_in_extension(x, tower.nontrivial_radicands(), tower.q)


# places of a tower

@dataclass(frozen=True)
class TowerPlace:
    """A place of a tower: base place plus factor-tree path.

    ``ram_radicand`` is the radicand of the ramified step on the path (if
    any); it has order prime to q at the base place and is a q-th power in L.
    """

    base_place: Place
    path: tuple[str, ...] = ()
    e: int = 1
    f: int = 1
    ram_radicand: RatFunc | None = dc_field(default=None, compare=False)

    @property
    def path_string(self) -> str:
        return ".".join(self.path)

    def key(self) -> tuple:
        return (self.base_place.key(), self.path)

    @property
    def degree(self) -> int:
        """Absolute residue degree over F_{p^m}."""
        return self.base_place.degree * self.f

    def child(self, kind: str, q: int, branch: int | None = None,
              radicand: RatFunc | None = None) -> TowerPlace:
        if kind == SPLIT:
            return TowerPlace(self.base_place, self.path + (f"S{branch}",), self.e, self.f,
                              self.ram_radicand)
        if kind == INERT:
            return TowerPlace(self.base_place, self.path + ("I",), self.e, self.f * q,
                              self.ram_radicand)
        return TowerPlace(self.base_place, self.path + ("R",), self.e * q, self.f, radicand)

    def __str__(self) -> str:
        return f"{self.base_place}[{self.path_string}]" if self.path else str(self.base_place)

    def to_json(self) -> dict:
        return {"base_place": str(self.base_place), "path": self.path_string,
                "e": self.e, "f": self.f}


def root_place(base: Place) -> TowerPlace:
    return TowerPlace(base)


def tower_ord(x: RatFunc, tp: TowerPlace) -> int | float:
    """Normalized order at tp of a base-field element (``INFINITY`` for zero)."""
    o = ord_at(x, tp.base_place)
    return INFINITY if o == INFINITY else tp.e * o


def unit_class_residue(x: RatFunc, tp: TowerPlace, q: int) -> ResidueElem:
    """Residue of a unit at tp in the same class as x modulo q-th powers of L_tp.

    Requires tower_ord(x, tp) to be divisible by q.  The result lies in the
    residue field of the base place; its q-th power status must be read in
    the degree-f extension.
    """
    place = tp.base_place
    o = ord_at(x, place)
    if o == INFINITY:
        raise PreconditionError("zero has no unit class")
    if (tp.e * o) % q:
        raise PreconditionError(f"order {tp.e * o} at {tp} is not divisible by {q}")
    if o % q:
        rho = tp.ram_radicand
        if rho is None:
            raise PreconditionError("ramified path without a recorded radicand")
        s = ord_at(rho, place)
        # rho is a q-th power in L: x * rho^(-l) has the same class
        l = o * pow(s, -1, q) % q
        x = x * rho ** (-l)
        o = ord_at(x, place)
    return residue_at(x * place.uniformizer() ** (-o), place)


def classify_place_step(tp: TowerPlace, c: RatFunc, q: int) -> str:
    """Behaviour of tp in the step adjoining the q-th root of c (assumed nontrivial)."""
    if c.is_zero():
        raise PreconditionError("radicand is zero")
    v = tower_ord(c, tp)
    if v % q:
        return RAMIFIED
    r = unit_class_residue(c, tp, q)
    return SPLIT if is_qth_power_ext(r, q, tp.f) else INERT


def residue_qth_power_test(x: RatFunc, tp: TowerPlace, q: int) -> bool:
    """Whether the residue of the unit x at tp is a q-th power in the residue field of tp."""
    if x.is_zero():
        raise PreconditionError("zero has no residue class")
    if tower_ord(x, tp) != 0:
        raise PreconditionError(f"{x} is not a unit at {tp}")
    return is_qth_power_ext(unit_class_residue(x, tp, q), q, tp.f)


def _check_place(base: Place, limit: int = MAX_PLACE_DEGREE) -> None:
    if base.degree > limit:
        raise LimitExceeded(f"base place degree {base.degree} exceeds {limit}")


def _children(tp: TowerPlace, c: RatFunc, q: int) -> list[TowerPlace]:
    kind = classify_place_step(tp, c, q)
    if kind == SPLIT:
        return [tp.child(SPLIT, q, b) for b in range(q)]
    return [tp.child(kind, q, radicand=c)]


def places_above(tower: Tower, base: Place, *,
                 max_place_degree: int = MAX_PLACE_DEGREE) -> list[TowerPlace]:
    """All leaves of the factor tree of the base place, in depth-first branch order."""
    _check_place(base, max_place_degree)
    if tower.depth > MAX_DEPTH:
        raise LimitExceeded(f"tower depth {tower.depth} exceeds {MAX_DEPTH}")
    level = [root_place(base)]
    for c in tower.nontrivial_radicands():
        level = [child for tp in level for child in _children(tp, c, tower.q)]
    return level


def places_above_all(tower: Tower, bases: Sequence[Place]) -> Iterator[TowerPlace]:
    for base in sorted(set(bases), key=Place.key):
        yield from places_above(tower, base)


def factor_tree(tower: Tower, base: Place) -> dict:
    """Serializable factor tree: nested nodes {step, kind, branch, e, f, children}."""
    _check_place(base)
    steps = [i for i, flag in enumerate(tower.nontrivial_flags) if flag]

    def build(tp: TowerPlace, depth: int) -> list[dict]:
        if depth == len(steps):
            return []
        i = steps[depth]
        c = tower.radicands[i]
        kind = classify_place_step(tp, c, tower.q)
        nodes = []
        for child in _children(tp, c, tower.q):
            tag = child.path[-1]
            nodes.append({"step": i, "kind": kind,
                          "branch": int(tag[1:]) if tag.startswith("S") else None,
                          "e": child.e, "f": child.f, "path": child.path_string,
                          "children": build(child, depth + 1)})
        return nodes

    return {"place": str(base), "degree": tower.degree, "children": build(root_place(base), 0)}


def fundamental_identity_holds(tower: Tower, base: Place) -> bool:
    return sum(tp.e * tp.f for tp in places_above(tower, base)) == tower.degree
