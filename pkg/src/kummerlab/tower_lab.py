"""Factor trees through multi-level towers, q-boundedness profiles, and
towers in which the prime (t) has a single factor at every level.

Residue fields are built explicitly here: every node of a factor tree holds a
concrete field F_{p^M} together with the images of the base residue field and
of the tower generators.  Splitting is then read off by discrete logarithms
and root enumeration in that field, independently of the exponent criterion
used by ``kummer_tower``.

Levels come in two kinds.  A Kummer level adjoins a q-th root of a base-field
element.  A Defined level adjoins a root of a monic polynomial whose
coefficients are tower elements (polynomials in the earlier generators with
rational-function coefficients).  Places above a Defined level are followed
only when a certificate applies: either the reduction of the polynomial stays
irreducible over the residue field (inert step), or its constant coefficient
has normalized order exactly -1 while the other coefficients are integral
(totally ramified step, which also proves the polynomial irreducible).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb
from typing import Sequence

from .errors import CannotClassify, LimitExceeded, PreconditionError
from .finite_field import FieldSpec, is_prime, make_field
from .kummer_tower import _check_q, is_qth_power_in_extension
from .poly import Poly, factor_poly, gcd, is_irreducible, monic_polys
from .ratfunc import INFINITY, Place, RatFunc, ord_at, residue_at

EXPLICIT_FIELD_LIMIT = 1 << 16
MAX_TREE_DEPTH = 6
MAX_INERT_LEVELS = 4
MAX_INERT_DEGREE = 16

KUMMER = "kummer"
DEFINED = "defined"

BOUNDED_SO_FAR = "BoundedSoFar"
UNBOUNDED_EVIDENCE = "UnboundedEvidence"


# tower elements: {exponent tuple (trailing zeros stripped): RatFunc}

def _strip(exps: Sequence[int]) -> tuple[int, ...]:
    exps = list(exps)
    while exps and exps[-1] == 0:
        exps.pop()
    return tuple(exps)


def _add_exps(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    n = max(len(a), len(b))
    return _strip([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def element(terms: dict) -> dict:
    """Normalize a {exponents: RatFunc} mapping (drops zero terms)."""
    out: dict[tuple[int, ...], RatFunc] = {}
    for exps, c in terms.items():
        key = _strip(exps)
        out[key] = out[key] + c if key in out else c
    return {k: v for k, v in out.items() if not v.is_zero()}


def const_element(x: RatFunc) -> dict:
    return {} if x.is_zero() else {(): x}


def generator_element(field: FieldSpec, j: int, coeff: RatFunc | None = None) -> dict:
    coeff = RatFunc.const(field, 1) if coeff is None else coeff
    return element({(0,) * j + (1,): coeff})


def format_element(x: dict) -> str:
    if not x:
        return "0"
    parts = []
    for exps in sorted(x, key=lambda e: (len(e), e)):
        c = x[exps]
        gens = "*".join(f"a{j}" if k == 1 else f"a{j}^{k}" for j, k in enumerate(exps) if k)
        if not gens:
            parts.append(str(c))
        elif c.is_one():
            parts.append(gens)
        else:
            text = str(c)
            if "+" in text or "-" in text[1:]:
                text = f"({text})"
            parts.append(f"{text}*{gens}")
    return " + ".join(parts)


@dataclass(frozen=True)
class LevelSpec:
    """One level of a tower.

    Kummer levels carry the radicand and q.  Defined levels carry the
    coefficients A_0 .. A_{n-1} of a monic polynomial in X (the leading
    coefficient 1 is implicit); each coefficient is a tower element in the
    generators of the earlier levels.
    """

    kind: str
    degree: int
    radicand: RatFunc | None = None
    coeffs: tuple = ()
    label: str = ""

    @classmethod
    def kummer(cls, radicand: RatFunc, q: int) -> LevelSpec:
        if radicand.is_zero():
            raise PreconditionError("radicand is zero")
        if not is_prime(q):
            raise PreconditionError(f"q = {q} is not prime")
        return cls(KUMMER, q, radicand=radicand, label=f"kummer({radicand})")

    @classmethod
    def defined(cls, coeffs: Sequence[dict], label: str = "") -> LevelSpec:
        """Monic polynomial X^n + A_{n-1} X^(n-1) + ... + A_0 from A_0 .. A_{n-1}."""
        if len(coeffs) < 1:
            raise PreconditionError("a defined level needs degree at least 1")
        coeffs = tuple(element(c) for c in coeffs)
        level = cls(DEFINED, len(coeffs), coeffs=coeffs)
        return cls(DEFINED, len(coeffs), coeffs=coeffs, label=label or level.polynomial_text())

    @classmethod
    def from_ratfuncs(cls, coeffs: Sequence[RatFunc]) -> LevelSpec:
        """Defined level from base-field coefficients A_0 .. A_n, low degree first."""
        coeffs = list(coeffs)
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        if len(coeffs) < 2:
            raise PreconditionError("a defined level needs degree at least 1")
        if not coeffs[-1].is_one():
            raise PreconditionError("defined polynomials must be monic in X")
        return cls.defined([const_element(c) for c in coeffs[:-1]])

    def polynomial_text(self) -> str:
        if self.kind == KUMMER:
            return f"X^{self.degree} - ({self.radicand})"
        parts = [f"X^{self.degree}"]
        for i in range(self.degree - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("*X" if i == 1 else f"*X^{i}")
            parts.append(f"({format_element(c)}){mono}")
        return " + ".join(parts)

    def generators_used(self) -> int:
        return max((len(e) for c in self.coeffs for e in c), default=0)

    def to_json(self) -> dict:
        out = {"kind": self.kind, "degree": self.degree, "polynomial": self.polynomial_text()}
        if self.kind == KUMMER:
            out["radicand"] = str(self.radicand)
        return out


class TowerAlgebra:
    """Arithmetic in K[a_0, ..., a_{k-1}] modulo the level relations."""

    __slots__ = ("field", "levels", "_relations")

    def __init__(self, field: FieldSpec, levels: Sequence[LevelSpec]):
        self.field = field
        self.levels = tuple(levels)
        for j, level in enumerate(self.levels):
            if level.kind == DEFINED and level.generators_used() > j:
                raise PreconditionError(f"level {j} refers to a later generator")
        self._relations: dict[int, dict] = {}

    def _relation(self, j: int) -> dict:
        """The element equal to a_j^(degree of level j)."""
        rel = self._relations.get(j)
        if rel is None:
            level = self.levels[j]
            if level.kind == KUMMER:
                rel = const_element(level.radicand)
            else:
                rel = {}
                for i, c in enumerate(level.coeffs):
                    for exps, coef in c.items():
                        rel = self.add(rel, {_add_exps(exps, (0,) * j + (i,)): -coef})
            self._relations[j] = rel
        return rel

    def add(self, x: dict, y: dict) -> dict:
        out = dict(x)
        for exps, c in y.items():
            out[exps] = out[exps] + c if exps in out else c
        return {k: v for k, v in out.items() if not v.is_zero()}

    def neg(self, x: dict) -> dict:
        return {k: -v for k, v in x.items()}

    def sub(self, x: dict, y: dict) -> dict:
        return self.add(x, self.neg(y))

    def scale(self, x: dict, r: RatFunc) -> dict:
        return {} if r.is_zero() else {k: v * r for k, v in x.items()}

    def _normalize(self, raw: list[tuple[tuple[int, ...], RatFunc]]) -> dict:
        out: dict[tuple[int, ...], RatFunc] = {}
        stack = list(raw)
        while stack:
            exps, c = stack.pop()
            if c.is_zero():
                continue
            j = next((j for j in range(len(exps) - 1, -1, -1)
                      if exps[j] >= self.levels[j].degree), None)
            if j is None:
                out[exps] = out[exps] + c if exps in out else c
                continue
            rest = list(exps)
            rest[j] -= self.levels[j].degree
            rest = _strip(rest)
            for rexps, rc in self._relation(j).items():
                stack.append((_add_exps(rest, rexps), c * rc))
        return {k: v for k, v in out.items() if not v.is_zero()}

    def mul(self, x: dict, y: dict) -> dict:
        raw = [(_add_exps(ea, eb), ca * cb) for ea, ca in x.items() for eb, cb in y.items()]
        return self._normalize(raw)

    def power(self, x: dict, k: int) -> dict:
        result = const_element(RatFunc.const(self.field, 1))
        for _ in range(k):
            result = self.mul(result, x)
        return result

    def basis(self, k: int | None = None) -> list[tuple[int, ...]]:
        """Monomial basis of L_k over K (first k levels)."""
        k = len(self.levels) if k is None else k
        ranges = [range(level.degree) for level in self.levels[:k]]
        return [_strip(reversed(e)) for e in itertools.product(*reversed(ranges))]

    def norm(self, x: dict, k: int | None = None) -> RatFunc:
        """Norm from L_k (first k levels) down to K, as a multiplication determinant."""
        basis = self.basis(k)
        index = {b: i for i, b in enumerate(basis)}
        zero = RatFunc.const(self.field, 0)
        matrix = [[zero] * len(basis) for _ in basis]
        for col, b in enumerate(basis):
            prod = self.mul(x, {b: RatFunc.const(self.field, 1)})
            for exps, c in prod.items():
                if exps not in index:
                    raise PreconditionError("element involves generators beyond the requested level")
                matrix[index[exps]][col] = c
        return det_ratfunc(matrix, self.field)

    def derivative_at_generator(self, j: int) -> dict:
        """P_j'(a_j) for a Defined level j."""
        level = self.levels[j]
        gen = generator_element(self.field, j)
        n = level.degree
        acc = self.scale(self.power(gen, n - 1), RatFunc.const(self.field, n))
        for i in range(1, n):
            term = self.mul(level.coeffs[i], self.power(gen, i - 1))
            acc = self.add(acc, self.scale(term, RatFunc.const(self.field, i)))
        return acc


def det_poly(matrix: list[list[Poly]], field: FieldSpec) -> Poly:
    """Fraction-free (Bareiss) determinant over F[t]."""
    a = [row[:] for row in matrix]
    n = len(a)
    if n == 0:
        return Poly(field, (1,))
    sign = 1
    prev = Poly(field, (1,))
    for k in range(n - 1):
        if a[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if swap is None:
                return Poly(field)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]).exact_div(prev)
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return det if sign == 1 else -det


def det_ratfunc(matrix: list[list[RatFunc]], field: FieldSpec) -> RatFunc:
    scale = RatFunc.const(field, 1)
    rows = []
    for row in matrix:
        den = Poly(field, (1,))
        for x in row:
            den = den * x.den // gcd(den, x.den)
        rows.append([(x.num * den // x.den) for x in row])
        scale = scale * RatFunc(Poly(field, (1,)), den)
    return RatFunc(det_poly(rows, field)) * scale


# explicit finite fields and embeddings

def explicit_field(p: int, m: int) -> FieldSpec:
    if p ** m > EXPLICIT_FIELD_LIMIT:
        raise LimitExceeded(f"explicit residue field F_{p}^{m} exceeds {EXPLICIT_FIELD_LIMIT} elements")
    return make_field(p, m)


def _eval_codes(big: FieldSpec, coeffs: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = big.add(big.mul(acc, x), c)
    return acc


def poly_roots(big: FieldSpec, coeffs: Sequence[int]) -> list[int]:
    """Roots in big of a polynomial given by codes in big, low degree first."""
    return [x for x in range(big.size) if _eval_codes(big, coeffs, x) == 0]


def embedding_image(small: FieldSpec, big: FieldSpec) -> int:
    """Image of the generator of small under the canonical embedding into big."""
    if small.m == 1:
        return 0
    if big.m % small.m:
        raise PreconditionError(f"{small.spec_text()} does not embed into {big.spec_text()}")
    roots = poly_roots(big, list(small.modulus))
    return roots[0]


def embed_code(small: FieldSpec, big: FieldSpec, image: int, code: int) -> int:
    if small.m == 1:
        return code
    return _eval_codes(big, small.coords(code), image)


def qth_roots(big: FieldSpec, r: int, q: int) -> list[int]:
    """All roots of X^q - r in big via discrete logarithms (q divides |big| - 1)."""
    if r == 0:
        return [0]
    order = big.size - 1
    log = big.dlog(r)
    if log % q:
        return []
    zeta = big.generator_power(order // q)
    root = big.generator_power(log // q)
    roots = []
    for _ in range(q):
        roots.append(root)
        root = big.mul(root, zeta)
    return sorted(roots)


@dataclass(frozen=True)
class ResidueState:
    """Explicit residue field at a tree node with the images it needs.

    ``u_image`` is the image of the generator of the constant field and
    ``rho`` the image of t (a root of the place polynomial); ``gen_images``
    hold the residues of integral generators (None for poles or unknown).
    """

    big: FieldSpec
    u_image: int
    rho: int | None
    gen_images: tuple = ()

    def extend(self, k: int) -> tuple[ResidueState, int]:
        """Degree-k extension; returns the new state and the embedding image."""
        big2 = explicit_field(self.big.p, self.big.m * k)
        img = embedding_image(self.big, big2)
        mapped = lambda c: None if c is None else embed_code(self.big, big2, img, c)
        return ResidueState(big2, mapped(self.u_image), mapped(self.rho),
                            tuple(mapped(g) for g in self.gen_images)), img

    def map_constant(self, base: FieldSpec, code: int) -> int:
        return embed_code(base, self.big, self.u_image, code) if base.m > 1 else code

    def residue(self, x: RatFunc, place: Place) -> int:
        """Image in big of the residue of an integral base-field element."""
        r = residue_at(x, place).poly
        coeffs = [self.map_constant(x.field, c) for c in r.c]
        if place.is_infinite:
            return coeffs[0] if coeffs else 0
        return _eval_codes(self.big, coeffs, self.rho)


def residue_state(place: Place) -> ResidueState:
    """Explicit residue field of a base place, built as F_{p^(m deg)}."""
    base = place.field
    big = explicit_field(base.p, base.m * place.degree)
    u_image = embedding_image(base, big)
    if place.is_infinite:
        return ResidueState(big, u_image, None)
    coeffs = [embed_code(base, big, u_image, c) if base.m > 1 else c for c in place.poly.c]
    return ResidueState(big, u_image, poly_roots(big, coeffs)[0])


def explicit_step_kind(place: Place, c: RatFunc, q: int) -> str:
    """Splitting of the place in K(c^(1/q))/K by factoring X^q - c over the residue field.

    Ramified when q does not divide the order; otherwise the residue of the
    unit part is mapped into the explicitly built residue field and X^q - r is
    factored there.
    """
    o = ord_at(c, place)
    if o == INFINITY:
        raise PreconditionError("radicand is zero")
    if o % q:
        return "ramified"
    state = residue_state(place)
    r = state.residue(c * place.uniformizer() ** (-o), place)
    big = state.big
    f = Poly(big, (big.neg(r),) + (0,) * (q - 1) + (1,))
    degrees = [g.deg for g, k in factor_poly(f) for _ in range(k)]
    if all(d == 1 for d in degrees):
        return "split"
    if degrees == [q]:
        return "inert"
    raise AssertionError(f"X^{q} - {big.format_code(r)} factors with degrees {degrees}")


# certificates

@dataclass(frozen=True)
class InertCertificate:
    place: str
    level: int | None
    f: int
    reduction: str
    residue_field: str
    kind: str = "inert-reduction"

    def __bool__(self) -> bool:
        return True

    def to_json(self) -> dict:
        return {"kind": self.kind, "place": self.place, "level": self.level, "f": self.f,
                "reduction": self.reduction, "residue_field": self.residue_field}


@dataclass(frozen=True)
class TotallyRamifiedCertificate:
    place: str
    level: int | None
    e: int
    constant_order: int
    min_other_order: str
    assumptions: tuple[str, ...] = ()
    irreducible: bool = True
    kind: str = "total-ramification"

    def __bool__(self) -> bool:
        return True

    def to_json(self) -> dict:
        return {"kind": self.kind, "place": self.place, "level": self.level, "e": self.e,
                "constant_order": self.constant_order, "min_other_order": self.min_other_order,
                "irreducible": self.irreducible, "assumptions": list(self.assumptions)}


@dataclass(frozen=True)
class StepFailure:
    reason: str

    def __bool__(self) -> bool:
        return False

    def to_json(self) -> dict:
        return {"kind": "failure", "reason": self.reason}


@dataclass(frozen=True)
class PlaceContext:
    """A place of a tower prefix, as seen by the certificate checks.

    ``gen_vals`` gives, per generator, its order at the place in units of the
    base valuation, as ``(value, exact)``; ``exact=False`` means a lower bound.
    ``None`` marks an unknown order.
    """

    place: Place
    e: int = 1
    f: int = 1
    state: ResidueState | None = None
    gen_vals: tuple = ()
    level: int | None = None
    assumptions: tuple[str, ...] = ()

    @classmethod
    def at(cls, place: Place) -> PlaceContext:
        return cls(place, state=residue_state(place))


def _as_context(where: Place | PlaceContext) -> PlaceContext:
    return where if isinstance(where, PlaceContext) else PlaceContext.at(where)


def verify_inert_step(where: Place | PlaceContext, level: LevelSpec) -> InertCertificate | StepFailure:
    """Reduce a Defined level's polynomial into the residue field and test irreducibility.

    Raises PreconditionError when a coefficient is not integral at the place.
    """
    ctx = _as_context(where)
    if level.kind != DEFINED:
        raise PreconditionError("inert certificates apply to defined levels")
    state = ctx.state if ctx.state is not None else residue_state(ctx.place)
    big = state.big
    reduced = []
    for i, c in enumerate(level.coeffs):
        acc = 0
        for exps, coef in c.items():
            o = ord_at(coef, ctx.place)
            if o < 0:
                raise PreconditionError(f"coefficient of X^{i} is not integral at {ctx.place}")
            term = state.residue(coef, ctx.place)
            for j, k in enumerate(exps):
                if not k:
                    continue
                img = state.gen_images[j] if j < len(state.gen_images) else None
                if img is None:
                    raise PreconditionError(f"generator a{j} is not integral at {ctx.place}")
                term = big.mul(term, big.power(img, k))
            acc = big.add(acc, term)
        reduced.append(acc)
    red = Poly(big, tuple(reduced) + (1,))
    text = red.format("X")
    if not is_irreducible(red):
        return StepFailure(f"reduction {text} is reducible over {big.spec_text()}")
    return InertCertificate(str(ctx.place), ctx.level, level.degree, text, big.spec_text())


def _coefficient_order(c: dict, ctx: PlaceContext) -> tuple[Fraction | None, bool]:
    """Order of a tower element at the place in base units: (value, exact).

    The value is exact when one monomial strictly attains the minimum and
    its order is exact; otherwise it is a lower bound.  ``None`` means the
    order is unknown (a generator of unknown order occurs).
    """
    if not c:
        return Fraction(10 ** 9), False
    orders = []
    for exps, coef in c.items():
        o = ord_at(coef, ctx.place)
        value, exact = Fraction(o), True
        for j, k in enumerate(exps):
            if not k:
                continue
            gv = ctx.gen_vals[j] if j < len(ctx.gen_vals) else None
            if gv is None:
                return None, False
            value += k * gv[0]
            exact = exact and gv[1]
        orders.append((value, exact))
    orders.sort()
    low, exact = orders[0]
    unique = len(orders) == 1 or orders[1][0] > low
    return low, exact and unique


def verify_total_ramification_step(where: Place | PlaceContext,
                       level: LevelSpec) -> TotallyRamifiedCertificate | StepFailure:
    """Order test for total ramification: A_0 of order exactly -1, all A_i integral."""
    ctx = _as_context(where)
    if level.kind != DEFINED:
        raise PreconditionError("total ramification certificates apply to defined levels")
    v0, exact = _coefficient_order(level.coeffs[0], ctx)
    if v0 is None:
        return StepFailure("constant coefficient has unknown order")
    if not exact:
        return StepFailure("order of the constant coefficient is only bounded below")
    if v0 * ctx.e != -1:
        return StepFailure(f"constant coefficient has order {v0 * ctx.e}, not -1")
    others = []
    for i in range(1, level.degree):
        v, _ = _coefficient_order(level.coeffs[i], ctx)
        if v is None:
            return StepFailure(f"coefficient of X^{i} has unknown order")
        if v * ctx.e < 0:
            return StepFailure(f"coefficient of X^{i} has order {v * ctx.e} < 0")
        others.append(v * ctx.e)
    low = min(others, default=Fraction(0))
    low_text = "inf" if low >= 10 ** 8 else str(low)
    return TotallyRamifiedCertificate(str(ctx.place), ctx.level, level.degree, -1, low_text,
                                      ctx.assumptions)


# factor trees

@dataclass
class TreeNode:
    level: int
    kind: str
    branch: int | None
    rel_e: int
    rel_f: int
    e: int
    f: int
    path: tuple[str, ...]
    certificate: object = None
    children: list = dc_field(default_factory=list)
    context: PlaceContext | None = dc_field(default=None, repr=False, compare=False)
    ram_radicand: RatFunc | None = dc_field(default=None, repr=False, compare=False)

    @property
    def path_string(self) -> str:
        return ".".join(self.path)

    def to_json(self) -> dict:
        out = {"level": self.level, "kind": self.kind, "branch": self.branch,
               "rel_e": self.rel_e, "rel_f": self.rel_f, "e": self.e, "f": self.f,
               "path": self.path_string,
               "certificate": self.certificate.to_json() if self.certificate else None,
               "children": [c.to_json() for c in self.children]}
        if self.context is not None and self.context.state is not None:
            out["residue_field"] = self.context.state.big.spec_text()
        return out


@dataclass
class FactorTree:
    base: Place
    levels: tuple[LevelSpec, ...]
    root: TreeNode
    q: int | None

    @property
    def depth(self) -> int:
        return len(self.levels)

    def paths(self) -> list[list[TreeNode]]:
        """Root-to-leaf node lists (root excluded), depth-first in branch order."""
        out = []

        def walk(node: TreeNode, acc: list[TreeNode]) -> None:
            if not node.children:
                out.append(acc)
                return
            for child in node.children:
                walk(child, acc + [child])

        walk(self.root, [])
        return out

    def leaves(self) -> list[TreeNode]:
        return [p[-1] if p else self.root for p in self.paths()]

    def nodes_at(self, level: int) -> list[TreeNode]:
        """Nodes created by level ``level`` (0-based, as in ``TreeNode.level``)."""
        layer = [self.root]
        for _ in range(level + 1):
            layer = [c for n in layer for c in n.children]
        return layer

    def to_json(self) -> dict:
        return {"place": str(self.base), "q": self.q,
                "levels": [lv.to_json() for lv in self.levels], "root": self.root.to_json()}


def _with_gen(ctx: PlaceContext, val, image, state: ResidueState | None = None,
              e: int | None = None, f: int | None = None) -> PlaceContext:
    state = state if state is not None else ctx.state
    state = ResidueState(state.big, state.u_image, state.rho, state.gen_images + (image,))
    return PlaceContext(ctx.place, ctx.e if e is None else e, ctx.f if f is None else f,
                        state, ctx.gen_vals + (val,), ctx.level, ctx.assumptions)


def _kummer_children(node: TreeNode, j: int, c: RatFunc, q: int) -> list[TreeNode]:
    ctx = node.context
    place = ctx.place
    o = ord_at(c, place)
    val = (Fraction(o, q), True)
    image_for_nonunit = 0 if o > 0 else None
    if (ctx.e * o) % q:
        child_ctx = _with_gen(ctx, val, image_for_nonunit, e=ctx.e * q)
        return [TreeNode(j, "ramified", None, q, 1, ctx.e * q, ctx.f, node.path + ("R",),
                         None, [], child_ctx, c)]
    x = c
    if o % q:
        rho = node.ram_radicand
        if rho is None:
            raise CannotClassify(f"no ramified radicand to adjust {c} at {place}")
        s = ord_at(rho, place)
        x = c * rho ** (-(o * pow(s, -1, q) % q))
    ox = ord_at(x, place)
    r = ctx.state.residue(x * place.uniformizer() ** (-ox), place)
    roots = qth_roots(ctx.state.big, r, q)
    if roots:
        children = []
        for b, root in enumerate(roots):
            child_ctx = _with_gen(ctx, val, root if o == 0 else image_for_nonunit)
            children.append(TreeNode(j, "split", b, 1, 1, ctx.e, ctx.f, node.path + (f"S{b}",),
                                     None, [], child_ctx, node.ram_radicand))
        return children
    state, _ = ctx.state.extend(q)
    mapped_r = embed_code(ctx.state.big, state.big, embedding_image(ctx.state.big, state.big), r)
    root = qth_roots(state.big, mapped_r, q)[0]
    child_ctx = _with_gen(ctx, val, root if o == 0 else image_for_nonunit, state=state,
                          f=ctx.f * q)
    return [TreeNode(j, "inert", None, 1, q, ctx.e, ctx.f * q, node.path + ("I",),
                     None, [], child_ctx, node.ram_radicand)]


def _defined_children(node: TreeNode, j: int, level: LevelSpec) -> list[TreeNode]:
    ctx = PlaceContext(node.context.place, node.context.e, node.context.f, node.context.state,
                       node.context.gen_vals, j, node.context.assumptions)
    n = level.degree
    try:
        cert = verify_inert_step(ctx, level)
    except PreconditionError:
        cert = None
    if cert:
        state, img = ctx.state.extend(n)
        coeffs = _reduced_codes(ctx, level)
        mapped = [embed_code(ctx.state.big, state.big, img, c) for c in coeffs] + [1]
        root = poly_roots(state.big, mapped)[0]
        child_ctx = _with_gen(ctx, (Fraction(0), True), root, state=state, f=ctx.f * n)
        return [TreeNode(j, "inert", None, 1, n, ctx.e, ctx.f * n, node.path + ("I",),
                         cert, [], child_ctx, node.ram_radicand)]
    cert = verify_total_ramification_step(ctx, level)
    if cert:
        v0, _ = _coefficient_order(level.coeffs[0], ctx)
        val = v0 / n
        image = None if val < 0 else 0
        child_ctx = _with_gen(ctx, (val, True), image, e=ctx.e * n)
        return [TreeNode(j, "ramified", None, n, 1, ctx.e * n, ctx.f, node.path + ("R",),
                         cert, [], child_ctx, node.ram_radicand)]
    raise CannotClassify(f"level {j} ({level.label}) has no applicable certificate at "
                         f"{ctx.place}[{node.path_string}]: {cert.reason}")


def _reduced_codes(ctx: PlaceContext, level: LevelSpec) -> list[int]:
    state = ctx.state
    big = state.big
    out = []
    for c in level.coeffs:
        acc = 0
        for exps, coef in c.items():
            term = state.residue(coef, ctx.place)
            for j, k in enumerate(exps):
                if k:
                    term = big.mul(term, big.power(state.gen_images[j], k))
            acc = big.add(acc, term)
        out.append(acc)
    return out


def _tower_q(levels: Sequence[LevelSpec]) -> int | None:
    qs = {lv.degree for lv in levels if lv.kind == KUMMER}
    if len(qs) > 1:
        raise PreconditionError("all Kummer levels of a tree must share q")
    return qs.pop() if qs else None


def factor_tree(base: Place, levels: Sequence[LevelSpec], depth: int | None = None) -> FactorTree:
    """Factor tree of a base place through the given levels.

    Kummer levels must precede Defined levels.  A Kummer level whose radicand
    is already a q-th power in the previous Kummer levels is trivial and
    passes every node through unchanged (tag ``T``).
    """
    levels = tuple(levels)
    depth = len(levels) if depth is None else depth
    if depth > MAX_TREE_DEPTH:
        raise LimitExceeded(f"tree depth {depth} exceeds {MAX_TREE_DEPTH}")
    if depth > len(levels):
        raise PreconditionError(f"depth {depth} exceeds the {len(levels)} given levels")
    levels = levels[:depth]
    seen_defined = False
    for lv in levels:
        if lv.kind == DEFINED:
            seen_defined = True
        elif seen_defined:
            raise PreconditionError("Kummer levels must precede Defined levels")
        if lv.kind == KUMMER and lv.radicand.field is not base.field:
            raise PreconditionError("radicand lives over a different field")
    q = _tower_q(levels)
    if q is not None:
        _check_q(base.field, q)
    root = TreeNode(-1, "root", None, 1, 1, 1, 1, (), None, [], PlaceContext.at(base))
    layer = [root]
    kummer_so_far: list[RatFunc] = []
    for j, level in enumerate(levels):
        trivial = (level.kind == KUMMER and
                   is_qth_power_in_extension(level.radicand, kummer_so_far, q))
        nxt = []
        for node in layer:
            if trivial:
                child_ctx = _with_gen(node.context, (Fraction(ord_at(level.radicand, base), q), True),
                                      None)
                children = [TreeNode(j, "trivial", None, 1, 1, node.e, node.f, node.path + ("T",),
                                     None, [], child_ctx, node.ram_radicand)]
            elif level.kind == KUMMER:
                children = _kummer_children(node, j, level.radicand, q)
            else:
                children = _defined_children(node, j, level)
            node.children = children
            nxt.extend(children)
        if level.kind == KUMMER and not trivial:
            kummer_so_far.append(level.radicand)
        layer = nxt
    return FactorTree(base, levels, root, q)


def kummer_levels(radicands: Sequence[RatFunc], q: int) -> list[LevelSpec]:
    return [LevelSpec.kummer(c, q) for c in radicands]


def uniformizer_chain(field: FieldSpec, q: int, depth: int) -> list[LevelSpec]:
    """Levels adjoining t^(1/q), t^(1/q^2), ..., t^(1/q^depth).

    The first level is Kummer(t).  Each later level adjoins a q-th root of an
    element of normalized order -1 at the place over (t): first
    a_0^(-1) = a_0^(q-1)/t, then the previous generator itself.
    """
    if depth < 1:
        return []
    one = RatFunc.const(field, 1)
    t = RatFunc.t(field)
    levels = [LevelSpec.kummer(t, q)]
    for i in range(1, depth):
        if i == 1:
            target = {(q - 1,): one / t}
        else:
            target = generator_element(field, i - 1)
        coeffs = [{k: -v for k, v in target.items()}] + [{}] * (q - 1)
        levels.append(LevelSpec.defined(coeffs, label=f"X^{q} - ({format_element(target)})"))
    return levels


# q-boundedness profiles

def ord_q(n: int, q: int) -> int:
    k = 0
    while n % q == 0:
        n //= q
        k += 1
    return k


@dataclass(frozen=True)
class PathProfile:
    path: str
    e: tuple[int, ...]
    f: tuple[int, ...]
    ord_e: tuple[int, ...]
    ord_f: tuple[int, ...]

    def to_json(self) -> dict:
        return {"path": self.path, "e": list(self.e), "f": list(self.f),
                "ord_e": list(self.ord_e), "ord_f": list(self.ord_f)}


@dataclass(frozen=True)
class QBoundReport:
    q: int
    paths: tuple[PathProfile, ...]
    max_ord_e: int
    max_ord_f: int
    verdict: str
    bound: int | None
    evidence_path: str | None = None
    growth: tuple[int, ...] | None = None

    def sibling_profiles_identical(self) -> bool:
        return len({(p.e, p.f) for p in self.paths}) <= 1

    def to_json(self) -> dict:
        out = {"q": self.q, "verdict": self.verdict, "max_ord_e": self.max_ord_e,
               "max_ord_f": self.max_ord_f, "paths": [p.to_json() for p in self.paths]}
        if self.verdict == BOUNDED_SO_FAR:
            out["bound"] = self.bound
        else:
            out["evidence_path"] = self.evidence_path
            out["growth"] = list(self.growth)
            out["note"] = "evidence from a finite truncation, not a proof"
        return out


def path_q_profile(tree: FactorTree, q: int | None = None) -> QBoundReport:
    """Cumulative ord_q(e), ord_q(f) along every leaf path.

    UnboundedEvidence when some path has ord_q(e f) strictly increasing at
    every level of the truncation; otherwise BoundedSoFar with the largest
    ord_q(e f) seen.
    """
    q = tree.q if q is None else q
    if q is None:
        raise PreconditionError("q is required for a tree without Kummer levels")
    profiles = []
    evidence = None
    for nodes in tree.paths():
        es = (1,) + tuple(n.e for n in nodes)
        fs = (1,) + tuple(n.f for n in nodes)
        prof = PathProfile(".".join(nodes[-1].path) if nodes else "", es, fs,
                           tuple(ord_q(e, q) for e in es), tuple(ord_q(f, q) for f in fs))
        profiles.append(prof)
        combined = [a + b for a, b in zip(prof.ord_e, prof.ord_f)]
        if (evidence is None and len(combined) > 1
                and all(y > x for x, y in zip(combined, combined[1:]))):
            evidence = (prof.path, tuple(combined))
    max_e = max(max(p.ord_e) for p in profiles)
    max_f = max(max(p.ord_f) for p in profiles)
    if evidence is not None:
        return QBoundReport(q, tuple(profiles), max_e, max_f, UNBOUNDED_EVIDENCE, None,
                            evidence[0], evidence[1])
    bound = max(max(a + b for a, b in zip(p.ord_e, p.ord_f)) for p in profiles)
    return QBoundReport(q, tuple(profiles), max_e, max_f, BOUNDED_SO_FAR, bound)


# towers with a single prime above (t)

def _solve_mod_p(columns: list[list[int]], target: list[int], p: int) -> list[int]:
    """Solve sum x_i columns[i] = target over F_p (columns independent, square)."""
    n = len(columns)
    rows = [[columns[j][i] for j in range(n)] + [target[i]] for i in range(len(target))]
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] % p), None)
        if piv is None:
            raise PreconditionError("monomials do not span the residue field")
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][col], -1, p)
        rows[r] = [v * inv % p for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] % p:
                factor = rows[i][col]
                rows[i] = [(a - factor * b) % p for a, b in zip(rows[i], rows[r])]
        r += 1
    return [rows[i][n] for i in range(n)]


def _rank_mod_p(vectors: list[list[int]], p: int) -> int:
    rows = [list(v) for v in vectors]
    rank = 0
    width = len(rows[0]) if rows else 0
    for col in range(width):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [v * inv % p for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] % p:
                factor = rows[i][col]
                rows[i] = [(a - factor * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


@dataclass
class InertTowerReport:
    p: int
    levels: tuple[LevelSpec, ...]
    residue_degrees: tuple[int, ...]
    choices: tuple[dict, ...]
    inert_certificates: tuple[InertCertificate, ...]
    total_ramification_certificates: tuple[TotallyRamifiedCertificate, ...]
    factor_counts: tuple[int, ...]
    explicit_degree: int

    @property
    def residue_degree(self) -> int:
        return self.residue_degrees[-1]

    def script(self) -> dict:
        """Choices that reproduce this tower through ``build_inert_tower(..., choices=...)``."""
        return {"p": self.p, "step_degrees": [lv.degree for lv in self.levels],
                "choices": [{"p_coeffs": ch["p_coeffs"], "q": ch["q"]} for ch in self.choices]}

    def to_json(self) -> dict:
        return {"p": self.p, "levels": [lv.to_json() for lv in self.levels],
                "residue_degrees": list(self.residue_degrees),
                "residue_degree": self.residue_degree,
                "explicit_residue_degree": self.explicit_degree,
                "factor_counts_over_t": list(self.factor_counts),
                "choices": list(self.choices),
                "inert_certificates": [c.to_json() for c in self.inert_certificates],
                "total_ramification_certificates": [c.to_json() for c in self.total_ramification_certificates],
                "script": self.script()}


def _pick_p(kappa: FieldSpec, n: int, p: int) -> Poly:
    """Smallest monic irreducible of degree n over kappa with constant term in F_p*."""
    for g in monic_polys(kappa, n):
        c0 = g.c[0]
        if 0 < c0 < p and is_irreducible(g):
            return g
    raise PreconditionError(f"no irreducible of degree {n} over {kappa.spec_text()} "
                            "with constant term in the prime field")


def _pick_q(field: FieldSpec, bound: int, avoid: Sequence[Poly]) -> Poly:
    t = Poly.t(field)
    d = bound + 1
    while True:
        for g in monic_polys(field, d):
            if g != t and g not in avoid and is_irreducible(g):
                return g
        d += 1


def build_inert_tower(p: int, m: int, num_levels: int, step_degrees: Sequence[int], *,
                      choices: Sequence[dict] | None = None) -> InertTowerReport:
    """Tower L_0 = F_p(t) < L_1 < ... in which (t) has a single factor at every level.

    At level k the residue field of the place over (t) is F_{p^d_k}.  A monic
    p_k irreducible over it, with constant term in F_p*, is lifted to the
    level polynomial
        P_k = a_0 q_k(0)/q_k(t) + sum_{i>=1} a_i (t + X)^i,
    whose reduction at the place over (t) is p_k, so the place stays inert.
    The lift writes each coefficient of p_k in the monomial basis of the
    earlier generators' residues.  q_k is the first monic irreducible (not t)
    whose degree exceeds the total degree of the discriminant norms of the
    earlier levels, so q_k is unramified below and totally ramified at this
    level.  ``choices`` can fix p_k (coefficient codes over F_{p^d_k}, low
    first) and q_k (polynomial text) per level to re-run a saved script.
    """
    if m != 1:
        raise PreconditionError("inert towers are built over the rational base F_p(t) only")
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime")
    step_degrees = list(step_degrees)
    if num_levels != len(step_degrees):
        raise PreconditionError("one step degree per level is required")
    if num_levels > MAX_INERT_LEVELS:
        raise LimitExceeded(f"{num_levels} levels exceed {MAX_INERT_LEVELS}")
    if any(n < 2 for n in step_degrees):
        raise PreconditionError("step degrees must be at least 2")
    total = 1
    for n in step_degrees:
        total *= n
    if total > MAX_INERT_DEGREE:
        raise LimitExceeded(f"tower degree {total} exceeds {MAX_INERT_DEGREE}")
    explicit_field(p, total)
    F = make_field(p, 1)
    t_place = Place.finite(Poly.t(F))
    t = RatFunc.t(F)
    levels: list[LevelSpec] = []
    degrees = [1]
    made_choices = []
    inert_certs = []
    total_ramification_certs = []
    factor_counts = []
    q_polys: list[Poly] = []
    bound = 0
    ctx = PlaceContext.at(t_place)
    for k, n in enumerate(step_degrees):
        kappa = ctx.state.big
        if choices is not None:
            spec = choices[k]
            pk = Poly(kappa, tuple(spec["p_coeffs"]))
            if pk.deg != n or not pk.is_monic() or not 0 < pk.c[0] < p or not is_irreducible(pk):
                raise PreconditionError(f"p_{k} choice is not a valid irreducible of degree {n}")
            qk = RatFunc.of(F, spec["q"]).num
            if (qk.deg <= bound or not qk.is_monic() or qk == Poly.t(F) or qk in q_polys
                    or not is_irreducible(qk)):
                raise PreconditionError(f"q_{k} choice violates the degree bound {bound}")
        else:
            pk = _pick_p(kappa, n, p)
            qk = _pick_q(F, bound, q_polys)
        # lift coefficients of p_k to polynomials in the earlier generators
        basis = TowerAlgebra(F, levels).basis()
        images = ctx.state.gen_images
        columns = []
        for exps in basis:
            v = 1
            for j, e in enumerate(exps):
                v = kappa.mul(v, kappa.power(images[j], e))
            columns.append(kappa.coords(v))

        def lift(code: int) -> dict:
            sol = _solve_mod_p(columns, kappa.coords(code), p)
            return element({b: RatFunc.const(F, s) for b, s in zip(basis, sol) if s})

        lifts = [lift(c) for c in pk.c]
        coeffs = []
        for i in range(n):
            acc: dict = {}
            for j in range(max(i, 1), n + 1):
                factor = comb(j, i) % p
                if factor:
                    term = {ex: v * RatFunc.const(F, factor) * t ** (j - i)
                            for ex, v in lifts[j].items()}
                    for ex, v in term.items():
                        acc[ex] = acc[ex] + v if ex in acc else v
            coeffs.append(element(acc))
        qk_rat = RatFunc(qk)
        a0 = RatFunc.const(F, pk.c[0])
        const_term = a0 * RatFunc.const(F, qk.c[0]) / qk_rat if qk.c[0] else None
        if const_term is None:
            raise PreconditionError(f"q_{k} vanishes at 0")
        coeffs[0] = element({**coeffs[0], (): coeffs[0].get((), RatFunc.const(F, 0)) + const_term})
        level = LevelSpec.defined(coeffs, label=f"P_{k}")
        # inert certificate through the explicit residue field at (t)
        lctx = PlaceContext(ctx.place, ctx.e, ctx.f, ctx.state, ctx.gen_vals, k)
        cert = verify_inert_step(lctx, level)
        if not cert:
            raise AssertionError(f"level {k} reduction is not irreducible: {cert.reason}")
        reduced = Poly(kappa, tuple(_reduced_codes(lctx, level)) + (1,))
        if reduced != pk:
            raise AssertionError(f"level {k} reduces to {reduced.format('X')}, not p_{k}")
        factor_counts.append(sum(mult for _, mult in factor_poly(reduced)))
        inert_certs.append(cert)
        node = TreeNode(k - 1, "inert", None, 1, 1, 1, ctx.f, (), None, [], lctx)
        child = _defined_children(node, k, level)[0]
        # total ramification at the factor of q_k: unramified below, generators integral
        q_place = Place.finite(qk)
        for j, lv in enumerate(levels):
            for c in lv.coeffs:
                for coef in c.values():
                    if ord_at(coef, q_place) < 0:
                        raise AssertionError(f"level {j} coefficient has a pole at {qk.format()}")
        qctx = PlaceContext(q_place, 1, 1, None, tuple((Fraction(0), False) for _ in levels), k,
                            (f"deg {qk.format()} = {qk.deg} > bound {bound}: unramified below",
                             "earlier generators are integral at this place"))
        tcert = verify_total_ramification_step(qctx, level)
        if not tcert:
            raise AssertionError(f"level {k} total ramification check failed: {tcert.reason}")
        total_ramification_certs.append(tcert)
        made_choices.append({"level": k, "p_coeffs": list(pk.c), "p": pk.format("X"),
                             "residue_field": kappa.spec_text(), "q": qk.format(),
                             "bound": bound, "polynomial": level.polynomial_text()})
        levels.append(level)
        q_polys.append(qk)
        algebra = TowerAlgebra(F, levels)
        disc = algebra.norm(algebra.derivative_at_generator(k))
        bound += disc.num.deg + disc.den.deg
        degrees.append(degrees[-1] * n)
        ctx = child.context
    # explicit residue degree: F_p-rank of the generator monomials in the last residue field
    final = ctx.state.big
    monos = []
    for exps in TowerAlgebra(F, levels).basis():
        v = 1
        for j, e in enumerate(exps):
            v = final.mul(v, final.power(ctx.state.gen_images[j], e))
        monos.append(final.coords(v))
    explicit = _rank_mod_p(monos, p) if levels else 1
    return InertTowerReport(p, tuple(levels), tuple(degrees), tuple(made_choices),
                            tuple(inert_certs), tuple(total_ramification_certs), tuple(factor_counts),
                            explicit)
