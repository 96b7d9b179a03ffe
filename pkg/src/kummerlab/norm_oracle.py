"""Norm equations N_{L(a^(1/q))/L}(y) = z for z, a in K over a Kummer tower L.

Three independent routes:

* ``norm_solvable`` decides solvability from local tests at the finitely many
  places above supp(div z) and supp(div a) (Hasse norm principle for the
  cyclic extension L(a^(1/q))/L);
* ``brute_force_norm_witness`` searches for an explicit y of bounded degree
  and checks N(y) = z with exact arithmetic;
* ``expand_norm_to_system`` writes the norm equation as polynomial equations
  in the coordinates of y.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field as dc_field
from typing import Iterator, Sequence

import numpy as np

from .errors import LimitExceeded, PreconditionError
from .finite_field import FFElem, FieldSpec, is_qth_power_ext
from .kummer_tower import (INERT, RAMIFIED, SPLIT, Tower, TowerPlace, classify_place_step,
                           is_qth_power_in_tower, places_above, tower_ord, unit_class_residue)
from .poly import Poly, monic_polys, polys_up_to
from .ratfunc import Place, RatFunc, divisor_of, factor, is_qth_power_in_K

SOLVABLE = "Solvable"
UNSOLVABLE = "Unsolvable"
TRIVIALLY_SOLVABLE = "TriviallySolvable"
LOCAL_GLOBAL = "LocalGlobal"
BRUTE_FORCE = "BruteForce"

MAX_DEGREE_BOUND = 6
# places in supp(div z) and supp(div a) are forced by the input, so the scan
# allows larger residue fields than explicit factor-tree requests
SCAN_PLACE_DEGREE = 32


def primitive_root_of_unity(field: FieldSpec, q: int) -> FFElem:
    return field.element(field.generator_power((field.size - 1) // q))


# exact arithmetic in K[x_1, ..., x_r] / (x_i^q - c_i)

class KummerAlgebra:
    """Monomial algebra over a coefficient ring with generators x_i, x_i^q = c_i.

    Elements are dicts from exponent tuples to nonzero coefficients.  The
    coefficient ring only needs ``+``, ``*``, ``is_zero`` and multiplication
    by finite field constants, so it serves polynomials, rational functions
    and the multivariate polynomials of the norm expansion alike.
    """

    def __init__(self, q: int, radicands: Sequence, zeta: FFElem):
        self.q = q
        self.radicands = list(radicands)
        self.rank = len(self.radicands)
        self.zeta = zeta

    def monomials(self) -> list[tuple[int, ...]]:
        return list(itertools.product(range(self.q), repeat=self.rank))

    def add(self, x: dict, y: dict) -> dict:
        out = dict(x)
        for mono, c in y.items():
            if mono in out:
                s = out[mono] + c
                if s.is_zero():
                    del out[mono]
                else:
                    out[mono] = s
            else:
                out[mono] = c
        return out

    def neg(self, x: dict) -> dict:
        return {mono: -c for mono, c in x.items()}

    def sub(self, x: dict, y: dict) -> dict:
        return self.add(x, self.neg(y))

    def scale(self, x: dict, s) -> dict:
        out = {}
        for mono, c in x.items():
            v = c * s
            if not v.is_zero():
                out[mono] = v
        return out

    def mul(self, x: dict, y: dict) -> dict:
        q = self.q
        out: dict = {}
        for m1, c1 in x.items():
            for m2, c2 in y.items():
                coeff = c1 * c2
                mono = []
                for i, (e1, e2) in enumerate(zip(m1, m2)):
                    e = e1 + e2
                    if e >= q:
                        e -= q
                        coeff = coeff * self.radicands[i]
                    mono.append(e)
                mono = tuple(mono)
                if mono in out:
                    out[mono] = out[mono] + coeff
                else:
                    out[mono] = coeff
        return {m: c for m, c in out.items() if not c.is_zero()}

    def conjugate(self, x: dict, gen: int, k: int) -> dict:
        """Apply the automorphism x_gen -> zeta^k x_gen."""
        q = self.q
        out = {}
        for mono, c in x.items():
            power = (mono[gen] * k) % q
            out[mono] = c * self.zeta ** power if power else c
        return out

    def norm_last(self, x: dict) -> dict:
        """Norm from the full algebra down to the subalgebra without the last generator."""
        result = x
        for k in range(1, self.q):
            result = self.mul(result, self.conjugate(x, self.rank - 1, k))
        return result


def _algebra(tower: Tower, a: RatFunc) -> KummerAlgebra:
    return KummerAlgebra(tower.q, [*tower.nontrivial_radicands(), a],
                         primitive_root_of_unity(tower.field, tower.q))


def _format_monomial(mono: tuple[int, ...], names: Sequence[str]) -> str:
    parts = []
    for e, name in zip(mono, names):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


def basis_names(tower: Tower, a: RatFunc) -> list[str]:
    q = tower.q
    return [f"root{q}({c})" for c in [*tower.nontrivial_radicands(), a]]


@dataclass
class Witness:
    """An element y of L(a^(1/q)) as coordinates over the monomial basis.

    ``coords`` maps exponent tuples (one entry per nontrivial radicand of the
    tower, then one for a) to coefficients in K.
    """

    tower: Tower
    a: RatFunc
    coords: dict

    def norm(self) -> dict:
        """Exact norm as an element of L (coordinates over the tower basis)."""
        alg = _algebra(self.tower, self.a)
        n = alg.norm_last(self.coords)
        if any(mono[-1] for mono in n):
            raise AssertionError("norm left the base tower")
        return {mono[:-1]: c for mono, c in n.items()}

    def norm_equals(self, z: RatFunc) -> bool:
        n = self.norm()
        identity = (0,) * (len(self.tower.nontrivial_radicands()))
        return set(n) == {identity} and n[identity] == z

    def to_json(self) -> dict:
        names = basis_names(self.tower, self.a)
        return {"basis": names,
                "coordinates": [{"monomial": _format_monomial(m, names), "exponents": list(m),
                                 "coefficient": str(c)} for m, c in sorted(self.coords.items())]}


@dataclass
class NormVerdict:
    status: str
    method: str = LOCAL_GLOBAL
    obstruction: TowerPlace | None = None
    witness: Witness | None = None
    used_ramified_branch: bool = False
    checked_places: list = dc_field(default_factory=list)

    @property
    def solvable(self) -> bool:
        return self.status in (SOLVABLE, TRIVIALLY_SOLVABLE)

    def to_json(self) -> dict:
        out = {"status": self.status, "method": self.method,
               "used_ramified_branch": self.used_ramified_branch,
               "checked_places": [str(tp) for tp in self.checked_places]}
        if self.obstruction is not None:
            out["obstruction"] = str(self.obstruction)
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


# local tests

def _check_nonzero(*xs: RatFunc) -> None:
    for x in xs:
        if x.is_zero():
            raise PreconditionError("norm equations need nonzero z and a")


def local_norm_test(z: RatFunc, a: RatFunc, tp: TowerPlace, q: int) -> bool:
    """Whether z is a norm from the completion of L(a^(1/q)) at tp.

    Split: everything is a norm.  Inert: exactly the elements of order
    divisible by q.  Ramified (tame): the norm group is generated by
    N(a^(1/q)) = (-1)^(q+1) a, q-th powers of units and principal units,
    so z is a norm iff z * N(a^(1/q))^(-j) has q-th-power unit residue,
    where j matches the orders modulo q.
    """
    _check_nonzero(z, a)
    kind = classify_place_step(tp, a, q)
    if kind == SPLIT:
        return True
    if kind == INERT:
        return tower_ord(z, tp) % q == 0
    return _ramified_norm_test(z, a, tp, q)


def _ramified_norm_test(z: RatFunc, a: RatFunc, tp: TowerPlace, q: int) -> bool:
    s = tower_ord(a, tp)
    k = tower_ord(z, tp)
    j = k * pow(s, -1, q) % q
    root_norm = a if q % 2 else -a  # (-1)^(q+1) a
    y = z * root_norm ** (-j)
    return is_qth_power_ext(unit_class_residue(y, tp, q), q, tp.f)


def candidate_places(tower: Tower, a: RatFunc, z: RatFunc) -> list[TowerPlace]:
    """Places of L above supp(div z) and supp(div a), in canonical order."""
    bases = set(divisor_of(z).support()) | set(divisor_of(a).support())
    out = []
    for base in sorted(bases, key=Place.key):
        out.extend(places_above(tower, base, max_place_degree=SCAN_PLACE_DEGREE))
    return out


def norm_solvable(tower: Tower, a: RatFunc, z: RatFunc, *,
                  witness_bound: int | None = None) -> NormVerdict:
    """Decide solvability of N(y) = z; optionally attach a brute-force witness."""
    _check_nonzero(z, a)
    if is_qth_power_in_tower(a, tower):
        return NormVerdict(TRIVIALLY_SOLVABLE)
    q = tower.q
    used_ramified = False
    checked = []
    for tp in candidate_places(tower, a, z):
        kind = classify_place_step(tp, a, q)
        used_ramified = used_ramified or kind == RAMIFIED
        checked.append(tp)
        if not local_norm_test(z, a, tp, q):
            return NormVerdict(UNSOLVABLE, obstruction=tp, used_ramified_branch=used_ramified,
                               checked_places=checked)
    verdict = NormVerdict(SOLVABLE, used_ramified_branch=used_ramified, checked_places=checked)
    if witness_bound is not None:
        verdict.witness = brute_force_norm_witness(tower, a, z, witness_bound)
    return verdict


# brute-force witness search

def qth_power_split(x: RatFunc, q: int) -> tuple[Poly, RatFunc]:
    """Write x = core * s^q with core a polynomial whose factor multiplicities are < q."""
    field = x.field
    core = Poly(field, (x.num.lc,))
    s = RatFunc.const(field, 1)
    for poly, sign in ((x.num, 1), (x.den, -1)):
        if poly.deg <= 0:
            continue
        for g, k in factor(poly):
            k *= sign
            r = k % q
            core = core * g ** r
            s = s * RatFunc(g) ** ((k - r) // q)
    return core, s


class _SearchSetup:
    """Radicands and target reduced to polynomial cores, with conversion factors."""

    def __init__(self, tower: Tower, a: RatFunc, z: RatFunc):
        q = tower.q
        self.tower, self.a, self.z, self.q = tower, a, z, q
        self.field = tower.field
        self.radicands = [*tower.nontrivial_radicands(), a]
        splits = [qth_power_split(c, q) for c in self.radicands]
        self.cores = [core for core, _ in splits]
        self.scales = [s for _, s in splits]
        self.z_core, self.z_scale = qth_power_split(z, q)
        self.algebra = KummerAlgebra(q, self.cores, primitive_root_of_unity(self.field, q))
        self.monomials = self.algebra.monomials()

    def to_witness(self, numerators: dict, w: Poly) -> Witness:
        """y = z_scale * (sum n_mono mono_core) / w, rewritten over the original basis."""
        coords = {}
        for mono, n in numerators.items():
            if n.is_zero():
                continue
            # root(core_i) = root(c_i) / s_i
            factor_ = RatFunc.const(self.field, 1)
            for e, s in zip(mono, self.scales):
                if e:
                    factor_ = factor_ * s ** e
            coords[mono] = self.z_scale * RatFunc(n) / (RatFunc(w) * factor_)
        return Witness(self.tower, self.a, coords)


def brute_force_norm_witness(tower: Tower, a: RatFunc, z: RatFunc, degree_bound: int, *,
                             max_candidates: int = 2_000_000,
                             use_numpy: bool = True) -> Witness | None:
    """Search y = z_s * Y / w with polynomial coordinates of degree <= bound, w monic of degree <= bound.

    Radicands and z are first reduced to polynomial cores (factor
    multiplicities below q); the search runs over the core basis and the
    result is converted back.  Every returned witness has been checked
    with an exact norm computation over the original basis.
    """
    _check_nonzero(z, a)
    if not 0 <= degree_bound <= MAX_DEGREE_BOUND:
        raise LimitExceeded(f"degree bound must be in [0, {MAX_DEGREE_BOUND}]")
    if is_qth_power_in_tower(a, tower):
        raise PreconditionError("a is a q-th power in the tower; the extension is trivial")
    setup = _SearchSetup(tower, a, z)
    if tower.q == 2 and use_numpy and setup.field.m == 1 and not tower.nontrivial_radicands():
        found = _search_quadratic_numpy(setup, degree_bound, max_candidates)
    elif tower.q == 2:
        found = _search_quadratic(setup, degree_bound, max_candidates)
    else:
        found = _search_generic(setup, degree_bound, max_candidates)
    if found is None:
        return None
    witness = setup.to_witness(*found)
    if not witness.norm_equals(z):
        raise AssertionError("brute-force witness failed exact norm verification")
    return witness


def _monic_up_to(field: FieldSpec, bound: int) -> list[Poly]:
    return [w for d in range(bound + 1) for w in monic_polys(field, d)]


def _search_quadratic(setup: _SearchSetup, bound: int, max_candidates: int):
    """Meet in the middle for q = 2: Y0^2 = z_core w^2 + a_core Y1^2 in L."""
    alg = setup.algebra
    field = setup.field
    tower_monos = [m for m in alg.monomials() if m[-1] == 0]
    coeff_polys = list(polys_up_to(field, bound))
    tower_size = len(tower_monos)
    n_elems = len(coeff_polys) ** tower_size
    ws = _monic_up_to(field, bound)
    if n_elems * (len(ws) + 1) > max_candidates:
        raise LimitExceeded("brute-force search space exceeds the candidate cap")
    sub = KummerAlgebra(2, setup.cores[:-1], alg.zeta)
    a_core = setup.cores[-1]

    def elements() -> Iterator[dict]:
        for combo in itertools.product(coeff_polys, repeat=tower_size):
            yield {m[:-1]: c for m, c in zip(tower_monos, combo) if not c.is_zero()}

    def key(x: dict) -> tuple:
        return tuple(sorted((m, c.c) for m, c in x.items()))

    squares: dict = {}
    for y0 in elements():
        squares.setdefault(key(sub.mul(y0, y0)), y0)
    identity = (0,) * (len(setup.cores) - 1)
    for w in ws:
        zw2 = {identity: setup.z_core * w * w}
        for y1 in elements():
            target = sub.add(zw2, sub.scale(sub.mul(y1, y1), a_core))
            y0 = squares.get(key(target))
            if y0 is not None:
                nums = {m + (0,): c for m, c in y0.items()}
                nums.update({m + (1,): c for m, c in y1.items()})
                return nums, w
    return None


def _poly_table(p: int, bound: int) -> np.ndarray:
    """All coefficient vectors of degree <= bound over F_p, in canonical order."""
    grid = np.array(list(itertools.product(range(p), repeat=bound + 1)), dtype=np.int64)
    return grid[:, ::-1]  # product varies the last slot fastest; make it the lowest degree


def _np_square(v: np.ndarray, p: int) -> np.ndarray:
    n, k = v.shape
    out = np.zeros((n, 2 * k - 1), dtype=np.int64)
    for i in range(k):
        out[:, i:i + k] += v[:, i:i + 1] * v
    return out % p


def _np_mul_poly(v: np.ndarray, poly: Sequence[int], p: int) -> np.ndarray:
    n, k = v.shape
    out = np.zeros((n, k + len(poly) - 1), dtype=np.int64)
    for i, c in enumerate(poly):
        if c:
            out[:, i:i + k] += c * v
    return out % p


def _np_keys(v: np.ndarray, p: int, width: int) -> np.ndarray:
    padded = np.zeros((v.shape[0], width), dtype=np.int64)
    padded[:, :v.shape[1]] = v
    weights = p ** np.arange(width, dtype=np.int64)
    return padded @ weights


@functools.lru_cache(maxsize=64)
def _np_square_side(p: int, bound: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    table = _poly_table(p, bound)
    sq = _np_square(table, p)
    return table, sq, np.argsort(_np_keys(sq, p, sq.shape[1]), kind="stable")


@functools.lru_cache(maxsize=512)
def _np_radicand_side(p: int, bound: int, a_core: tuple[int, ...]) -> np.ndarray:
    _, sq, _ = _np_square_side(p, bound)
    return _np_mul_poly(sq, a_core, p)


def _search_quadratic_numpy(setup: _SearchSetup, bound: int, max_candidates: int):
    """Vectorized meet in the middle for q = 2 over the prime field with an empty tower.

    Looks for Y0^2 = z_core w^2 + a_core Y1^2 over all (w, Y1) at once,
    encoding coefficient vectors as base-p integers.
    """
    field = setup.field
    p = field.p
    ws = _monic_up_to(field, bound)
    table, sq, order = _np_square_side(p, bound)
    if len(table) * (len(ws) + 1) > max_candidates:
        raise LimitExceeded("brute-force search space exceeds the candidate cap")
    rhs_y = _np_radicand_side(p, bound, setup.cores[-1].c)
    w_table = np.zeros((len(ws), bound + 1), dtype=np.int64)
    for i, w in enumerate(ws):
        w_table[i, :len(w.c)] = w.c
    zw2 = _np_mul_poly(_np_square(w_table, p), setup.z_core.c, p)
    width = max(sq.shape[1], rhs_y.shape[1], zw2.shape[1])
    if p ** width >= 2 ** 62:
        raise LimitExceeded("coefficient vectors too long for integer keys")
    weights = p ** np.arange(width, dtype=np.int64)
    sorted_keys = _np_keys(sq, p, width)[order]
    pad_y = np.zeros((len(table), width), dtype=np.int64)
    pad_y[:, :rhs_y.shape[1]] = rhs_y
    pad_w = np.zeros((len(ws), width), dtype=np.int64)
    pad_w[:, :zw2.shape[1]] = zw2
    # digitwise sum mod p on small integer types; keys indexed by (w, Y1)
    pad_w8, pad_y8 = pad_w.astype(np.int16), pad_y.astype(np.int16)
    keys = np.zeros((len(ws), len(table)), dtype=np.int64)
    for i in range(width):
        digit = pad_w8[:, i, None] + pad_y8[None, :, i]
        digit -= p * (digit >= p)
        keys += digit * weights[i]
    hit = np.isin(keys, sorted_keys)
    if not hit.any():
        return None
    wi, yi = np.unravel_index(int(np.argmax(hit)), hit.shape)
    xi = int(order[np.searchsorted(sorted_keys, keys[wi, yi])])
    y0 = Poly(field, [int(c) for c in table[xi]])
    y1 = Poly(field, [int(c) for c in table[yi]])
    return {(0,): y0, (1,): y1}, ws[int(wi)]


def _search_generic(setup: _SearchSetup, bound: int, max_candidates: int):
    """Enumerate Y over the core basis; accept when N(Y) = z_core * w^q with w monic."""
    alg = setup.algebra
    field = setup.field
    q = setup.q
    monos = setup.monomials
    coeff_polys = list(polys_up_to(field, bound))
    total = len(coeff_polys) ** len(monos)
    if total > max_candidates:
        raise LimitExceeded(f"brute-force search space {total} exceeds the candidate cap")
    identity = (0,) * (len(monos[0]) - 1)
    for combo in itertools.product(coeff_polys, repeat=len(monos)):
        y = {m: c for m, c in zip(monos, combo) if not c.is_zero()}
        if not y:
            continue
        n = alg.norm_last(y)
        if set(n) != {identity + (0,)}:
            continue
        value = n[identity + (0,)]
        quotient, rem = divmod(value, setup.z_core)
        if not rem.is_zero() or quotient.lc != 1:
            continue
        test = is_qth_power_in_K(RatFunc(quotient), q)
        if not test:
            continue
        w = test.root.num.monic()
        if w.deg > bound or w ** q != quotient:
            continue
        return y, w
    return None


# norm as a polynomial system

class MPoly:
    """Multivariate polynomial over K: dict from exponent tuples to RatFunc."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict | None = None):
        self.nvars = nvars
        self.terms = {m: c for m, c in (terms or {}).items() if not c.is_zero()}

    @classmethod
    def variable(cls, nvars: int, i: int, field: FieldSpec) -> MPoly:
        mono = tuple(1 if j == i else 0 for j in range(nvars))
        return cls(nvars, {mono: RatFunc.const(field, 1)})

    @classmethod
    def constant(cls, nvars: int, c: RatFunc) -> MPoly:
        return cls(nvars, {(0,) * nvars: c})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: MPoly) -> MPoly:
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return MPoly(self.nvars, out)

    def __neg__(self) -> MPoly:
        return MPoly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: MPoly) -> MPoly:
        return self + (-other)

    def __mul__(self, other) -> MPoly:
        if not isinstance(other, MPoly):
            return MPoly(self.nvars, {m: c * other for m, c in self.terms.items()})
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                v = c1 * c2
                out[m] = out[m] + v if m in out else v
        return MPoly(self.nvars, out)

    __rmul__ = __mul__

    def evaluate(self, values: Sequence[RatFunc]) -> RatFunc:
        field = values[0].field
        total = RatFunc.const(field, 0)
        for m, c in self.terms.items():
            term = c
            for v, e in zip(values, m):
                if e:
                    term = term * v ** e
            total = total + term
        return total

    def format(self, names: Sequence[str]) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, reverse=True):
            c = self.terms[m]
            mono = _format_monomial(m, names)
            text = str(c)
            if mono == "1":
                parts.append(text)
            elif c.is_one():
                parts.append(mono)
            else:
                parts.append(f"({text})*{mono}")
        return " + ".join(parts)


@dataclass
class PolySystem:
    """Equations over K in the coordinates d_i of y; a common zero is a norm witness."""

    variables: list[str]
    monomials: list[tuple[int, ...]]
    equations: list[MPoly]
    basis: list[str]

    def evaluate(self, values: Sequence[RatFunc]) -> list[RatFunc]:
        return [eq.evaluate(values) for eq in self.equations]

    def is_satisfied_by(self, witness: Witness) -> bool:
        field = witness.a.field
        values = [witness.coords.get(m, RatFunc.const(field, 0)) for m in self.monomials]
        return all(r.is_zero() for r in self.evaluate(values))

    def to_json(self) -> dict:
        return {"variables": self.variables, "basis": self.basis,
                "variable_monomials": [_format_monomial(m, self.basis) for m in self.monomials],
                "equations": [eq.format(self.variables) + " = 0" for eq in self.equations]}


def expand_norm_to_system(tower: Tower, a: RatFunc, rhs: RatFunc) -> PolySystem:
    """Expand prod_k sigma^k(sum_i d_i mono_i) = rhs and compare coordinates over the tower basis."""
    _check_nonzero(rhs, a)
    if is_qth_power_in_tower(a, tower):
        raise PreconditionError("a is a q-th power in the tower; the extension is trivial")
    field = tower.field
    alg = _algebra(tower, a)
    monos = alg.monomials()
    nvars = len(monos)
    y = {m: MPoly.variable(nvars, i, field) for i, m in enumerate(monos)}
    norm = alg.norm_last(y)
    if any(m[-1] for m in norm):
        raise AssertionError("norm expansion left the base tower")
    tower_monos = [m for m in monos if m[-1] == 0]
    identity = tower_monos[0]
    equations = []
    for m in tower_monos:
        eq = norm.get(m, MPoly(nvars))
        if m == identity:
            eq = eq - MPoly.constant(nvars, rhs)
        equations.append(eq)
    return PolySystem([f"d{i}" for i in range(nvars)], monos, equations, basis_names(tower, a))
