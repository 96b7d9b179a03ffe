"""Finite-level evaluation of the norm-equation definitions of valuation rings,
S-integers and constants in K = F_{p^m}(t).

Every predicate is a norm equation N(y) = b x^q + b^q over an explicit Kummer
tower built from x, a, b:

* valuation ring at a place:   L1 = K((1 + (b x^q + b^q)^-1)^(1/q)),
                               L2 = L1((1 + (a + a^-1) b^-1)^(1/q));
* S-integers and constants:    L1 as above, L3 = L1((1 + x^-1)^(1/q)),
                               L4 = L3((1 + (a + a^-1) x^-1)^(1/q)).

Universal quantifiers over (a, b) are replaced by finite surrogates: a
constructed blocking pair when the predicate should fail and a deterministic
sample of admissible pairs when it should hold.  Each result records which
surrogate was used.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

from .errors import (DegenerateInput, DegenerateRadicand, DegenerateRHS, LimitExceeded,
                     PreconditionError)
from .finite_field import FieldSpec, find_q_nonresidue, is_qth_power_ext
from .kummer_tower import Tower, tower_make
from .norm_oracle import NormVerdict, norm_solvable
from .ratfunc import (INFINITY, Constraint, Place, RatFunc, divisor_of, ord_at, random_ratfunc,
                      residue_at, weak_approx)

GROUND_TRUTH = "ground-truth"
BLOCKING = "blocking"
SAMPLED = "sampled"


# modes of auxiliary pairs

@dataclass(frozen=True)
class ValRing:
    place: Place


@dataclass(frozen=True)
class SIntegers:
    """Pair for the S-integer formula aimed at a place outside S."""

    places: frozenset
    target: Place


@dataclass(frozen=True)
class UniformBounded:
    """Pair for the valuation ring in a q-bounded setting.

    ``strong`` (absolutely bounded ramification) gives ord b = -1; otherwise
    b is given order -(q+1), still negative and prime to q, which exercises
    the multiplicative closure test.
    """

    place: Place
    strong: bool = True


@dataclass(frozen=True)
class AuxPair:
    a: RatFunc
    b: RatFunc
    mode: object
    q: int

    def distinguished_place(self) -> Place:
        return self.mode.target if isinstance(self.mode, SIntegers) else self.mode.place

    def violations(self) -> list[str]:
        """Conditions of the mode that fail (empty when the pair is valid)."""
        a, b, q = self.a, self.b, self.q
        place = self.distinguished_place()
        out = []
        ob = ord_at(b, place)
        if isinstance(self.mode, ValRing) and ob != -1:
            out.append("ord b != -1 at the place")
        if isinstance(self.mode, UniformBounded) and ob != (-1 if self.mode.strong else -(q + 1)):
            out.append("ord b has the wrong value at the place")
        if not (ob < 0 and ob % q):
            out.append("ord b not negative and prime to q")
        if ord_at(a, place) != 0:
            out.append("a is not a unit at the place")
        elif is_qth_power_ext(residue_at(a, place), q, 1):
            out.append("a is a q-th power modulo the place")
        if isinstance(self.mode, SIntegers):
            for s in self.mode.places:
                if ord_at(b, s) != 0:
                    out.append(f"b is not a unit at {s}")
                if ord_at(a - 1, s) <= 0:
                    out.append(f"a is not 1 modulo {s}")
        else:
            for other in divisor_of(b).support():
                if other != place and ord_at(a - 1, other) <= 0:
                    out.append(f"a is not 1 modulo {other}")
        return out

    def to_json(self) -> dict:
        mode = type(self.mode).__name__
        out = {"a": str(self.a), "b": str(self.b), "mode": mode, "q": self.q}
        if isinstance(self.mode, SIntegers):
            out["S"] = sorted(str(p) for p in self.mode.places)
            out["place"] = str(self.mode.target)
        else:
            out["place"] = str(self.mode.place)
        if isinstance(self.mode, UniformBounded):
            out["strong"] = self.mode.strong
        return out


def choose_ab(mode, q: int) -> AuxPair:
    """Construct (a, b) by weak approximation; the result is verified before returning."""
    if isinstance(mode, SIntegers):
        place, others = mode.target, sorted(mode.places, key=Place.key)
        if place in mode.places:
            raise PreconditionError("the target place must lie outside S")
    else:
        place, others = mode.place, None
    field = place.field
    kappa = place.residue_field()
    nonresidue = find_q_nonresidue(kappa, q)
    b_order = -(q + 1) if isinstance(mode, UniformBounded) and not mode.strong else -1
    b_cons = [Constraint(place, b_order)]
    if others is not None:
        b_cons += [Constraint(s, 0) for s in others]
    b = weak_approx(b_cons)
    if others is None:
        others = [p for p in divisor_of(b).support() if p != place]
    a_cons = [Constraint(place, 0, nonresidue)] + [Constraint(s, 0, 1) for s in others]
    a = weak_approx(a_cons)
    pair = AuxPair(a, b, mode, q)
    bad = pair.violations()
    if bad:
        raise AssertionError(f"constructed pair violates: {bad}")
    return pair


# formula evaluation

@dataclass
class FormulaTrace:
    """Fields, right-hand side and verdict of one norm-equation evaluation."""

    value: bool
    rhs: RatFunc | None = None
    tower: Tower | None = None
    field_names: list = dc_field(default_factory=list)
    verdict: NormVerdict | None = None
    a: RatFunc | None = None

    def __bool__(self) -> bool:
        return self.value

    def to_json(self) -> dict:
        out = {"value": self.value}
        if self.tower is not None:
            out["fields"] = [{"name": name, "radicand": str(c), "nontrivial": flag}
                             for name, c, flag in zip(self.field_names, self.tower.radicands,
                                                      self.tower.nontrivial_flags)]
            out["rhs"] = str(self.rhs)
            out["norm_radicand"] = str(self.a)
            out["verdict"] = self.verdict.to_json()
        return out


def _rhs(x: RatFunc, b: RatFunc, q: int) -> RatFunc:
    rhs = b * x ** q + b ** q
    if rhs.is_zero():
        raise DegenerateRHS(f"b x^q + b^q vanishes for x = {x}, b = {b}")
    return rhs


def _radicand(value: RatFunc, name: str) -> RatFunc:
    if value.is_zero():
        raise DegenerateRadicand(f"radicand of {name} is zero")
    return value


def _inverse(x: RatFunc, what: str) -> RatFunc:
    if x.is_zero():
        raise DegenerateRadicand(f"{what} is zero, so its inverse is undefined")
    return x.inverse()


def _evaluate(field: FieldSpec, q: int, radicands: list[RatFunc], names: list[str],
              a: RatFunc, rhs: RatFunc) -> FormulaTrace:
    tower = tower_make(field, q, radicands)
    verdict = norm_solvable(tower, a, rhs)
    return FormulaTrace(verdict.solvable, rhs, tower, names, verdict, a)


def val_ring_predicate(x: RatFunc, pair: AuxPair) -> FormulaTrace:
    """Solvability of N(y) = b x^q + b^q over L2(a^(1/q))."""
    if isinstance(pair.mode, SIntegers):
        raise PreconditionError("valuation-ring predicate needs a ValRing or UniformBounded pair")
    if x.is_zero():
        return FormulaTrace(True)
    a, b, q = pair.a, pair.b, pair.q
    rhs = _rhs(x, b, q)
    l1 = _radicand(1 + rhs.inverse(), "L1")
    l2 = _radicand(1 + (a + a.inverse()) * b.inverse(), "L2")
    return _evaluate(x.field, q, [l1, l2], ["L1", "L2"], a, rhs)


def s_integer_formula(x: RatFunc, a: RatFunc, b: RatFunc, q: int) -> FormulaTrace:
    """Solvability of N(y) = b x^q + b^q over L4(a^(1/q))."""
    if a.is_zero() or b.is_zero():
        raise DegenerateInput("a and b must be nonzero")
    xinv = _inverse(x, "x")
    rhs = _rhs(x, b, q)
    l1 = _radicand(1 + rhs.inverse(), "L1")
    l3 = _radicand(1 + xinv, "L3")
    l4 = _radicand(1 + (a + a.inverse()) * xinv, "L4")
    return _evaluate(x.field, q, [l1, l3, l4], ["L1", "L3", "L4"], a, rhs)


def blocking_pair(x: RatFunc, place: Place, S: Iterable[Place], q: int) -> AuxPair:
    """a in V_S, b in U_S at a pole of x outside S for which the formula must fail."""
    S = frozenset(S)
    if place in S:
        raise PreconditionError(f"{place} lies in S")
    ox = ord_at(x, place)
    if not ox < 0:
        raise PreconditionError(f"{x} has no pole at {place}")
    pair = choose_ab(SIntegers(S, place), q)
    ob = ord_at(pair.b, place)
    if not ob + q * ox < q * ob:
        raise AssertionError("blocking pair does not separate the orders of b x^q and b^q")
    return pair


def _in_S_units(x: RatFunc, S: Iterable[Place]) -> bool:
    return all(ord_at(x, s) == 0 for s in S)


def _in_S_one_units(x: RatFunc, S: Iterable[Place]) -> bool:
    return all(ord_at(x - 1, s) > 0 for s in S)


def sample_pairs(field: FieldSpec, S: Sequence[Place], count: int, *, seed: int = 0,
                 max_degree: int = 2, max_attempts: int = 20000) -> list[tuple[RatFunc, RatFunc]]:
    """Deterministic sample of (a, b) with a in V_S and b in U_S (S may be empty)."""
    rng = random.Random(seed)
    pairs = []
    attempts = 0
    while len(pairs) < count:
        attempts += 1
        if attempts > max_attempts:
            raise LimitExceeded("could not sample enough admissible pairs")
        a = random_ratfunc(field, rng, max_degree, max_degree)
        b = random_ratfunc(field, rng, max_degree, max_degree)
        if a.is_one() and pairs:
            continue
        if _in_S_one_units(a, S) and _in_S_units(b, S):
            pairs.append((a, b))
    return pairs


@dataclass
class Decision:
    """A predicate value together with the surrogate that certifies it."""

    value: bool
    surrogate: str
    pair: AuxPair | None = None
    traces: list = dc_field(default_factory=list)
    skipped_degenerate: int = 0
    ground_truth: bool | None = None

    def __bool__(self) -> bool:
        return self.value

    @property
    def certified(self) -> bool:
        if self.surrogate == BLOCKING:
            return bool(self.traces) and not self.traces[0].value
        return all(t.value for t in self.traces)

    def to_json(self) -> dict:
        out = {"value": self.value, "surrogate": self.surrogate,
               "certified": self.certified, "skipped_degenerate": self.skipped_degenerate,
               "traces": [t.to_json() for t in self.traces]}
        if self.pair is not None:
            out["pair"] = self.pair.to_json()
        return out


def is_s_integer(x: RatFunc, S: Iterable[Place]) -> bool:
    S = set(S)
    return all(p in S for p in divisor_of(x).poles())


def s_integer_decide(x: RatFunc, S: Iterable[Place], q: int, *, sample_size: int = 5,
                     seed: int = 0) -> Decision:
    """Whether x is an S-integer (by its divisor), with a formula-level certificate."""
    S = sorted(set(S), key=Place.key)
    if not S:
        raise PreconditionError("S must be nonempty")
    if x.is_zero():
        raise DegenerateRadicand("x = 0 makes 1 + 1/x undefined")
    if (x + 1).is_zero():
        raise DegenerateRadicand("x = -1 makes 1 + 1/x vanish")
    truth = is_s_integer(x, S)
    if not truth:
        place = next(p for p in divisor_of(x).poles() if p not in S)
        pair = blocking_pair(x, place, S, q)
        trace = s_integer_formula(x, pair.a, pair.b, q)
        return Decision(False, BLOCKING, pair, [trace], ground_truth=truth)
    return _sampled_decision(x, S, q, sample_size, seed, truth)


def _sampled_decision(x, S, q, sample_size, seed, truth) -> Decision:
    decision = Decision(True, SAMPLED, ground_truth=truth)
    batch = 0
    while len(decision.traces) < sample_size:
        for a, b in sample_pairs(x.field, S, sample_size, seed=seed + batch):
            if len(decision.traces) >= sample_size:
                break
            try:
                decision.traces.append(s_integer_formula(x, a, b, q))
            except DegenerateInput:
                decision.skipped_degenerate += 1
        batch += 1
        if batch > 50:
            raise LimitExceeded("too many degenerate sampled pairs")
    return decision


def constants_predicate(x: RatFunc, q: int, *, sample_size: int = 5, seed: int = 0) -> Decision:
    """Whether x is a constant (empty divisor), cross-checked on the formula with S empty."""
    if x.is_zero():
        # 1/x is undefined: the formula cannot be evaluated, zero is a constant
        return Decision(True, GROUND_TRUTH, ground_truth=True, skipped_degenerate=1)
    div = divisor_of(x)
    truth = div.is_empty()
    if not truth:
        place = div.poles()[0]
        pair = blocking_pair(x, place, (), q)
        trace = s_integer_formula(x, pair.a, pair.b, q)
        return Decision(False, BLOCKING, pair, [trace], ground_truth=truth)
    if (x + 1).is_zero():
        # 1 + 1/x vanishes: the formula is undefined, the divisor decides
        return Decision(True, GROUND_TRUTH, ground_truth=truth, skipped_degenerate=1)
    return _sampled_decision(x, [], q, sample_size, seed, truth)


# multiplicative closure test for the valuation ring

@dataclass
class RMembership:
    value: bool
    in_N: bool
    failing_power: int | None = None
    failing_factor: RatFunc | None = None
    tested_powers: list = dc_field(default_factory=list)
    tested_factors: list = dc_field(default_factory=list)
    warnings: list = dc_field(default_factory=list)
    evidence: str = "bounded"

    def __bool__(self) -> bool:
        return self.value

    def to_json(self) -> dict:
        out = {"value": self.value, "in_N": self.in_N, "evidence": self.evidence,
               "tested_powers": self.tested_powers,
               "tested_factors": [str(u) for u in self.tested_factors],
               "warnings": self.warnings}
        if self.failing_power is not None:
            out["failing_power"] = self.failing_power
        if self.failing_factor is not None:
            out["failing_factor"] = str(self.failing_factor)
        return out


def in_N(u: RatFunc, pair: AuxPair) -> bool:
    return val_ring_predicate(u, pair).value


def default_factor_sample(field: FieldSpec, count: int = 4) -> list[RatFunc]:
    """Small nonzero elements used as the u in x*u (units at every finite place and constants)."""
    out = [RatFunc.const(field, c) for c in range(1, min(field.p, count + 1))]
    t = RatFunc.t(field)
    out += [t, t + 1, (t + 1) / t]
    return out[:max(count, 1)] if count else []


def multiplicative_R_membership(x: RatFunc, pair: AuxPair, power_bound: int,
                                factors: Sequence[RatFunc] | None = None) -> RMembership:
    """Bounded test of x in R = {x in N : x u in N for all u in N}.

    Tests x, then x^2, ..., x^power_bound (each x^(k+1) = x * x^k with x^k in
    N), then x*u for sampled u in N.  The first product leaving N refutes
    membership; passing all tests is bounded evidence only.
    """
    q = pair.q
    if power_bound < q:
        raise PreconditionError(f"power_bound must be at least q = {q}")
    result = RMembership(False, False)
    try:
        result.in_N = in_N(x, pair)
    except DegenerateRHS as exc:
        raise DegenerateRHS(f"x itself gives a degenerate right-hand side: {exc}") from exc
    if not result.in_N:
        result.failing_power = 1
        return result
    for k in range(2, power_bound + 1):
        try:
            ok = in_N(x ** k, pair)
        except DegenerateRHS:
            result.warnings.append(f"power {k} skipped: degenerate right-hand side")
            continue
        result.tested_powers.append(k)
        if not ok:
            result.failing_power = k
            return result
    for u in (default_factor_sample(x.field) if factors is None else factors):
        try:
            if not in_N(u, pair):
                continue
            ok = in_N(x * u, pair)
        except DegenerateInput:
            result.warnings.append(f"factor {u} skipped: degenerate input")
            continue
        result.tested_factors.append(u)
        if not ok:
            result.failing_factor = u
            return result
    result.value = True
    return result


# order bookkeeping used by the sweeps

def pole_dichotomy(x: RatFunc, b: RatFunc, place: Place, q: int) -> tuple[bool, bool, bool]:
    """(applicable, ord x < 0, ord(b x^q + b^q) not divisible by q)."""
    ox, ob = ord_at(x, place), ord_at(b, place)
    applicable = ob < 0 and ob % q != 0 and (ox >= 0 or q * ox + ob < q * ob)
    rhs = b * x ** q + b ** q
    orhs = ord_at(rhs, place)
    return applicable, ox < 0, orhs != INFINITY and orhs % q != 0


def threshold_holds(x: RatFunc, b: RatFunc, place: Place, q: int) -> bool:
    """ord x > (q-1)/q ord b, in integers."""
    return q * ord_at(x, place) > (q - 1) * ord_at(b, place)
