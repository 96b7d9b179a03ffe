from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from kummerlab.errors import DegenerateInput, DegenerateRadicand, NoNonresidue, PreconditionError
from kummerlab.finite_field import is_qth_power_ext, make_field
from kummerlab.definability import (BLOCKING, GROUND_TRUTH, SAMPLED, SIntegers, UniformBounded,
                                    ValRing, blocking_pair, choose_ab, constants_predicate,
                                    is_s_integer, multiplicative_R_membership, pole_dichotomy,
                                    s_integer_decide, s_integer_formula, val_ring_predicate)
from kummerlab.ratfunc import ord_at, random_ratfunc, residue_at


def test_choose_ab_at_infinity(F3, R, P):
    pair = choose_ab(ValRing(P("inf")), 2)
    assert (pair.b, pair.a) == (R("t"), R("(2*t+1)/(t+1)"))
    # the three conditions checked directly, independently of violations()
    assert ord_at(pair.b, P("inf")) == -1
    assert ord_at(pair.a, P("inf")) == 0
    assert not is_qth_power_ext(residue_at(pair.a, P("inf")), 2, 1)
    assert ord_at(pair.a - 1, P("t")) > 0
    assert pair.violations() == []


def test_choose_ab_at_t(F3, R, P):
    pair = choose_ab(ValRing(P("t")), 2)
    assert pair.b == R("1/t")
    assert not is_qth_power_ext(residue_at(pair.a, P("t")), 2, 1)
    assert ord_at(pair.a - 1, P("inf")) > 0


def test_choose_ab_without_nonresidue(F3, P):
    with pytest.raises(NoNonresidue):
        choose_ab(ValRing(P("inf")), 3)


def test_choose_ab_modes_verify(F3, F9, P):
    for mode in (SIntegers(frozenset([P("inf")]), P("t")),
                 SIntegers(frozenset([P("t"), P("inf")]), P("t+1")),
                 UniformBounded(P("t"), strong=True), UniformBounded(P("t"), strong=False)):
        assert choose_ab(mode, 2).violations() == []
    assert choose_ab(ValRing(P("t", F9)), 2).violations() == []
    with pytest.raises(PreconditionError):
        choose_ab(SIntegers(frozenset([P("t")]), P("t")), 2)


def test_val_ring_examples(F3, R, P):
    pair = choose_ab(ValRing(P("inf")), 2)
    assert val_ring_predicate(R("2"), pair).value
    trace = val_ring_predicate(R("t"), pair)
    assert not trace.value
    assert trace.verdict.obstruction.base_place == P("inf")
    assert val_ring_predicate(R("0"), pair).value


@settings(max_examples=40)
@given(st.integers(0, 10 ** 9), st.sampled_from(["inf", "t"]))
def test_val_ring_matches_order(seed, place_text):
    from kummerlab.ratfunc import parse_place
    field = make_field(3)
    place = parse_place(place_text, field)
    pair = choose_ab(ValRing(place), 2)
    x = random_ratfunc(field, random.Random(seed), 2, 2)
    try:
        value = val_ring_predicate(x, pair).value
    except DegenerateInput:
        return
    assert value == (x.is_zero() or ord_at(x, place) >= 0)
    applicable, negative, odd = pole_dichotomy(x, pair.b, place, 2) if not x.is_zero() else (0, 0, 0)
    if applicable:
        assert negative == odd


def test_s_integer_examples(F3, F7, R, P):
    S = [P("inf")]
    decision = s_integer_decide(R("t"), S, 2)
    assert decision.value and decision.surrogate == SAMPLED
    assert len(decision.traces) >= 5 and decision.certified
    decision = s_integer_decide(R("1/(t+1)"), S, 2)
    assert not decision.value and decision.surrogate == BLOCKING and decision.certified
    assert decision.pair.distinguished_place() == P("t+1")
    assert s_integer_decide(R("5", F7), [P("inf", F7)], 2).value
    with pytest.raises(DegenerateRadicand):
        s_integer_decide(R("-1"), S, 2)
    with pytest.raises(PreconditionError):
        s_integer_decide(R("t"), [], 2)


def test_s_integer_formula_direct(F3, R, P):
    pair = choose_ab(SIntegers(frozenset([P("inf")]), P("t")), 2)
    assert s_integer_formula(R("t^2"), pair.a, pair.b, 2).value


def test_blocking_pair_examples(F3, R, P):
    pair = blocking_pair(R("1/t"), P("t"), [P("inf")], 2)
    assert pair.b == R("(t+1)/t")
    assert ord_at(pair.b, P("inf")) == 0
    x = R("1/t")
    assert ord_at(pair.b * x ** 2, P("t")) < ord_at(pair.b ** 2, P("t"))
    assert not s_integer_formula(x, pair.a, pair.b, 2).value
    pair = blocking_pair(R("1/t^2"), P("t"), [P("inf")], 2)
    assert ord_at(pair.b, P("t")) == -1
    assert not s_integer_formula(R("1/t^2"), pair.a, pair.b, 2).value
    with pytest.raises(PreconditionError):
        blocking_pair(R("t"), P("inf"), [P("inf")], 2)


@settings(max_examples=25)
@given(st.integers(0, 10 ** 9))
def test_s_integer_decide_matches_divisor(seed):
    from kummerlab.ratfunc import parse_place
    field = make_field(3)
    rng = random.Random(seed)
    S = rng.choice([["inf"], ["t"], ["t", "inf"]])
    S = [parse_place(s, field) for s in S]
    x = random_ratfunc(field, rng, 2, 2)
    if x.is_zero() or (x + 1).is_zero():
        return
    decision = s_integer_decide(x, S, 2, sample_size=2, seed=seed)
    assert decision.value == is_s_integer(x, S)
    assert decision.certified


def test_r_membership(F3, R, P):
    pair = choose_ab(UniformBounded(P("t"), strong=False), 2)
    assert ord_at(pair.b, P("t")) == -3
    result = multiplicative_R_membership(R("1/t"), pair, 3)
    # ord x = -1 > -1.5 puts x in N; x^2 has ord -2 < -1.5 and leaves N
    assert result.in_N and not result.value and result.failing_power == 2
    result = multiplicative_R_membership(R("t+1"), pair, 4)
    assert result.value and result.tested_powers == [2, 3, 4]
    with pytest.raises(PreconditionError):
        multiplicative_R_membership(R("t"), pair, 1)


def test_constants_examples(F3, R):
    assert constants_predicate(R("2"), 2).value
    decision = constants_predicate(R("t"), 2)
    assert not decision.value and decision.surrogate == BLOCKING and decision.certified
    decision = constants_predicate(R("(t+1)/(t+1)"), 2)
    assert decision.value and decision.certified
    assert constants_predicate(R("0"), 2).surrogate == GROUND_TRUTH
