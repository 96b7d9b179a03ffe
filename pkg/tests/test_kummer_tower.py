from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, strategies as st

from kummerlab.errors import LimitExceeded, MissingRootOfUnity, PreconditionError
from kummerlab.finite_field import make_field
from kummerlab.kummer_tower import (INERT, RAMIFIED, SPLIT, classify_place_step, empty_tower,
                                    fundamental_identity_holds, is_qth_power_in_tower,
                                    places_above, residue_qth_power_test, root_place, tower_make,
                                    tower_ord)
from kummerlab.ratfunc import is_qth_power_in_K, places_up_to, random_ratfunc
from kummerlab.tower_lab import explicit_step_kind, factor_tree, kummer_levels

CASES = [(make_field(3), 2), (make_field(2, 2), 3), (make_field(7), 3), (make_field(5), 2)]


def exhaustive_power_test(x, radicands, q):
    """x is a q-th power in the tower iff x * prod c_i^e_i is one in K for some exponents."""
    for exps in itertools.product(range(q), repeat=len(radicands)):
        y = x
        for c, e in zip(radicands, exps):
            y = y * c ** e
        if is_qth_power_in_K(y, q):
            return True
    return False


def test_nontrivial_flags(F3, R):
    assert tower_make(F3, 2, [R("t")]).nontrivial_flags == (True,)
    assert tower_make(F3, 2, [R("t"), R("t*(t+1)^2")]).nontrivial_flags == (True, False)
    assert tower_make(F3, 2, [R("4")]).nontrivial_flags == (False,)


def test_tower_preconditions(F3, R):
    with pytest.raises(MissingRootOfUnity):
        tower_make(F3, 3, [R("t")])
    with pytest.raises(PreconditionError):
        tower_make(F3, 4, [R("t")])
    with pytest.raises(PreconditionError):
        tower_make(F3, 2, [R("0")])
    with pytest.raises(LimitExceeded):
        tower_make(F3, 2, [R(f"t+{i}") for i in range(7)])


def test_qth_power_in_tower_examples(F3, R):
    tower = tower_make(F3, 2, [R("t")])
    assert is_qth_power_in_tower(R("t"), tower)
    assert not is_qth_power_in_tower(R("2"), tower)
    assert is_qth_power_in_tower(R("t^2"), empty_tower(F3, 2))


@pytest.mark.parametrize("field,q", CASES)
def test_qth_power_in_tower_against_exponent_search(field, q):
    rng = random.Random(7)
    for _ in range(40):
        radicands = [random_ratfunc(field, rng, 2, 1) for _ in range(2)]
        radicands = [c for c in radicands if not c.is_zero()]
        tower = tower_make(field, q, radicands)
        x = random_ratfunc(field, rng, 2, 2)
        if x.is_zero():
            continue
        for probe in (x, x * radicands[0] if radicands else x, x ** q):
            assert is_qth_power_in_tower(probe, tower) == exhaustive_power_test(probe, radicands, q)


def test_classification_examples(F3, R, P):
    t = R("t")
    assert classify_place_step(root_place(P("t")), t, 2) == RAMIFIED
    assert classify_place_step(root_place(P("t+1")), t, 2) == INERT
    assert classify_place_step(root_place(P("t+2")), t, 2) == SPLIT


def test_places_above_examples(F3, R, P):
    tower = tower_make(F3, 2, [R("t")])
    [leaf] = places_above(tower, P("t"))
    assert (leaf.e, leaf.f) == (2, 1)
    split = places_above(tower, P("t+2"))
    assert [(tp.e, tp.f) for tp in split] == [(1, 1), (1, 1)]
    assert [(tp.e, tp.f) for tp in places_above(empty_tower(F3, 2), P("t"))] == [(1, 1)]
    assert tower_ord(t := R("t"), leaf) == 2
    assert tower_ord(R("t+1"), leaf) == 0
    assert tower_ord(1 / t, split[0]) == 0


def test_residue_power_examples(F3, R, P):
    tower = tower_make(F3, 2, [R("t")])
    [ram] = places_above(tower, P("t"))
    assert not residue_qth_power_test(R("2"), ram, 2)
    [inert] = places_above(tower, P("t+1"))
    assert inert.f == 2
    assert residue_qth_power_test(R("2"), inert, 2)
    assert residue_qth_power_test(R("1"), ram, 2)


@given(st.sampled_from(CASES), st.integers(0, 10 ** 9))
def test_classification_matches_explicit_factorization(case, seed):
    field, q = case
    rng = random.Random(seed)
    c = random_ratfunc(field, rng, 3, 2)
    if c.is_zero() or is_qth_power_in_K(c, q):
        return
    for place in places_up_to(field, 2):
        assert classify_place_step(root_place(place), c, q) == explicit_step_kind(place, c, q)


@given(st.sampled_from(CASES[:2]), st.integers(0, 10 ** 9))
def test_fundamental_identity_and_explicit_tree(case, seed):
    field, q = case
    rng = random.Random(seed)
    radicands = [c for c in (random_ratfunc(field, rng, 2, 1) for _ in range(3)) if not c.is_zero()]
    tower = tower_make(field, q, radicands)
    for place in places_up_to(field, 2)[:6]:
        assert fundamental_identity_holds(tower, place)
        ours = sorted((tp.e, tp.f, tp.path) for tp in places_above(tower, place))
        tree = factor_tree(place, kummer_levels(radicands, q))
        explicit = sorted((n.e, n.f, tuple(tag for tag in n.path if tag != "T"))
                          for n in tree.leaves())
        assert ours == explicit
