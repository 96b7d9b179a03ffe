from __future__ import annotations

import random

import pytest

from kummerlab.errors import LimitExceeded, PreconditionError
from kummerlab.finite_field import make_field
from kummerlab.kummer_tower import empty_tower, places_above, root_place, tower_make
from kummerlab.norm_oracle import (SOLVABLE, TRIVIALLY_SOLVABLE, UNSOLVABLE,
                                   brute_force_norm_witness, expand_norm_to_system,
                                   local_norm_test, norm_solvable, qth_power_split)
from kummerlab.ratfunc import is_qth_power_in_K, random_ratfunc, ratfuncs_up_to


def test_local_examples(F3, R, P):
    t = R("t")
    tp = root_place(P("t"))
    assert local_norm_test(-t, t, tp, 2)
    assert not local_norm_test(t, t, tp, 2)
    assert not local_norm_test(R("t+1"), t, root_place(P("t+1")), 2)


def test_global_examples(F3, R):
    K = empty_tower(F3, 2)
    t = R("t")
    verdict = norm_solvable(K, t, -t)
    assert verdict.status == SOLVABLE
    verdict = norm_solvable(K, t, t)
    assert verdict.status == UNSOLVABLE and str(verdict.obstruction) == "t"
    assert norm_solvable(K, R("t^4"), R("t+1")).status == TRIVIALLY_SOLVABLE


def test_witness_examples(F3, R):
    K = empty_tower(F3, 2)
    t = R("t")
    w = brute_force_norm_witness(K, t, -t, 1)
    assert w is not None and w.norm_equals(-t)
    assert w.coords == {(1,): R("1")}
    assert brute_force_norm_witness(K, t, t, 4) is None
    w = brute_force_norm_witness(K, t, R("t^2-t"), 2)
    assert w is not None and w.norm_equals(R("t^2-t"))
    with pytest.raises(LimitExceeded):
        brute_force_norm_witness(K, t, t, 7)
    with pytest.raises(PreconditionError):
        brute_force_norm_witness(K, R("t^2"), t, 2)


def test_expand_norm_examples(F3, R):
    K = empty_tower(F3, 2)
    system = expand_norm_to_system(K, R("t"), R("t^2-t"))
    assert len(system.equations) == 1 and len(system.variables) == 2
    assert system.to_json()["equations"] == ["d0^2 + (2*t)*d1^2 + 2*t^2+t = 0"]
    w = brute_force_norm_witness(K, R("t"), R("t^2-t"), 2)
    assert system.is_satisfied_by(w)
    deeper = expand_norm_to_system(tower_make(F3, 2, [R("t+1")]), R("t"), R("t"))
    assert len(deeper.equations) == 2 and len(deeper.variables) == 4
    with pytest.raises(PreconditionError):
        expand_norm_to_system(K, R("t"), R("0"))


def test_qth_power_split(F3, R):
    core, scale = qth_power_split(R("t^3*(t+1)^2/(t+2)^5"), 2)
    assert core * scale ** 2 == R("t^3*(t+1)^2/(t+2)^5")
    assert core.format() == "t^2+2*t"


@pytest.mark.parametrize("field,q,radicands", [
    (make_field(3), 2, []),
    (make_field(3), 2, ["t+1"]),
    (make_field(5), 2, ["t"]),
    (make_field(2, 2), 3, []),
])
def test_verdicts_agree_with_bounded_search(field, q, radicands):
    from kummerlab.ratfunc import parse_ratfunc
    tower = tower_make(field, q, [parse_ratfunc(c, field) for c in radicands])
    rng = random.Random(3)
    checked = 0
    while checked < 25:
        a = random_ratfunc(field, rng, 1, 1)
        z = random_ratfunc(field, rng, 2, 1)
        if a.is_zero() or z.is_zero() or is_qth_power_in_K(a, q):
            continue
        if norm_solvable(tower, a, z).status == TRIVIALLY_SOLVABLE:
            continue
        checked += 1
        verdict = norm_solvable(tower, a, z)
        witness = brute_force_norm_witness(tower, a, z, 2 if q == 2 and not radicands else 1)
        if witness is not None:
            # a witness anywhere rules out a local obstruction
            assert verdict.status == SOLVABLE
            assert witness.norm_equals(z)


def test_numpy_and_generic_searches_agree(F3):
    K = empty_tower(F3, 2)
    elements = [x for x in ratfuncs_up_to(F3, 1, 1) if not x.is_zero()]
    rng = random.Random(5)
    for _ in range(60):
        a, z = rng.choice(elements), rng.choice(elements)
        if is_qth_power_in_K(a, 2):
            continue
        fast = brute_force_norm_witness(K, a, z, 2)
        slow = brute_force_norm_witness(K, a, z, 2, use_numpy=False)
        assert (fast is None) == (slow is None)


def test_obstruction_place_is_a_checked_place(F3, R):
    tower = tower_make(F3, 2, [R("t+1")])
    verdict = norm_solvable(tower, R("t"), R("t"))
    if verdict.status == UNSOLVABLE:
        assert verdict.obstruction in verdict.checked_places
        assert verdict.obstruction in places_above(tower, verdict.obstruction.base_place)
