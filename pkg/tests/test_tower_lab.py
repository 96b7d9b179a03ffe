from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from kummerlab.errors import CannotClassify, LimitExceeded, PreconditionError
from kummerlab.finite_field import make_field
from kummerlab.ratfunc import ord_at, parse_place, random_ratfunc, residue_at, RatFunc
from kummerlab.tower_lab import (BOUNDED_SO_FAR, UNBOUNDED_EVIDENCE, InertCertificate, LevelSpec,
                                 StepFailure, TotallyRamifiedCertificate, TowerAlgebra,
                                 build_inert_tower, const_element, factor_tree,
                                 generator_element, kummer_levels, ord_q, path_q_profile,
                                 uniformizer_chain, verify_inert_step,
                                 verify_total_ramification_step)

Defined = LevelSpec.from_ratfuncs


def has_root_mod_place(coeffs, place):
    """Roots of the reduction found by evaluating at every prime-field element (degree-1 place)."""
    field = coeffs[0].field
    for v in range(field.p):
        x = RatFunc.const(field, v)
        total = sum((c * x ** i for i, c in enumerate(coeffs)), RatFunc.const(field, 0))
        if residue_at(total, place) == 0:
            return True
    return False


def test_inert_step_examples(F3, R, P):
    coeffs = [R("2"), R("1"), R("1")]
    assert not has_root_mod_place(coeffs, P("t"))
    cert = verify_inert_step(P("t"), Defined(coeffs))
    assert isinstance(cert, InertCertificate) and cert.f == 2
    failure = verify_inert_step(P("t"), Defined([R("-1"), R("0"), R("1")]))
    assert isinstance(failure, StepFailure) and not failure
    with pytest.raises(PreconditionError):
        verify_inert_step(P("t"), Defined([R("1/t"), R("0"), R("1")]))
    with pytest.raises(PreconditionError):
        Defined([R("1"), R("0"), R("2")])


def test_total_ramification_step_examples(F3, R, P):
    cert = verify_total_ramification_step(P("t"), Defined([R("1/t"), R("0"), R("1")]))
    assert isinstance(cert, TotallyRamifiedCertificate)
    assert cert.e == 2 and cert.constant_order == -1 and cert.irreducible
    assert not verify_total_ramification_step(P("t"), Defined([R("t"), R("0"), R("1")]))
    assert not verify_total_ramification_step(P("t"), Defined([R("1/t^2"), R("0"), R("1")]))
    assert not verify_total_ramification_step(P("t"), Defined([R("1/t"), R("1/t"), R("1")]))


def test_factor_tree_examples(F3, R, P):
    [leaf] = factor_tree(P("t"), [LevelSpec.kummer(R("t"), 2)]).leaves()
    assert (leaf.e, leaf.f) == (2, 1)
    leaves = factor_tree(P("t"), [LevelSpec.kummer(R("t+1"), 2)]).leaves()
    assert [(n.e, n.f, n.path_string) for n in leaves] == [(1, 1, "S0"), (1, 1, "S1")]
    [leaf] = factor_tree(P("t"), [Defined([R("2"), R("1"), R("1")])]).leaves()
    assert (leaf.e, leaf.f) == (1, 2) and isinstance(leaf.certificate, InertCertificate)


def test_factor_tree_split_children_are_roots(F3, R, P):
    tree = factor_tree(P("t"), [LevelSpec.kummer(R("t+1"), 2)])
    assert tree.root.children[0].branch != tree.root.children[1].branch


def test_factor_tree_errors(F3, R, P):
    with pytest.raises(CannotClassify):
        factor_tree(P("t"), [Defined([R("-1"), R("0"), R("1")])])
    with pytest.raises(PreconditionError):
        factor_tree(P("t"), [Defined([R("2"), R("1"), R("1")]), LevelSpec.kummer(R("t"), 2)])
    with pytest.raises(LimitExceeded):
        factor_tree(P("t"), kummer_levels([R(f"t+{i}") for i in range(7)], 2))


def test_tower_algebra_norms(F3, R):
    algebra = TowerAlgebra(F3, [LevelSpec.kummer(R("t"), 2)])
    x = algebra.add(const_element(R("1")), generator_element(F3, 0))
    # N(1 + sqrt t) = 1 - t
    assert algebra.norm(x) == R("1-t")
    assert algebra.norm(const_element(R("t+1"))) == R("(t+1)^2")
    y = algebra.add(const_element(R("t")), generator_element(F3, 0, R("2")))
    assert algebra.norm(algebra.mul(x, y)) == algebra.norm(x) * algebra.norm(y)


def test_path_profile_examples(F3, R, P):
    report = path_q_profile(factor_tree(P("t"), uniformizer_chain(F3, 2, 3)))
    assert report.verdict == UNBOUNDED_EVIDENCE and report.max_ord_e == 3
    split = path_q_profile(factor_tree(P("t"), kummer_levels([R("t+1"), R("t^2+1")], 2)))
    assert split.verdict == BOUNDED_SO_FAR and split.bound == 0
    assert len(split.paths) == 4
    # one inert level followed by a split level
    inert = path_q_profile(factor_tree(P("t"), kummer_levels([R("2"), R("t+1")], 2)))
    assert inert.verdict == BOUNDED_SO_FAR and inert.bound == 1 and inert.max_ord_f == 1


@pytest.mark.parametrize("depth", [1, 2, 3, 4])
def test_uniformizer_chain_ramifies_every_level(F3, P, depth):
    tree = factor_tree(P("t"), uniformizer_chain(F3, 2, depth))
    [leaf] = tree.leaves()
    assert leaf.e == 2 ** depth and ord_q(leaf.e, 2) == depth


@settings(max_examples=30)
@given(st.sampled_from([(3, 1, 2), (2, 2, 3)]), st.integers(0, 10 ** 9))
def test_galois_trees_have_identical_sibling_profiles(case, seed):
    p, m, q = case
    field = make_field(p, m)
    rng = random.Random(seed)
    radicands = [c for c in (random_ratfunc(field, rng, 2, 1) for _ in range(3)) if not c.is_zero()]
    for text in ("t", "t+1", "inf"):
        tree = factor_tree(parse_place(text, field), kummer_levels(radicands, q))
        assert path_q_profile(tree, q).sibling_profiles_identical()
        for level in range(tree.depth):
            nodes = tree.nodes_at(level)
            nontrivial = sum(n.path[-1] != "T" for n in tree.paths()[0][:level + 1])
            assert sum(n.e * n.f for n in nodes) == q ** nontrivial


def test_inert_tower_one_level(R, P):
    report = build_inert_tower(3, 1, 1, [2])
    assert report.residue_degrees == (1, 2)
    level = report.levels[0]
    coeffs = [next(iter(c.values())) if c else R("0") for c in level.coeffs] + [R("1")]
    assert not has_root_mod_place(coeffs, P("t"))
    qk = R(report.choices[0]["q"])
    qplace = parse_place(report.choices[0]["q"], qk.field)
    assert ord_at(coeffs[0], qplace) == -1
    assert all(ord_at(c, qplace) >= 0 for c in coeffs[1:] if not c.is_zero())


def test_inert_tower_two_levels():
    report = build_inert_tower(3, 1, 2, [2, 2])
    assert report.residue_degree == 4 and report.explicit_degree == 4
    assert report.factor_counts == (1, 1)
    assert [c.f for c in report.inert_certificates] == [2, 2]
    assert [c.e for c in report.total_ramification_certificates] == [2, 2]
    assert [ch["q"] for ch in report.choices] == ["t+1", "t^2+1"]


def test_inert_tower_requested_choice(F3):
    report = build_inert_tower(3, 1, 1, [2], choices=[{"p_coeffs": [2, 1, 1], "q": "t+1"}])
    assert report.choices[0]["p"] == "X^2+X+2"
    assert report.inert_certificates[0].reduction == "X^2+X+2"


def test_inert_tower_script_reruns():
    report = build_inert_tower(3, 1, 2, [2, 2])
    script = report.script()
    again = build_inert_tower(script["p"], 1, 2, script["step_degrees"], choices=script["choices"])
    assert again.to_json() == report.to_json()


def test_inert_tower_edges():
    assert build_inert_tower(3, 1, 0, []).residue_degree == 1
    assert build_inert_tower(5, 1, 1, [3]).residue_degree == 3
    with pytest.raises(LimitExceeded):
        build_inert_tower(3, 1, 5, [2] * 5)
    with pytest.raises(PreconditionError):
        build_inert_tower(3, 1, 1, [1])
    with pytest.raises(PreconditionError):
        build_inert_tower(3, 2, 1, [2])
