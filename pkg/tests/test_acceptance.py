"""Acceptance criteria 1-9, each at its stated tolerance and time limit."""

from __future__ import annotations

import random
import time

from kummerlab.finite_field import make_field
from kummerlab.poly import Poly
from kummerlab.ratfunc import Place, RatFunc, divisor_of, random_ratfunc
from kummerlab.sweeps import run_suite
from kummerlab.tower_lab import (BOUNDED_SO_FAR, UNBOUNDED_EVIDENCE, build_inert_tower,
                                 factor_tree, kummer_levels, ord_q, path_q_profile,
                                 uniformizer_chain)


def test_criterion_1_splitting_vs_factorization(acceptance):
    report = run_suite("split-vs-factor", seed=0, pool_size=30, max_degree=3)
    ok = report.failures == 0 and report.elapsed < 30
    acceptance(1, ok, f"{report.cases} place/radicand cases, {report.failures} disagreements, "
                      f"{report.elapsed:.1f}s (limit 30s)")
    assert ok, report.first_failure


def test_criterion_2_norm_oracle_consistency(acceptance):
    report = run_suite("norm-consistency", seed=0, bound=4)
    ok = report.failures == 0 and report.elapsed < 600
    acceptance(2, ok, f"{report.cases} pairs ({report.details['solvable']} solvable, "
                      f"{report.details['unsolvable']} unsolvable), {report.failures} "
                      f"contradictions, {report.elapsed:.1f}s (limit 600s)")
    assert ok, report.first_failure


def test_criteria_3_and_4_valuation_ring_sweep(acceptance):
    report = run_suite("L2L1-equivalence", seed=0, count=300)
    eq = report.details["equivalence_failures"]
    dich = report.details["dichotomy_failures"]
    per_place = report.details["places"]
    enough = all(v["cases"] >= 300 for v in per_place.values())
    acceptance(3, eq == 0 and enough,
               f"{report.cases} non-degenerate x over inf and (t), {eq} failures, "
               f"{report.skipped} degenerate skipped")
    acceptance(4, dich == 0 and enough, f"pole dichotomy on the same {report.cases} cases, "
                                        f"{dich} failures")
    assert eq == 0 and dich == 0 and enough, report.first_failure


def test_criterion_5_s_integer_corpus(acceptance):
    report = run_suite("sint-corpus", seed=0, count=500, sample_size=5)
    ok = report.failures == 0 and report.cases >= 500
    acceptance(5, ok, f"{report.cases} cases, {report.failures} failures, "
                      f"{report.skipped} degenerate skipped")
    assert ok, report.first_failure


def test_criterion_6_constants(acceptance):
    report = run_suite("constants", seed=0, count=50)
    accepted = report.details["constants_accepted"]
    rejected = report.details["nonconstants_rejected"]
    ok = report.failures == 0 and accepted == 9 and rejected == 50
    acceptance(6, ok, f"{accepted} constants of F_9 accepted, "
                      f"{rejected} nonconstants rejected with certificates, "
                      f"{report.failures} failures")
    assert ok, report.first_failure


def test_criterion_7_inert_tower(acceptance):
    start = time.perf_counter()
    report = build_inert_tower(3, 1, 2, [2, 2])
    field = make_field(3)
    [leaf] = factor_tree(Place.finite(Poly.t(field)), report.levels).leaves()
    elapsed = time.perf_counter() - start
    ok = (report.residue_degree == 4 and report.explicit_degree == 4
          and leaf.f == 4 and leaf.e == 1
          and report.factor_counts == (1, 1)
          and [c.f for c in report.inert_certificates] == [2, 2]
          and [c.e for c in report.total_ramification_certificates] == [2, 2]
          and elapsed < 10)
    acceptance(7, ok, f"residue degree {report.residue_degree} (explicit {report.explicit_degree}),"
                      f" factor counts {list(report.factor_counts)}, "
                      f"{len(report.inert_certificates)} inert and "
                      f"{len(report.total_ramification_certificates)} total-ramification certificates, "
                      f"{elapsed:.2f}s (limit 10s)")
    assert ok


def test_criterion_8_q_boundedness_patterns(acceptance):
    field = make_field(3)
    t = RatFunc.t(field)
    t_place = Place.finite(Poly.t(field))
    chain_ok = True
    for depth in range(1, 5):
        tree = factor_tree(t_place, uniformizer_chain(field, 2, depth))
        profile = path_q_profile(tree)
        [path] = profile.paths
        chain_ok &= (profile.verdict == UNBOUNDED_EVIDENCE
                     and path.ord_e == tuple(range(depth + 1)))
    split = path_q_profile(factor_tree(t_place, kummer_levels([t + 1, t * t + 1], 2)))
    split_ok = split.verdict == BOUNDED_SO_FAR and split.bound == 0
    sweep = run_suite("qbound-patterns", seed=0)
    ok = chain_ok and split_ok and sweep.failures == 0
    acceptance(8, ok, f"chain depths 1-4 {'unbounded' if chain_ok else 'WRONG'}, split-only "
                      f"bound {split.bound}, sweep {sweep.cases} cases with {sweep.failures} failures"
                      f" ({sweep.details['galois_trees']} Galois trees)")
    assert ok, sweep.first_failure


def test_criterion_9_product_formula(acceptance):
    rng = random.Random(0)
    fields = [make_field(3), make_field(2, 2), make_field(5), make_field(3, 2)]
    checked = bad = 0
    while checked < 500:
        field = fields[checked % len(fields)]
        x = random_ratfunc(field, rng, 5, 5)
        if x.is_zero():
            continue
        checked += 1
        div = divisor_of(x)
        # rebuild x from its finite divisor and compare, independent of the degree bookkeeping
        lead = field.div(x.num.lc, x.den.lc)
        rebuilt = RatFunc(Poly(field, (lead,)))
        for place in div.support():
            if not place.is_infinite:
                rebuilt = rebuilt * RatFunc.of(field, place.poly) ** div[place]
        if div.degree() != 0 or rebuilt != x:
            bad += 1
    acceptance(9, bad == 0, f"{checked} principal divisors, {bad} with nonzero degree")
    assert bad == 0
