"""Named sweep suites that drive the acceptance checks.

Every suite is deterministic for a fixed seed and returns a ``SweepReport``
with pass/fail counts and, on failure, a command line reproducing the first
failing case.
"""

from __future__ import annotations

import random
import shlex
import time
from dataclasses import dataclass, field as dc_field
from typing import Callable

from .definability import (BLOCKING, SAMPLED, ValRing, choose_ab, constants_predicate,
                           is_s_integer, pole_dichotomy, s_integer_decide, val_ring_predicate)
from .errors import DegenerateInput, ParseError
from .finite_field import FieldSpec, make_field
from .kummer_tower import classify_place_step, empty_tower, root_place, tower_make
from .norm_oracle import SOLVABLE, UNSOLVABLE, brute_force_norm_witness, norm_solvable
from .poly import Poly
from .ratfunc import (Place, RatFunc, is_qth_power_in_K, ord_at, places_up_to,
                      random_ratfunc, ratfuncs_up_to)
from .tower_lab import (BOUNDED_SO_FAR, UNBOUNDED_EVIDENCE, build_inert_tower,
                        explicit_step_kind, factor_tree, kummer_levels, path_q_profile,
                        uniformizer_chain)


@dataclass
class SweepReport:
    suite: str
    seed: int
    cases: int = 0
    failures: int = 0
    skipped: int = 0
    first_failure: dict | None = None
    details: dict = dc_field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return self.failures == 0 and self.cases > 0

    def fail(self, description: str, command: list[str]) -> None:
        self.failures += 1
        if self.first_failure is None:
            self.first_failure = {"case": description, "reproduce": shlex.join(command)}

    def to_json(self) -> dict:
        # elapsed time is left out so that reports are byte-identical across runs
        return {"suite": self.suite, "seed": self.seed, "cases": self.cases,
                "failures": self.failures, "skipped": self.skipped,
                "first_failure": self.first_failure, "details": self.details}


def _field_arg(field: FieldSpec) -> str:
    return field.spec_text()


def _pool(field: FieldSpec, q: int, size: int, seed: int) -> list[RatFunc]:
    """Distinct nonzero radicands of degree <= 2 that are not q-th powers in K."""
    rng = random.Random(seed)
    pool: list[RatFunc] = []
    while len(pool) < size:
        x = random_ratfunc(field, rng, 2, 2)
        if x.is_zero() or x in pool or is_qth_power_in_K(x, q):
            continue
        pool.append(x)
    return pool


def split_vs_factor(seed: int = 0, pool_size: int = 30, max_degree: int = 3) -> SweepReport:
    """classify_place_step against factoring X^q - a over the explicit residue field."""
    report = SweepReport("split-vs-factor", seed)
    for p, m, q in ((3, 1, 2), (2, 2, 3)):
        field = make_field(p, m)
        counts = {"split": 0, "inert": 0, "ramified": 0}
        for place in places_up_to(field, max_degree):
            for a in _pool(field, q, pool_size, seed):
                report.cases += 1
                got = classify_place_step(root_place(place), a, q)
                expected = explicit_step_kind(place, a, q)
                counts[expected] += 1
                if got != expected:
                    report.fail(f"{a} at {place}: {got} vs {expected}",
                                ["kummerlab", "split", "--field", _field_arg(field), "--q", str(q),
                                 "--radicand", str(a), "--place", str(place)])
        report.details[f"{field.spec_text()},q={q}"] = counts
    return report


def norm_consistency(seed: int = 0, bound: int = 4, max_cases: int | None = None) -> SweepReport:
    """Local-global verdicts against brute-force witness search, F_3(t), q = 2, empty tower."""
    report = SweepReport("norm-consistency", seed)
    field = make_field(3)
    q = 2
    tower = empty_tower(field, q)
    elements = [x for x in ratfuncs_up_to(field, 2, 2) if not x.is_zero()]
    radicands = [a for a in elements if not is_qth_power_in_K(a, q)]
    pairs = [(a, z) for a in radicands for z in elements]
    if max_cases is not None and max_cases < len(pairs):
        pairs = sorted(random.Random(seed).sample(range(len(pairs)), max_cases))
        pairs = [((radicands[i // len(elements)]), elements[i % len(elements)]) for i in pairs]
    solvable = unsolvable = 0
    for a, z in pairs:
        report.cases += 1
        verdict = norm_solvable(tower, a, z)
        witness = brute_force_norm_witness(tower, a, z, bound)
        command = ["kummerlab", "norm-solve", "--field", "p=3,m=1", "--q", "2",
                   "--a", str(a), "--z", str(z), "--witness-bound", str(bound)]
        if verdict.status == SOLVABLE:
            solvable += 1
            if witness is None or not witness.norm_equals(z):
                report.fail(f"a={a}, z={z}: Solvable but no witness within bound {bound}", command)
        elif verdict.status == UNSOLVABLE:
            unsolvable += 1
            if witness is not None:
                report.fail(f"a={a}, z={z}: Unsolvable but witness {witness} found", command)
        else:
            report.fail(f"a={a}, z={z}: unexpected status {verdict.status}", command)
    report.details = {"solvable": solvable, "unsolvable": unsolvable, "bound": bound,
                      "radicands": len(radicands), "elements": len(elements)}
    return report


def l2l1_equivalence(seed: int = 0, count: int = 300, max_degree: int = 3) -> SweepReport:
    """Valuation-ring formula against ord x >= 0, with the pole dichotomy on the same cases."""
    report = SweepReport("L2L1-equivalence", seed)
    field = make_field(3)
    q = 2
    rng = random.Random(seed)
    equivalence_failures = dichotomy_failures = 0
    per_place = {}
    for place in (Place.infinity(field), Place.finite(Poly.t(field))):
        pair = choose_ab(ValRing(place), q)
        done = true_cases = 0
        while done < count:
            x = random_ratfunc(field, rng, max_degree, max_degree)
            if x.is_zero():
                continue
            try:
                trace = val_ring_predicate(x, pair)
            except DegenerateInput:
                report.skipped += 1
                continue
            done += 1
            report.cases += 1
            truth = ord_at(x, place) >= 0
            true_cases += truth
            command = ["kummerlab", "valring", "--field", "p=3,m=1", "--q", "2",
                       "--x", str(x), "--place", str(place)]
            if trace.value != truth:
                equivalence_failures += 1
                report.fail(f"x={x} at {place}: formula {trace.value}, ord test {truth}", command)
            applicable, negative, odd = pole_dichotomy(x, pair.b, place, q)
            if not applicable or negative != odd:
                dichotomy_failures += 1
                report.fail(f"x={x} at {place}: pole dichotomy fails", command)
        per_place[str(place)] = {"cases": done, "in_valuation_ring": true_cases,
                                 "a": str(pair.a), "b": str(pair.b)}
    report.details = {"equivalence_failures": equivalence_failures,
                      "dichotomy_failures": dichotomy_failures, "places": per_place}
    return report


def _s_sets(field: FieldSpec) -> list[list[Place]]:
    inf, t = Place.infinity(field), Place.finite(Poly.t(field))
    return [[inf], [t], [t, inf]]


def _places_arg(S: list[Place]) -> str:
    return ";".join(str(p) for p in S)


def sint_corpus(seed: int = 0, count: int = 500, sample_size: int = 5,
                max_degree: int = 2) -> SweepReport:
    """s_integer_decide against divisor inspection, with certificate checks."""
    report = SweepReport("sint-corpus", seed)
    field = make_field(3)
    q = 2
    rng = random.Random(seed)
    sets = _s_sets(field)
    true_cases = false_cases = 0
    while report.cases < count:
        x = random_ratfunc(field, rng, max_degree, max_degree)
        S = sets[report.cases % len(sets)]
        if x.is_zero() or (x + 1).is_zero():
            report.skipped += 1
            continue
        report.cases += 1
        decision = s_integer_decide(x, S, q, sample_size=sample_size, seed=seed)
        truth = is_s_integer(x, S)
        command = ["kummerlab", "sint", "--field", "p=3,m=1", "--q", "2", "--x", str(x),
                   "--S", _places_arg(S), "--sample-size", str(sample_size), "--seed", str(seed)]
        problem = None
        if decision.value != truth:
            problem = f"decision {decision.value}, divisor says {truth}"
        elif not truth:
            false_cases += 1
            if decision.surrogate != BLOCKING or not decision.certified:
                problem = "false case without a verifying blocking pair"
            elif decision.pair.violations():
                problem = f"blocking pair invalid: {decision.pair.violations()}"
        else:
            true_cases += 1
            if (decision.surrogate != SAMPLED or len(decision.traces) < sample_size
                    or not decision.certified):
                problem = "true case without enough sampled confirmations"
        if problem:
            report.fail(f"x={x}, S={_places_arg(S)}: {problem}", command)
    report.details = {"true": true_cases, "false": false_cases, "sample_size": sample_size}
    return report


def constants_check(seed: int = 0, count: int = 50, max_degree: int = 2) -> SweepReport:
    """Every constant of F_9(t) accepted; nonconstant samples rejected with certificates."""
    report = SweepReport("constants", seed)
    field = make_field(3, 2)
    q = 2
    accepted = rejected = 0
    for code in range(field.size):
        x = RatFunc(Poly(field, (code,)))
        report.cases += 1
        decision = constants_predicate(x, q, seed=seed)
        if decision.value and decision.certified:
            accepted += 1
        else:
            report.fail(f"constant {x} not accepted",
                        ["kummerlab", "constants", "--field", "p=3,m=2", "--x", str(x)])
    rng = random.Random(seed)
    sampled = 0
    while sampled < count:
        x = random_ratfunc(field, rng, max_degree, max_degree)
        if x.is_zero() or x.is_constant():
            continue
        sampled += 1
        report.cases += 1
        decision = constants_predicate(x, q, seed=seed)
        if (not decision.value and decision.surrogate == BLOCKING and decision.certified
                and not decision.pair.violations()):
            rejected += 1
        else:
            report.fail(f"nonconstant {x} not rejected with a certificate",
                        ["kummerlab", "constants", "--field", "p=3,m=2", "--x", str(x)])
    report.details = {"constants_accepted": accepted, "nonconstants_rejected": rejected}
    return report


def inert_tower_suite(seed: int = 0) -> SweepReport:
    """Inert towers: residue degrees, certificates and the explicit residue-field rank."""
    report = SweepReport("inert-tower", seed)
    configs = [(3, []), (3, [2]), (3, [2, 2]), (3, [3]), (2, [2, 2]), (5, [2]), (2, [3, 2])]
    rows = []
    for p, degrees in configs:
        report.cases += 1
        rep = build_inert_tower(p, 1, len(degrees), degrees)
        expected = 1
        for n in degrees:
            expected *= n
        t_place = Place.finite(Poly.t(make_field(p)))
        problems = []
        if rep.residue_degree != expected or rep.explicit_degree != expected:
            problems.append(f"residue degree {rep.residue_degree}/{rep.explicit_degree}")
        if len(rep.inert_certificates) != len(degrees) or len(rep.total_ramification_certificates) != len(degrees):
            problems.append("missing certificates")
        if any(c != 1 for c in rep.factor_counts):
            problems.append(f"factor counts {rep.factor_counts}")
        if degrees:
            leaves = factor_tree(t_place, rep.levels).leaves()
            if len(leaves) != 1 or leaves[0].f != expected or leaves[0].e != 1:
                problems.append("factor tree over (t) is not a single inert chain")
        if problems:
            report.fail(f"p={p}, degrees={degrees}: {'; '.join(problems)}",
                        ["kummerlab", "inert-tower", "--p", str(p),
                         "--degrees", ",".join(map(str, degrees))])
        rows.append({"p": p, "degrees": degrees, "residue_degree": rep.residue_degree,
                     "q": [c["q"] for c in rep.choices]})
    report.details = {"towers": rows}
    return report


def qbound_patterns(seed: int = 0, max_depth: int = 4, random_trees: int = 20) -> SweepReport:
    """Uniformizer chains, split-only towers and sibling profiles on Galois Kummer trees."""
    report = SweepReport("qbound-patterns", seed)
    details: dict = {"chains": [], "split_only": None, "galois_trees": 0}
    for p, m, q in ((3, 1, 2), (2, 2, 3)):
        field = make_field(p, m)
        t_place = Place.finite(Poly.t(field))
        for depth in range(1, max_depth + 1 if q == 2 else 4):
            report.cases += 1
            rep = path_q_profile(factor_tree(t_place, uniformizer_chain(field, q, depth)))
            ok = (rep.verdict == UNBOUNDED_EVIDENCE and rep.max_ord_e == depth
                  and all(p.ord_e[-1] == depth for p in rep.paths))
            details["chains"].append({"field": field.spec_text(), "q": q, "depth": depth,
                                      "verdict": rep.verdict, "max_ord_e": rep.max_ord_e})
            if not ok:
                report.fail(f"uniformizer chain {field.spec_text()} q={q} depth {depth}: {rep.verdict}",
                            ["kummerlab", "qbound", "--field", field.spec_text(), "--q", str(q),
                             "--pattern", "uniformizer-chain", "--depth", str(depth)])
    field = make_field(3)
    t_place = Place.finite(Poly.t(field))
    split_radicands = [RatFunc.of(field, s) for s in ("t+1", "t^2+1", "2*t+1")]
    report.cases += 1
    rep = path_q_profile(factor_tree(t_place, kummer_levels(split_radicands, 2)))
    details["split_only"] = {"verdict": rep.verdict, "bound": rep.bound, "paths": len(rep.paths)}
    if rep.verdict != BOUNDED_SO_FAR or rep.bound != 0:
        report.fail("split-only tower is not BoundedSoFar(0)",
                    ["kummerlab", "qbound", "--field", "p=3,m=1", "--q", "2", "--place", "t",
                     "--level", "kummer:t+1", "--level", "kummer:t^2+1", "--level", "kummer:2*t+1"])
    rng = random.Random(seed)
    for p, m, q in ((3, 1, 2), (2, 2, 3)):
        field = make_field(p, m)
        places = places_up_to(field, 2)
        for _ in range(random_trees):
            radicands = []
            while len(radicands) < 3:
                c = random_ratfunc(field, rng, 2, 1)
                if not c.is_zero():
                    radicands.append(c)
            place = places[rng.randrange(len(places))]
            report.cases += 1
            details["galois_trees"] += 1
            tree = factor_tree(place, kummer_levels(radicands, q))
            rep = path_q_profile(tree, q)
            degree = tower_make(field, q, radicands).degree
            total = sum(leaf.e * leaf.f for leaf in tree.leaves())
            if not rep.sibling_profiles_identical() or total != degree:
                report.fail(f"Galois tree {radicands} at {place}: profiles differ or sum {total} != {degree}",
                            ["kummerlab", "tree", "--field", field.spec_text(), "--q", str(q),
                             "--place", str(place)]
                            + [arg for c in radicands for arg in ("--level", f"kummer:{c}")])
    report.details = details
    return report


SUITES: dict[str, Callable[..., SweepReport]] = {
    "split-vs-factor": split_vs_factor,
    "norm-consistency": norm_consistency,
    "L2L1-equivalence": l2l1_equivalence,
    "sint-corpus": sint_corpus,
    "inert-tower": inert_tower_suite,
    "qbound-patterns": qbound_patterns,
    "constants": constants_check,
}


def run_suite(name: str, seed: int = 0, **options) -> SweepReport:
    try:
        suite = SUITES[name]
    except KeyError:
        raise ParseError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}") from None
    start = time.perf_counter()
    report = suite(seed=seed, **options)
    report.elapsed = time.perf_counter() - start
    return report
