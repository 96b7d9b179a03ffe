from __future__ import annotations

import itertools

from hypothesis import given, strategies as st

from kummerlab.finite_field import make_field
from kummerlab.poly import (Poly, factor_poly, gcd, inverse_mod, irreducibles, is_irreducible,
                            monic_polys, multiply_out)

FIELDS = [make_field(2), make_field(3), make_field(5), make_field(2, 2), make_field(3, 2)]


def trial_factor(f: Poly) -> list[tuple[Poly, int]]:
    """Factor by dividing out monic polynomials of increasing degree."""
    field = f.field
    rest = f.monic()
    found: dict[Poly, int] = {}
    d = 1
    while rest.deg >= 2 * d:
        progress = False
        for low in itertools.product(range(field.size), repeat=d):
            g = Poly(field, low + (1,))
            while True:
                quo, rem = divmod(rest, g)
                if not rem.is_zero():
                    break
                found[g] = found.get(g, 0) + 1
                rest = quo
                progress = True
        if not progress:
            d += 1
    if rest.deg > 0:
        found[rest] = found.get(rest, 0) + 1
    return sorted(found.items(), key=lambda item: item[0].key())


def polys(field, max_deg):
    return st.lists(st.integers(0, field.size - 1), min_size=1, max_size=max_deg + 1).map(
        lambda c: Poly(field, tuple(c)))


def test_factor_examples(F3):
    t = Poly.t(F3)
    assert factor_poly(t * t + Poly.const(F3, 2)) == [(t + Poly.const(F3, 1), 1),
                                                       (t + Poly.const(F3, 2), 1)]
    assert factor_poly(t * t + Poly.const(F3, 1)) == [(t * t + Poly.const(F3, 1), 1)]
    assert factor_poly(t ** 3) == [(t, 3)]


@given(st.sampled_from(FIELDS), st.data())
def test_factor_matches_trial_division(field, data):
    f = data.draw(polys(field, 6))
    if f.deg < 1:
        return
    assert factor_poly(f) == trial_factor(f)
    assert multiply_out(field, f.lc, factor_poly(f)) == f


@given(st.sampled_from(FIELDS), st.data())
def test_division_and_gcd(field, data):
    a = data.draw(polys(field, 6))
    b = data.draw(polys(field, 4))
    if b.is_zero():
        return
    q, r = divmod(a, b)
    assert q * b + r == a
    assert r.is_zero() or r.deg < b.deg
    g = gcd(a, b)
    assert (a % g).is_zero() and (b % g).is_zero()
    if g.deg == 0 and b.deg > 0:
        inv = inverse_mod(a, b)
        assert ((inv * a) % b).is_one()


def test_rabin_against_factor_count():
    for field in FIELDS[:4]:
        for d in range(1, 5 if field.size <= 3 else 3):
            for g in monic_polys(field, d):
                assert is_irreducible(g) == (trial_factor(g) == [(g, 1)])


def test_irreducible_counts_follow_necklace_formula():
    # number of monic irreducibles of degree d over F_Q is (1/d) sum_{k | d} mu(k) Q^(d/k)
    mu = {1: 1, 2: -1, 3: -1, 4: 0, 5: -1, 6: 1}
    for field in (make_field(2), make_field(3), make_field(2, 2)):
        for d in range(1, 5):
            expected = sum(mu[k] * field.size ** (d // k) for k in range(1, d + 1) if d % k == 0) // d
            assert len(irreducibles(field, d)) == expected
