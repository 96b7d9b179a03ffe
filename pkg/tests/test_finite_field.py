from __future__ import annotations

import itertools

import pytest
from hypothesis import given, strategies as st

from kummerlab.errors import NoNonresidue, ParseError
from kummerlab.finite_field import (find_q_nonresidue, is_prime, is_qth_power_ext, make_field,
                                    parse_field_spec)

SMALL_FIELDS = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2), (5, 2), (2, 4), (3, 3)]


def poly_mul_mod(a, b, modulus, p):
    """Schoolbook product of coefficient lists reduced by a monic modulus."""
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    m = len(modulus) - 1
    for k in range(len(prod) - 1, m - 1, -1):
        c = prod[k]
        if c:
            for i, mc in enumerate(modulus):
                prod[k - m + i] = (prod[k - m + i] - c * mc) % p
    return (prod + [0] * m)[:m]


def test_prime_field_arithmetic(F3):
    two = F3(2)
    assert (two + two).v == 1
    assert two.inverse().v == 2


def test_f4_product_of_u_and_u_plus_one(F4):
    u = F4.gen
    assert F4.modulus == (1, 1, 1)
    assert (u * (u + 1)).is_one()


@pytest.mark.parametrize("p,m", SMALL_FIELDS)
def test_multiplication_matches_schoolbook_oracle(p, m):
    field = make_field(p, m)
    for a, b in itertools.product(range(field.size), repeat=2):
        expected = poly_mul_mod(field.coords(a), field.coords(b), list(field.modulus), p)
        assert field.coords(field.mul(a, b)) == expected


@pytest.mark.parametrize("p,m", SMALL_FIELDS)
def test_canonical_modulus_is_smallest_irreducible(p, m):
    field = make_field(p, m)

    def has_factor(poly):
        # irreducibility oracle: no monic factor of degree <= m/2 divides it
        for d in range(1, m // 2 + 1):
            for low in itertools.product(range(p), repeat=d):
                g = list(low) + [1]
                if divides(g, poly, p):
                    return True
        return False

    def divides(g, f, p):
        f = list(f)
        for k in range(len(f) - 1, len(g) - 2, -1):
            c = f[k]
            if c:
                for i, gc in enumerate(g):
                    f[k - len(g) + 1 + i] = (f[k - len(g) + 1 + i] - c * gc) % p
        return not any(f[:len(g) - 1])

    if m > 1:
        assert not has_factor(list(field.modulus))
    smaller = [list(low) + [1] for low in itertools.product(range(p), repeat=m)
               if tuple(low) < tuple(field.modulus[:-1])]
    assert all(m == 1 or has_factor(g) for g in smaller)


@given(st.sampled_from(SMALL_FIELDS), st.data())
def test_field_axioms(pm, data):
    field = make_field(*pm)
    codes = st.integers(0, field.size - 1)
    x, y, z = (field.element(data.draw(codes)) for _ in range(3))
    assert (x + y) * z == x * z + y * z
    assert x * (y * z) == (x * y) * z
    assert x - x == field.zero
    if not x.is_zero():
        assert (x * x.inverse()).is_one()
        assert field.generator_power(field.dlog(x.v)) == x.v
    assert x ** field.size == x


def test_qth_power_examples(F3):
    assert not is_qth_power_ext(F3(2), 2, 1)
    assert is_qth_power_ext(F3(2), 2, 2)
    for p, m in SMALL_FIELDS:
        field = make_field(p, m)
        for q in (2, 3, 5):
            assert is_qth_power_ext(field.one, q, 3)


@pytest.mark.parametrize("p,q,f", [(3, 2, 1), (3, 2, 2), (3, 2, 3), (5, 2, 2), (7, 3, 1),
                                   (7, 3, 2), (2, 3, 2), (5, 3, 2), (2, 3, 3)])
def test_qth_power_ext_against_exhaustion(p, q, f):
    base = make_field(p)
    big = make_field(p, f)
    # prime-field codes keep their value inside every extension
    powers = {big.power(y, q) for y in range(big.size)}
    for x in range(1, p):
        assert is_qth_power_ext(base.element(x), q, f) == (x in powers)
    with pytest.raises(ValueError):
        is_qth_power_ext(base.zero, q, f)


def test_nonresidues(F3, F4):
    assert find_q_nonresidue(F3, 2).v == 2
    assert find_q_nonresidue(F4, 3) == F4.gen
    with pytest.raises(NoNonresidue):
        find_q_nonresidue(F3, 3)


@pytest.mark.parametrize("p,m,q", [(3, 1, 2), (2, 2, 3), (7, 1, 3), (3, 2, 2), (5, 2, 3)])
def test_nonresidue_is_smallest(p, m, q):
    field = make_field(p, m)
    qth = {field.power(y, q) for y in range(field.size)}
    expected = next(x for x in range(1, field.size) if x not in qth)
    assert find_q_nonresidue(field, q).v == expected


def test_field_spec_parsing():
    assert parse_field_spec("p=3,m=2") is make_field(3, 2)
    assert parse_field_spec("p=5") is make_field(5)
    for bad in ("p=4,m=1", "p=3,m=0", "q=3", ""):
        with pytest.raises(ParseError):
            parse_field_spec(bad)


@given(st.integers(2, 400))
def test_is_prime_matches_trial_division(n):
    assert is_prime(n) == all(n % d for d in range(2, n))
