import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ffvar.gf import (
    DigitAdder,
    FieldError,
    SquareClass,
    add,
    enumerate_elements,
    inv,
    is_square,
    make_field,
    mul,
    neg,
    parse_field,
    pow as fpow,
)

FIELDS = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2), (5, 2)]


def field_and_elems(n):
    return st.sampled_from(FIELDS).flatmap(
        lambda pk: st.tuples(st.just(make_field(*pk)), *[st.integers(0, pk[0] ** pk[1] - 1)] * n)
    )


def naive_poly_mulmod(a, b, modulus, p):
    """Schoolbook product of coefficient lists reduced by a monic modulus."""
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    k = len(modulus) - 1
    for d in range(len(prod) - 1, k - 1, -1):
        c = prod[d]
        if c:
            for i in range(k + 1):
                prod[d - k + i] = (prod[d - k + i] - c * modulus[i]) % p
    return (prod + [0] * k)[:k]


def test_small_fields_have_expected_moduli():
    assert make_field(3).generator == 2
    assert make_field(2, 2).modulus == (1, 1, 1)
    F9 = make_field(3, 2)
    assert F9.modulus == (1, 0, 1)
    assert F9.generator == 4
    assert F9.tag == "3^2" and F9.q == 9


@pytest.mark.parametrize("p,k", FIELDS)
def test_modulus_has_no_roots_and_generator_has_full_order(p, k):
    F = make_field(p, k)
    if k in (2, 3):
        # a polynomial of degree 2 or 3 is irreducible iff it has no root in F_p
        for x in range(p):
            assert sum(c * x**i for i, c in enumerate(F.modulus)) % p != 0
    seen, x = set(), 1
    for _ in range(F.q - 1):
        seen.add(x)
        x = F._mul(x, F.generator)
    assert len(seen) == F.q - 1 and x == 1


@pytest.mark.parametrize("p,k", [(2, 2), (3, 2), (2, 3), (5, 2)])
def test_multiplication_matches_schoolbook_reduction(p, k):
    F = make_field(p, k)
    for a, b in itertools.product(range(F.q), repeat=2):
        want = F.from_vec(naive_poly_mulmod(list(F.to_vec(a)), list(F.to_vec(b)), list(F.modulus), p))
        assert F._mul(a, b) == want


@given(field_and_elems(3))
def test_field_axioms(args):
    F, a, b, c = args
    x, y, z = F.element(a), F.element(b), F.element(c)
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + neg(x) == F.element(0)
    if a:
        assert x * inv(x) == F.element(1)


@given(field_and_elems(1), st.integers(-20, 20))
def test_pow_agrees_with_repeated_multiplication(args, e):
    F, a = args
    x = F.element(a)
    if a == 0 and e < 0:
        with pytest.raises(ZeroDivisionError):
            fpow(x, e)
        return
    r = F.element(1)
    base = x if e >= 0 else inv(x)
    for _ in range(abs(e)):
        r = mul(r, base)
    assert fpow(x, e) == r


def test_zero_edge_cases():
    F = make_field(5)
    assert fpow(F.element(0), 0) == F.element(1)
    with pytest.raises(ZeroDivisionError):
        inv(F.element(0))


@pytest.mark.parametrize("p,k", FIELDS)
def test_tables_agree_with_table_free_arithmetic(p, k):
    F = make_field(p, k)
    tb = F.tables
    for a, b in itertools.product(range(F.q), repeat=2):
        assert tb.add[a][b] == F._add(a, b)
        assert tb.mul[a][b] == F._mul(a, b)


@pytest.mark.parametrize("q", [3, 5, 7, 9, 25])
def test_half_the_units_are_squares(q):
    F = parse_field(str(q))
    classes = [is_square(x) for x in enumerate_elements(F)]
    assert classes.count(SquareClass.YES) == (q - 1) // 2
    assert classes.count(SquareClass.ZERO) == 1


def test_square_class_undefined_in_characteristic_two():
    with pytest.raises(FieldError):
        is_square(make_field(2, 2).element(1))


@pytest.mark.parametrize("bad", [(4, 1), (6, 1), (3, 0), (2, 21)])
def test_make_field_rejects_bad_input(bad):
    with pytest.raises(FieldError):
        make_field(*bad)


def test_parse_field_forms():
    assert parse_field("3^2") == make_field(3, 2)
    assert parse_field("9") == make_field(3, 2)
    assert parse_field("8") == make_field(2, 3)
    with pytest.raises(FieldError):
        parse_field("6")


def test_mixed_fields_refuse_to_combine():
    with pytest.raises(FieldError):
        add(make_field(3).element(1), make_field(5).element(1))


@pytest.mark.parametrize("p,nd", [(2, 7), (3, 5), (5, 9), (7, 3)])
def test_digit_adder_is_digitwise_addition(p, nd):
    rng = np.random.default_rng(p * nd)
    a = rng.integers(0, p**nd, 500)
    b = rng.integers(0, p**nd, 500)
    want = sum(((a // p**i + b // p**i) % p) * p**i for i in range(nd))
    assert np.array_equal(DigitAdder(p, nd)(a, b), want)
