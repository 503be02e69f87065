import itertools

import pytest
from hypothesis import assume, given, strategies as st

from ffvar.gf import make_field
from ffvar.polyring import (
    NEG_INF,
    Poly,
    PolyError,
    count_irreducibles,
    divrem,
    enumerate_irreducibles,
    enumerate_monic,
    factorize,
    gcd,
    interval,
    involute,
    irreducible_indices,
    is_irreducible,
    parse_poly,
    prime_power_form,
    to_text,
)

F3, F5, F4, F9 = make_field(3), make_field(5), make_field(2, 2), make_field(3, 2)


def polys(F, max_deg=6, nonzero=False):
    lo = 1 if nonzero else 0
    return st.lists(st.integers(0, F.q - 1), min_size=lo, max_size=max_deg + 1).map(
        lambda c: Poly(F, tuple(c))
    ).filter(lambda f: not nonzero or not f.is_zero())


fields = st.sampled_from([F3, F5, F4, F9])


def brute_irreducible_count(F, d):
    """Monic degree-d polynomials minus all products of two monic factors."""
    reducible = set()
    for a in range(1, d // 2 + 1):
        for f in enumerate_monic(F, a):
            for g in enumerate_monic(F, d - a):
                reducible.add((f * g).coeffs)
    return F.q**d - len(reducible)


def test_small_products():
    t, one = Poly.t(F3), Poly.one(F3)
    assert (t + one) * (t + Poly(F3, (2,))) == Poly(F3, (2, 0, 1))
    assert Poly.zero(F3).degree is NEG_INF


@pytest.mark.parametrize("F,d", [(F3, 1), (F3, 2), (F3, 3), (F3, 4), (F4, 3), (F5, 2), (F5, 3), (F9, 2)])
def test_irreducible_counts_match_brute_force(F, d):
    assert len(irreducible_indices(F, d)) == brute_irreducible_count(F, d)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 9])
def test_irreducible_counts_match_necklace_formula(q):
    F = make_field(*{2: (2, 1), 3: (3, 1), 4: (2, 2), 5: (5, 1), 9: (3, 2)}[q])
    for d in range(1, 7 if q < 9 else 5):
        assert len(irreducible_indices(F, d)) == count_irreducibles(q, d)


@given(fields.flatmap(lambda F: st.tuples(polys(F), polys(F), polys(F))))
def test_ring_axioms(fgh):
    f, g, h = fgh
    assert (f + g) * h == f * h + g * h
    assert (f * g) * h == f * (g * h)
    assert f - f == Poly.zero(f.field)


@given(fields.flatmap(lambda F: st.tuples(polys(F), polys(F, nonzero=True))))
def test_division_with_remainder(fg):
    f, g = fg
    qt, r = divrem(f, g)
    assert qt * g + r == f
    assert r.is_zero() or r.degree < g.degree


@given(fields.flatmap(lambda F: polys(F, max_deg=7, nonzero=True)))
def test_factorization_expands_back(f):
    fac = factorize(f)
    assert fac.expand(f.field) == f
    for place, e in fac.factors:
        assert e >= 1 and place.prime.is_monic()
        # each factor has no monic divisor of degree 1..deg/2
        d = place.degree
        for k in range(1, d // 2 + 1):
            for g in enumerate_monic(f.field, k):
                assert not divrem(place.prime, g)[1].is_zero()


def test_prime_power_forms():
    t = Poly.t(F3)
    f = Poly(F3, (2, 0, 1))
    assert [to_text(pl.prime) for pl, _ in factorize(f).factors] == ["1,1", "2,1"]
    c, place, m = prime_power_form(Poly(F3, (1, 0, 1)))
    assert (c, to_text(place.prime), m) == (1, "1,0,1", 1)
    c, place, m = prime_power_form((t + Poly.one(F3)) ** 3 * Poly(F3, (2,)))
    assert (c, to_text(place.prime), m) == (2, "1,1", 3)
    assert prime_power_form(f) is None
    assert is_irreducible(Poly(F3, (1, 0, 1))) and not is_irreducible(f)


@given(fields.flatmap(lambda F: st.tuples(polys(F, nonzero=True), polys(F, nonzero=True))))
def test_gcd_divides_both(fg):
    f, g = fg
    d = gcd(f, g)
    assert d.is_monic()
    assert divrem(f, d)[1].is_zero() and divrem(g, d)[1].is_zero()


@given(fields.flatmap(lambda F: st.tuples(polys(F, nonzero=True), polys(F, nonzero=True))))
def test_involution_is_multiplicative(fg):
    f, g = fg
    assert involute(f * g) == involute(f) * involute(g)


@given(fields.flatmap(lambda F: polys(F, nonzero=True)))
def test_involution_is_an_involution_off_t(f):
    assume(f.coeffs[0] != 0)
    assert involute(involute(f)) == f
    assert involute(f).degree == f.degree


def test_interval_membership():
    A = Poly(F3, (1, 2, 0, 1))
    members = list(interval(A, 1))
    assert len(members) == 9 and len(set(members)) == 9
    for f in members:
        d = (f - A).degree
        assert d is NEG_INF or d <= 1
    with pytest.raises(PolyError):
        list(interval(A, 3))


@given(fields.flatmap(lambda F: polys(F)))
def test_text_round_trip(f):
    assert parse_poly(to_text(f), f.field) == f
    assert parse_poly(to_text(f), f.field.tag) == f


def test_enumerators_are_consistent():
    mon = list(enumerate_monic(F3, 2))
    assert len(mon) == 9 and all(f.is_monic() and f.degree == 2 for f in mon)
    assert [f.monic_index() for f in mon] == list(range(9))
    irr = list(enumerate_irreducibles(F3, 2))
    assert {P.prime.monic_index() for P in irr} == set(irreducible_indices(F3, 2).tolist())


def test_ordering_is_total():
    ps = [Poly(F3, c) for c in itertools.product(range(3), repeat=3)]
    s = sorted(ps)
    for a, b in zip(s, s[1:]):
        assert a < b or a == b
