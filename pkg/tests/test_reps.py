import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from ffvar.gf import SquareClass, is_square, make_field
from ffvar.polyring import PlaceData, Poly, enumerate_irreducibles, enumerate_monic, involute, parse_poly
from ffvar.reps import (
    RepresentationError,
    check_purity,
    get_rep,
    lambda_table,
    lambda_table_sieve,
    legendre_rep,
    reflect,
    trivial_rep,
    von_mangoldt,
)

F3, F5, F7 = make_field(3), make_field(5), make_field(7)
CHI = {SquareClass.YES: 1, SquareClass.NO: -1, SquareClass.ZERO: 0}


def chi2(F, v):
    return CHI[is_square(F.element(v))]


def brute_trace(F, lam):
    """a(λ) = -Σ_x χ₂(x(x-1)(x-λ)) over the prime field F."""
    p = F.p
    return -sum(chi2(F, x * (x - 1) * (x - lam) % p) for x in range(p))


def place(F, text):
    return PlaceData(parse_poly(text, F))


def test_ramified_places_f5():
    rho = legendre_rep(F5)
    assert rho.ramified_places == {place(F5, "0,1"), place(F5, "4,1")}


def test_good_trace_known_values():
    rho = legendre_rep(F5)
    v = place(F5, "3,1")  # t - 2
    assert rho.local_trace(v, 1) == -2
    assert rho.local_trace(v, 2) == -6


@pytest.mark.parametrize("F", [F5, F7], ids=["q5", "q7"])
def test_degree_one_traces_match_point_counts(F):
    rho = legendre_rep(F)
    for lam in range(F.q):
        v = PlaceData(Poly(F, ((-lam) % F.p, 1)))
        assert rho.local_trace(v, 1) == brute_trace(F, lam)


@pytest.mark.parametrize("F", [F5, F7], ids=["q5", "q7"])
def test_bad_traces_are_multiplicative(F):
    rho = legendre_rep(F)
    for v in rho.ramified_places:
        a = rho.bad_trace(v, 1)
        assert a in (1, -1) and rho.local_dim(v) == 1
        assert [rho.local_trace(v, m) for m in range(1, 5)] == [a**m for m in range(1, 5)]
        with pytest.raises(RepresentationError):
            rho.good_trace(v, 1)
    with pytest.raises(RepresentationError):
        rho.bad_trace(place(F, "3,1"), 1)


def test_power_traces_follow_the_recurrence():
    rho = legendre_rep(F7)
    for v in enumerate_irreducibles(F7, 2):
        if v in rho.ramified_places:
            continue
        a1, qd = rho.local_trace(v, 1), v.residue_size
        assert a1 * a1 <= 4 * qd
        assert rho.local_trace(v, 2) == a1 * a1 - 2 * qd
        assert rho.local_trace(v, 3) == a1 * rho.local_trace(v, 2) - qd * a1


@pytest.mark.parametrize(
    "name,q,nmax",
    [("trivial", 3, 5), ("trivial", 4, 3), ("legendre", 5, 3), ("legendre*", 5, 3), ("legendre", 7, 2)],
)
def test_lambda_tables_three_routes(name, q, nmax):
    F = make_field(2, 2) if q == 4 else make_field(q)
    rho = get_rep(name, F)
    for n in range(1, nmax + 1):
        engine = lambda_table(rho, n)
        sieve = lambda_table_sieve(rho, n)
        brute = np.array([von_mangoldt(rho, f) for f in enumerate_monic(F, n)])
        assert np.array_equal(engine, sieve)
        assert np.array_equal(engine, brute)


def test_trivial_lambda_is_degree_of_prime():
    rho = trivial_rep(F3)
    assert von_mangoldt(rho, parse_poly("1,0,0,1", F3)) == 1  # (t+1)^3
    assert von_mangoldt(rho, parse_poly("1,0,1", F3)) == 2
    assert von_mangoldt(rho, parse_poly("2,0,1", F3)) == 0  # (t+1)(t+2)
    assert von_mangoldt(rho, parse_poly("2", F3)) == 0
    with pytest.raises(ValueError):
        von_mangoldt(rho, Poly.zero(F3))


@pytest.mark.parametrize("F", [F5, F7], ids=["q5", "q7"])
def test_reflected_local_data(F):
    rho = legendre_rep(F)
    star = reflect(rho)
    t = place(F, "0,1")
    for m in (1, 2, 3):
        assert star.local_trace(t, m) == rho.infinity_trace(m)
        assert star.infinity_trace(m) == rho.local_trace(t, m)
    for d in (1, 2):
        for v in enumerate_irreducibles(F, d):
            if v == t:
                continue
            P = involute(v.prime)
            w = PlaceData(P.scale(F.tables.inv[P.lc]))
            assert star.local_dim(v) == rho.local_dim(w)
            assert star.local_trace(v, 1) == rho.local_trace(w, 1)
    assert reflect(star) is rho


def test_infinity_sign():
    assert trivial_rep(F5).infinity_sign() == 1
    assert legendre_rep(F5).infinity_sign() == 1  # no invariants at infinity
    assert reflect(legendre_rep(F5)).infinity_sign() == 1
    assert reflect(legendre_rep(F7)).infinity_sign() == -1


@given(st.integers(1, 4), st.data())
def test_reversal_twists_legendre(n, data):
    # Λ(f*) = χ₂((-1)^n f(0)) Λ(f) for f(0) != 0
    rho = legendre_rep(F5)
    idx = data.draw(st.integers(0, 5**n - 1))
    f = Poly.from_monic_index(F5, n, idx)
    assume(f.coeffs[0] != 0)
    sign = chi2(F5, ((-1) ** n * f.coeffs[0]) % 5)
    assert von_mangoldt(rho, involute(f)) == sign * von_mangoldt(rho, f)


@given(st.integers(1, 5), st.data())
def test_reversal_preserves_trivial_lambda(n, data):
    rho = trivial_rep(F3)
    f = Poly.from_monic_index(F3, n, data.draw(st.integers(0, 3**n - 1)))
    assume(f.coeffs[0] != 0)
    assert von_mangoldt(rho, involute(f)) == von_mangoldt(rho, f)


@pytest.mark.parametrize("name", ["legendre", "legendre*"])
def test_purity(name):
    assert check_purity(get_rep(name, F5), 4) == []
    assert check_purity(get_rep(name, F7), 3) == []


def test_rep_errors():
    with pytest.raises(RepresentationError):
        legendre_rep(F3)
    with pytest.raises(RepresentationError):
        get_rep("sym2", F5)
    with pytest.raises(RepresentationError):
        trivial_rep(F5).local_trace(place(F5, "0,1"), 0)
