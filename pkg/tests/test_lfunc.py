import numpy as np
import pytest
from hypothesis import given, strategies as st

from ffvar.chars import DirichletCharacter, build_unit_group, enumerate_characters
from ffvar.gf import SquareClass, is_square, make_field
from ffvar.lfunc import (
    GOOD,
    HEAVY,
    MIXED,
    TraceSeries,
    all_traces,
    analyze,
    analyze_all,
    classify,
    clear_weight_cache,
    default_bound,
    degree_census,
    max_degree,
    predicted_limit,
    reconstruct_L,
    reconstruct_coefficients,
    trace_direct,
    trace_from_theta,
    trace_series,
    unitarize,
    weight_table,
)
from ffvar.reps import get_rep, lambda_table, legendre_rep, trivial_rep

F3, F5, F7, F9 = make_field(3), make_field(5), make_field(7), make_field(3, 2)


@pytest.fixture(scope="module")
def trivial_q3_m5():
    return analyze_all(trivial_rep(F3), 5)


@pytest.fixture(scope="module")
def legendre_star_q5_m3():
    return analyze_all(get_rep("legendre*", F5), 3, D=8)


def test_newton_identities():
    q = 5
    c = reconstruct_coefficients([q**n - 1 for n in range(1, 8)])
    assert np.allclose(c, [1] + [q ** (j - 1) * (q - 1) for j in range(1, 8)])
    assert np.allclose(reconstruct_coefficients(np.zeros(5)), [1, 0, 0, 0, 0, 0])


@given(st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False), min_size=1, max_size=5))
def test_newton_round_trip(roots):
    g = np.array(roots)
    b = [-np.sum(g**n) for n in range(1, len(g) + 3)]
    c = reconstruct_coefficients(b)
    expect = np.poly(g)  # Π(1 - γT) has coefficients of Π(x - γ)
    assert np.allclose(c[: len(g) + 1], expect, atol=1e-6 * max(1, np.max(np.abs(expect))))
    assert np.allclose(c[len(g) + 1:], 0, atol=1e-6 * max(1, np.max(np.abs(expect))))


@pytest.mark.parametrize("name,F,m,nmax", [("trivial", F3, 3, 4), ("legendre", F5, 2, 3), ("legendre*", F5, 2, 2)])
def test_trace_routes_agree(name, F, m, nmax):
    rho = get_rep(name, F)
    tbl = build_unit_group(F, m)
    B = all_traces(rho, tbl, nmax)
    for chi in enumerate_characters(tbl):
        ts = trace_series(rho, chi, nmax)
        for n in range(1, nmax + 1):
            brute = trace_direct(rho, chi, n, brute=True)
            assert abs(ts.b[n - 1] - brute) < 1e-8
            assert abs(trace_direct(rho, chi, n) - brute) < 1e-8
            assert abs(B[(n - 1,) + chi.exponents] - brute) < 1e-8


def test_legendre_b1_from_point_counts():
    # b_1(χ) = Σ_λ χ(t - λ) a(λ), with a(λ) from counting points directly
    F = F7
    chi2 = {SquareClass.YES: 1, SquareClass.NO: -1, SquareClass.ZERO: 0}
    a = [-sum(chi2[is_square(F.element(x * (x - 1) * (x - lam) % 7))] for x in range(7)) for lam in range(7)]
    tbl = build_unit_group(F, 2)
    rho = legendre_rep(F)
    for chi in enumerate_characters(tbl):
        expect = sum(chi.values[(-lam) % 7 + 7] * a[lam] for lam in range(7))
        assert abs(trace_series(rho, chi, 1).b[0] - expect) < 1e-9


def test_trivial_character_is_heavy():
    tbl = build_unit_group(F3, 2)
    ld = analyze(trivial_rep(F3), DirichletCharacter(tbl, (0,) * len(tbl.orders)))
    assert ld.classification == HEAVY


def test_census_trivial_q3_m5(trivial_q3_m5):
    c = degree_census(trivial_rep(F3), 5, results=trivial_q3_m5)
    assert c.S_hist == {0: 2, 1: 6, 2: 18, 3: 54}
    assert c.majority_S == 3
    assert c.trivial_class == HEAVY and len(c.heavy) == 1 and c.mixed == []


def test_census_trivial_q3_m2():
    c = degree_census(trivial_rep(F3), 2)
    assert c.S_hist == {0: 2} and c.majority_S == 0


def test_census_reflected_legendre(legendre_star_q5_m3):
    c = degree_census(get_rep("legendre*", F5), 3, results=legendre_star_q5_m3)
    assert c.majority_S == 4
    assert c.mixed == []


@pytest.mark.parametrize("F,sign", [(F5, 1), (F7, -1)], ids=["q5", "q7"])
def test_literal_legendre_lacks_trivial_zero(F, sign):
    # χ₂(-1) = sign, and L(T, ρ ⊗ φ_tr) = 1 - χ₂(-1) T
    rho = legendre_rep(F)
    results = analyze_all(rho, 2, D=6)
    chi0, ld0 = results[0]
    assert chi0.is_trivial
    assert np.allclose(ld0.coefficients, [1, -sign, 0, 0, 0, 0, 0], atol=1e-8)
    for chi, ld in results[1:]:
        assert ld.classification == MIXED and "no_trivial_zero" in ld.flags


def _good(results):
    return [ld for chi, ld in results if not chi.is_trivial and ld.classification == GOOD]


@pytest.mark.parametrize("which", ["trivial", "legendre*"])
def test_traces_from_eigenphases(which, trivial_q3_m5, legendre_star_q5_m3):
    rho, results = (
        (trivial_rep(F3), trivial_q3_m5) if which == "trivial" else (get_rep("legendre*", F5), legendre_star_q5_m3)
    )
    q, w, eps = rho.field.q, rho.weight, rho.infinity_sign()
    for chi, ld in results:
        if chi.is_trivial or ld.classification != GOOD:
            continue
        b = trace_series(rho, chi, ld.D).b
        assert trace_from_theta(ld, 0) == ld.S
        for n in range(1, ld.D + 1):
            tr = trace_from_theta(ld, n)
            assert abs(tr) <= ld.S + 1e-9
            assert abs(b[n - 1] + eps**n + q ** (n * (1 + w) / 2) * tr) < 1e-6 * q ** (n * (1 + w) / 2)


def test_conjugate_character_conjugates_L(trivial_q3_m5):
    rho = trivial_rep(F3)
    for chi, ld in trivial_q3_m5[:10]:
        other = analyze(rho, chi.conjugate())
        assert np.allclose(other.coefficients, np.conj(ld.coefficients))
        assert other.classification == ld.classification


def test_repeated_root_is_merged():
    # L = (1 - T)(1 + 3T)^3 at q = 9, weight 0: a triple root on the circle
    q = 9
    b = np.array([-(1 + 3 * (-3.0) ** n) for n in range(1, 9)])
    ld = reconstruct_L(TraceSeries("trivial", "synthetic", b, 8), 0, q, 5)
    assert classify(ld) == GOOD
    assert ld.S == 3 and "repeated_root" in ld.flags
    assert np.allclose(np.abs(ld.eigenphases), np.pi)


def test_mixed_purity_is_reported():
    # (1 - T)(1 - 2T) at q = 9: |2| / 3 != 1
    b = np.array([-(1 + 2.0**n) for n in range(1, 7)])
    ld = reconstruct_L(TraceSeries("trivial", "synthetic", b, 6), 0, 9, 3)
    assert classify(ld) == MIXED
    with pytest.raises(ValueError):
        unitarize(ld)


def test_heavy_set_is_trivial_only():
    results = analyze_all(trivial_rep(F3), 4)
    heavy = [chi for chi, ld in results if ld.classification == HEAVY]
    assert len(heavy) == 1 and heavy[0].is_trivial


def test_reflected_legendre_sign_at_q7():
    rho = get_rep("legendre*", F7)
    results = analyze_all(rho, 2, D=6)
    assert all(ld.epsilon == -1 for _, ld in results)
    assert all(ld.classification == GOOD and ld.S == 2 for chi, ld in results if not chi.is_trivial)


def test_weight_table_fold_invariance():
    rho = trivial_rep(F3)
    n = 6
    lam = lambda_table(rho, n)
    idx = np.arange(3**n)
    clear_weight_cache()
    small = weight_table(rho, 2, n)
    big = weight_table(rho, 7, n)
    again = weight_table(rho, 2, n)
    assert np.array_equal(small, again)
    assert np.array_equal(small, np.bincount(idx % 9, weights=lam, minlength=9))
    assert np.array_equal(big[: 3**7], np.bincount(idx + 3**n, weights=lam, minlength=3**7))


def test_bounds():
    assert [max_degree(q) for q in (3, 5, 7, 9)] == [15, 10, 9, 7]
    assert default_bound(trivial_rep(F3), 5) == 9
    assert default_bound(legendre_rep(F5), 5) == 10
    assert predicted_limit(7, 3) == 3 and predicted_limit(2, 3) == 2 and predicted_limit(7, None) is None
    with pytest.raises(ValueError):
        trace_series(trivial_rep(F3), DirichletCharacter(build_unit_group(F3, 2), (0,)), 0)
