"""Short-interval sums of Λ_ρ, their mean and variance, and the q → ∞ table.

Every monic A of degree n lies in exactly one interval I(t^{h+1}B, h) with B
monic of degree n-h-1, and ν_ρ(A; h) only depends on that interval.  With
monic indices this is a reshape: row B, column = the low h+1 coefficients.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .chars import build_unit_group, character_sums, even_mask, residue_mul, residue_of
from .gf import FieldSpec, parse_field
from .lfunc import GOOD, analyze_all, degree_census, trace_from_theta, weight_table
from .polyring import Poly, interval
from .reps import Representation, get_rep, lambda_table, reflect, von_mangoldt
from .rmt import trace_moment

MAX_ENUMERATION = 10**7
SOFT_LIMIT_FACTOR = 0.35


class ExperimentError(ValueError):
    pass


def _check_interval(q: int, n: int, h: int):
    if not 0 <= h < n:
        raise ExperimentError(f"need n > h >= 0, got n={n}, h={h}")
    if q**n > MAX_ENUMERATION:
        raise ExperimentError(f"q^n = {q**n} exceeds the enumeration bound {MAX_ENUMERATION}")


# -- ν and Ψ̃ ------------------------------------------------------------------

@dataclass(frozen=True)
class ShortIntervalSum:
    A: Poly
    h: int
    value: int


def nu(rep: Representation, A: Poly, h: int) -> ShortIntervalSum:
    """Σ Λ_ρ(f) over f in I(A; h) with f(0) != 0, one factorization per f."""
    if A.degree is None or not isinstance(A.degree, int) or not 0 <= h < A.degree:
        raise ExperimentError("nu needs deg A > h >= 0")
    total = 0
    for f in interval(A, h):
        if f.coeffs[0] != 0:
            total += von_mangoldt(rep, f)
    return ShortIntervalSum(A, h, total)


def nu_table(rep: Representation, n: int, h: int) -> np.ndarray:
    """ν_ρ(t^{h+1}B; h) for every monic B of degree n-h-1, by monic index."""
    q = rep.field.q
    _check_interval(q, n, h)
    lam = lambda_table(rep, n).reshape(q ** (n - h - 1), q ** (h + 1))
    keep = np.arange(q ** (h + 1)) % q != 0
    return lam[:, keep].sum(axis=1)


def psi_tilde(rep: Representation, n: int, B_star: Poly, m: int) -> int:
    """Σ Λ_ρ(f) over all f of degree n (any leading coefficient) with f ≡ B* mod t^m.

    Λ_ρ(c g) = Λ_ρ(g), so the class of c·g is read off the monic g scaled by c.
    """
    if m < 1:
        raise ExperimentError("modulus exponent must be >= 1")
    F = rep.field
    q = F.q
    lam = lambda_table(rep, n)
    idx = np.arange(q**n, dtype=np.int64)
    res = idx % q**m if m <= n else idx + q**n
    target = residue_of(B_star, m)
    total = 0
    for c in range(1, q):
        hit = residue_mul(F, m, res, np.int64(c)) == target
        total += int(lam[hit].sum())
    return total


def fundamental_relation_check(rep: Representation, n: int, h: int, psi_rep: Representation | None = None):
    """Compare ν_ρ(t^{h+1}B; h) with Ψ̃(n; B*, t^{n-h}) for every monic B.

    ``psi_rep`` is the representation used on the residue-class side
    (default: ``rep`` itself).  Returns the list of (B index, ν, Ψ̃) mismatches.
    """
    psi_rep = psi_rep or rep
    F = rep.field
    d = n - h - 1
    table = nu_table(rep, n, h)
    bad = []
    for b in range(F.q**d):
        B = Poly.from_monic_index(F, d, b)
        Bs = Poly(F, tuple(reversed(B.coeffs)))
        val = psi_tilde(psi_rep, n, Bs, n - h)
        if val != int(table[b]):
            bad.append((b, int(table[b]), val))
    return bad


# -- expectation ----------------------------------------------------------------

@dataclass
class ExpectationReport:
    q: int
    n: int
    h: int
    rep: str
    definition: Fraction
    lemma: Fraction
    character: float

    @property
    def max_relative_gap(self) -> float:
        ref = max(abs(float(self.definition)), 1e-300)
        vals = (float(self.lemma), self.character)
        return max(abs(v - float(self.definition)) for v in vals) / ref if self.definition else max(map(abs, vals))

    def agree(self, tol: float = 1e-9) -> bool:
        return self.max_relative_gap <= tol


def expectation(rep: Representation, n: int, h: int) -> ExpectationReport:
    """E[ν_ρ(A; h)] three ways.

    definition: mean of ν over intervals (each interval carries q^{h+1} of
    the A's, so this is the mean over M_n); lemma: total of Λ_ρ over M_n
    minus Λ_ρ(t^n), over q^{n-h-1}; character: the trivial-character trace
    b_{ρ⊗φ_tr,n} from the residue table, over q^{n-h-1}.
    """
    F = rep.field
    q = F.q
    table = nu_table(rep, n, h)
    count = q ** (n - h - 1)
    definition = Fraction(int(table.sum()), count)
    t_n = Poly.monomial(F, n)
    lemma = Fraction(int(lambda_table(rep, n).sum()) - von_mangoldt(rep, t_n), count)
    m = n - h
    W = weight_table(rep, m, n)
    units = np.arange(q**m) % q != 0
    character = float(W[units].sum()) / count
    return ExpectationReport(q, n, h, rep.name, definition, lemma, character)


# -- variance -------------------------------------------------------------------

def _exact_variance(values: np.ndarray) -> tuple[Fraction, Fraction]:
    v = [int(x) for x in values]
    N = len(v)
    mean = Fraction(sum(v), N)
    second = Fraction(sum(x * x for x in v), N)
    return mean, second - mean * mean


@dataclass
class VarianceReport:
    q: int
    n: int
    h: int
    rep: str
    weight: int
    expectation: float | None = None
    variance: float | None = None
    variance_exact: Fraction | None = None
    normalized: float | None = None
    predicted: int | None = None
    char_rep: str | None = None
    char_route_variance: float | None = None
    identity_residual: float | None = None

    def identity_ok(self, tol_id: float = 1e-8) -> bool:
        if self.identity_residual is None:
            return False
        return self.identity_residual <= tol_id * max(1.0, self.variance)

    def to_record(self) -> dict:
        d = asdict(self)
        d["variance_exact"] = None if self.variance_exact is None else str(self.variance_exact)
        return d


def variance_direct(rep: Representation, n: int, h: int) -> VarianceReport:
    """(1/q^n) Σ_A |ν_ρ(A;h) - E|^2 as an exact rational, one term per interval."""
    q = rep.field.q
    mean, var = _exact_variance(nu_table(rep, n, h))
    w = rep.weight
    return VarianceReport(
        q, n, h, rep.name, w,
        expectation=float(mean),
        variance=float(var),
        variance_exact=var,
        normalized=float(var / Fraction(q) ** (n * w + h + 1)),
    )


def character_side_sum(rep: Representation, n: int, h: int) -> float:
    """q^{-2(n-h-1)} Σ |b_{ρ⊗φ,n}|^2 over even nontrivial φ mod t^{n-h}."""
    q = rep.field.q
    m = n - h
    tbl = build_unit_group(rep.field, m)
    b = character_sums(tbl, weight_table(rep, m, n))
    mask = even_mask(tbl).copy()
    mask[(0,) * len(tbl.orders)] = False
    return float(np.sum(np.abs(b[mask]) ** 2)) / q ** (2 * (m - 1))


def variance_via_characters(rep: Representation, n: int, h: int,
                            char_rep: Representation | None = None,
                            direct: VarianceReport | None = None,
                            with_prediction: bool = False) -> VarianceReport:
    """Variance from the even nontrivial character traces mod t^{n-h}.

    ``char_rep`` picks the representation whose traces are summed (default:
    ``rep``); pass ``reflect(rep)`` to use the reflected local data.  The
    residual is taken against ``direct`` (computed if not supplied).
    ``with_prediction`` also runs the degree census to fill ``predicted``.
    """
    _check_interval(rep.field.q, n, h)
    char_rep = char_rep or rep
    rpt = direct or variance_direct(rep, n, h)
    rpt.char_rep = char_rep.name
    rpt.char_route_variance = character_side_sum(char_rep, n, h)
    rpt.identity_residual = abs(rpt.variance - rpt.char_route_variance)
    if with_prediction and n - h >= 2:
        S = degree_census(char_rep, n - h).majority_S
        rpt.predicted = None if S is None else min(n, S)
    return rpt


# -- q → ∞ comparison ------------------------------------------------------------

@dataclass
class LimitRow:
    q: int
    normalized_variance: float
    good_trace_avg: float
    predicted: int | None
    rmt_mc: float
    rmt_stderr: float
    distance: float
    S_majority: int | None
    n_good: int
    n_bad: int
    good_sum_normalized: float
    bad_contribution: float
    error_term: float
    invariant_ok: bool
    remainder_bound: float
    decomposition_residual: float
    flags: dict = dc_field(default_factory=dict)


@dataclass
class LimitReport:
    rep: str
    char_rep: str
    n: int
    h: int
    samples: int
    seed: int
    rows: list

    CSV_COLUMNS = ("q", "normalized_variance", "good_trace_avg", "predicted", "rmt_mc")

    def to_record(self) -> dict:
        return {"rep": self.rep, "char_rep": self.char_rep, "n": self.n, "h": self.h,
                "samples": self.samples, "seed": self.seed,
                "rows": [asdict(r) for r in self.rows]}

    def soft_check(self, factor: float = SOFT_LIMIT_FACTOR) -> bool:
        last = self.rows[-1]
        return last.predicted is not None and last.distance <= factor * last.predicted


def limit_row(rep: Representation, n: int, h: int, samples: int = 20000, seed: int = 0,
              char_rep: Representation | None = None, workers: int = 1) -> LimitRow:
    F = rep.field
    q, w = F.q, rep.weight
    char_rep = char_rep or rep
    m = n - h
    direct = variance_direct(rep, n, h)
    results = analyze_all(char_rep, m)
    census = degree_census(char_rep, m, results=results)
    tbl = results[0][0].table
    b = character_sums(tbl, weight_table(char_rep, m, n))

    # for good φ, L = (1 - εT) Π(1 - γ_j T) with γ_j = q^((1+w)/2) e^{iθ_j},
    # so b_n = -(ε^n + q^(n(1+w)/2) Tr θ^n) exactly
    scale = q ** (n * (1 + w) / 2)
    norm = q ** (2 * n - h - 1 + n * w)
    good_tr, good_b, bad_b = [], [], []
    for chi, ld in results:
        if chi.is_trivial:
            continue
        if ld.classification == GOOD:
            tr = trace_from_theta(ld, n)
            good_tr.append(tr)
            good_b.append(abs(ld.epsilon**n + scale * tr) ** 2)
        else:
            bad_b.append(abs(b[chi.exponents]) ** 2)
    good_sq = np.abs(np.array(good_tr)) ** 2
    good_avg = float(np.mean(good_sq)) if good_tr else math.nan
    good_sum = float(np.sum(good_sq)) / q ** (n - h - 1)
    bad = float(np.sum(bad_b)) / norm
    err = 10 * q ** (h + 1 - n - n * (1 + w) / 2)
    ok = abs(direct.normalized - good_sum) <= bad + err
    remainder = float(np.sum(2 * scale * np.sqrt(good_sq) + 1)) / norm
    decomp = abs(direct.normalized - (float(np.sum(good_b)) / norm + bad))

    S = census.majority_S
    pred = None if S is None else min(n, S)
    if S:
        est = trace_moment(S, n, samples, seed, workers)
        mc, se = float(est.mean), est.stderr
    else:
        mc, se = (0.0, 0.0) if S == 0 else (math.nan, math.nan)
    dist = abs(direct.normalized - pred) if pred is not None else math.nan
    return LimitRow(q, direct.normalized, good_avg, pred, mc, se, dist, S,
                    len(good_tr), len(bad_b), good_sum, bad, err, bool(ok),
                    remainder, decomp, census.flags)


def limit_table(rep_name: str, n: int, h: int, q_list, samples: int = 20000, seed: int = 0,
                reflected: bool = True, workers: int = 1) -> LimitReport:
    """Normalized variance against min{n, S} for each q in ``q_list``.

    The character side uses the reflected representation by default; that
    is the one whose twisted traces reproduce the variance exactly.
    """
    if n - h < 5:
        raise ExperimentError("limit-table needs n - h >= 5 (equidistribution hypothesis)")
    rows = []
    char_name = rep_name
    for qq in q_list:
        F = qq if isinstance(qq, FieldSpec) else parse_field(str(qq))
        rep = get_rep(rep_name, F)
        cr = reflect(rep) if reflected else rep
        char_name = cr.name
        rows.append(limit_row(rep, n, h, samples, seed, cr, workers))
    return LimitReport(rep_name, char_name, n, h, samples, seed, rows)
