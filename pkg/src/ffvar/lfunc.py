"""Twisted L-functions L_Q(T, ρ⊗χ) for Q = t^m and their classification.

Traces b_n(χ) = Σ_{f ∈ M_n} χ(f) Λ_ρ(f) are computed from residue-class
weight tables W_n[r] = Σ_{f ≡ r mod t^m} Λ_ρ(f), so one table serves every
character.  The polynomial is rebuilt from T d/dT log L = Σ b_n T^n, then
split as (1 - T) M(T) and M is tested for purity.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field as dc_field

import numpy as np

from .chars import (
    DirichletCharacter,
    UnitGroupTable,
    build_unit_group,
    character_sums,
    even_mask,
    residue_of,
)
from .frobenius import MAX_EXTENSION_ORDER, get_extension
from .polyring import enumerate_monic
from .reps import Representation, lambda_table, von_mangoldt

TOL_RH = 1e-6
GUARD = 4
WEIGHT_MODULUS = 5  # residues are tabulated mod t^5 unless more is asked

GOOD, MIXED, HEAVY = "good", "mixed", "heavy"


# -- weight tables ------------------------------------------------------------

_WEIGHTS: dict = {}


def weight_table(rep: Representation, m: int, n: int) -> np.ndarray:
    """W_n[r] for every residue r mod t^m (int64, length q^m).

    Residues are computed once per (rep, n) at a common modulus and folded
    down for smaller m.  Since deg f = n, a modulus above t^(n+1) adds
    nothing and the table is zero-padded instead.
    """
    q = rep.field.q
    key = (id(rep), n)
    hit = _WEIGHTS.get(key)
    if hit is None or hit[0] < min(m, n + 1):
        M = min(max(m, WEIGHT_MODULUS), n + 1)
        ext = get_extension(rep.field, n)
        res = ext.charpoly_residues(M)
        W = np.rint(np.bincount(res, weights=rep.orbit_traces(ext), minlength=q**M)).astype(np.int64)
        hit = _WEIGHTS[key] = (M, W, rep)  # keep rep alive so id() stays unique
    M, W, _ = hit
    if m == M:
        return W
    if m > M:
        return np.concatenate([W, np.zeros(q**m - q**M, dtype=np.int64)])
    return np.bincount(np.arange(q**M) % q**m, weights=W, minlength=q**m).astype(np.int64)


def clear_weight_cache():
    _WEIGHTS.clear()


def max_degree(q: int) -> int:
    """Largest n with q^n inside the extension-field budget."""
    n = 1
    while q ** (n + 1) <= MAX_EXTENSION_ORDER:
        n += 1
    return n


def default_bound(rep: Representation, m: int) -> int:
    """D = m*dim + guard, capped by what the extension engine can hold."""
    return min(m * rep.dim + GUARD, max_degree(rep.field.q))


# -- traces -------------------------------------------------------------------

@dataclass
class TraceSeries:
    rep: str
    character: str
    b: np.ndarray  # b[0] is b_1
    D: int


def trace_series(rep: Representation, chi: DirichletCharacter, D: int) -> TraceSeries:
    if D < 1:
        raise ValueError("D must be >= 1")
    m = chi.table.modulus_exponent
    vals = chi.values
    b = np.array([np.dot(vals, weight_table(rep, m, n)) for n in range(1, D + 1)])
    return TraceSeries(rep.name, chi.to_text(), b, D)


def all_traces(rep: Representation, tbl: UnitGroupTable, D: int) -> np.ndarray:
    """b_n(χ_e) for n = 1..D and every exponent vector e: shape (D, *orders)."""
    m = tbl.modulus_exponent
    return np.stack([character_sums(tbl, weight_table(rep, m, n)) for n in range(1, D + 1)])


def trace_direct(rep: Representation, chi: DirichletCharacter, n: int, brute: bool = False) -> complex:
    """Σ_{f ∈ M_n} χ(f) Λ_ρ(f) by running over every monic f.

    ``brute`` factors each f; otherwise Λ comes from :func:`lambda_table`.
    """
    m = chi.table.modulus_exponent
    q = rep.field.q
    vals = chi.values
    if brute:
        total = 0j
        for f in enumerate_monic(rep.field, n):
            c = vals[residue_of(f, m)]
            if c != 0:
                total += c * von_mangoldt(rep, f)
        return total
    lam = lambda_table(rep, n)
    idx = np.arange(q**n, dtype=np.int64)
    res = idx % q**m if m <= n else idx + q**n
    return complex(np.dot(vals[res], lam))


# -- reconstruction and classification ----------------------------------------

def reconstruct_coefficients(b) -> np.ndarray:
    """Coefficients c_0..c_D of L with T L'/L = Σ b_n T^n.

    j c_j = Σ_{i=1..j} b_i c_{j-i}; the sign is the one giving
    (1 - T)/(1 - qT) from b_n = q^n - 1.
    """
    b = np.asarray(b, dtype=np.complex128)
    c = np.zeros(len(b) + 1, dtype=np.complex128)
    c[0] = 1
    for j in range(1, len(b) + 1):
        c[j] = np.dot(b[:j], c[j - 1::-1]) / j
    return c


@dataclass
class LData:
    character: str
    weight: int
    q: int
    D: int
    degree_bound: int
    coefficients: np.ndarray
    tol_coeff: float
    classification: str = ""
    M_coeffs: np.ndarray | None = None
    S: int | None = None
    eigenphases: np.ndarray | None = None
    residuals: dict = dc_field(default_factory=dict)
    flags: list = dc_field(default_factory=list)
    epsilon: int = 1  # trivial factor is (1 - epsilon T)

    def to_record(self) -> dict:
        pair = lambda z: [float(z.real), float(z.imag)]  # noqa: E731
        return {
            "char": self.character,
            "classification": self.classification,
            "S": self.S,
            "coefficients": [pair(z) for z in self.coefficients],
            "eigenphases": None if self.eigenphases is None else [float(x) for x in self.eigenphases],
            "residuals": self.residuals,
            "flags": list(self.flags),
        }


def reconstruct_L(ts: TraceSeries, weight: int, q: int, degree_bound: int, epsilon: int = 1) -> LData:
    b = np.asarray(ts.b)
    scale = max((abs(x) / (i + 1) for i, x in enumerate(b)), default=0.0)
    tol = 1e-6 * max(scale, 1.0)
    c = reconstruct_coefficients(b)
    return LData(ts.character, weight, q, ts.D, degree_bound, c, tol, epsilon=epsilon)


def _trim(c, tol):
    k = len(c)
    while k > 1 and abs(c[k - 1]) <= tol:
        k -= 1
    return c[:k]


def classify(ld: LData, tol_rh: float = TOL_RH) -> str:
    """good / mixed / heavy, filling M, S, eigenphases and flags."""
    c = ld.coefficients
    window = c[ld.degree_bound + 1:]
    if len(window) == 0:
        ld.flags.append("unguarded")
    elif np.max(np.abs(window)) > ld.tol_coeff:
        ld.classification = HEAVY
        ld.residuals["guard_max"] = float(np.max(np.abs(window)))
        return HEAVY
    L = _trim(c[: ld.degree_bound + 1], ld.tol_coeff)
    eps = ld.epsilon
    sign = eps ** np.arange(len(L))
    remainder = complex(np.sum(L * sign))  # L(ε)
    ld.residuals["trivial_zero"] = abs(remainder)
    if abs(remainder) > ld.tol_coeff:
        ld.flags.append("no_trivial_zero")
        ld.classification = MIXED
        return MIXED
    # L / (1 - εT): M_j = ε^j Σ_{i<=j} ε^i L_i
    M = (sign * np.cumsum(L * sign))[:-1] if len(L) > 1 else np.ones(1, dtype=complex)
    M = _trim(M, ld.tol_coeff)
    ld.M_coeffs = M
    ld.S = len(M) - 1
    if ld.S == 0:
        ld.eigenphases = np.zeros(0)
        ld.residuals["rh"] = 0.0
        ld.classification = GOOD
        return GOOD
    norm = ld.q ** ((1 + ld.weight) / 2)
    z = _unit_roots(M, norm, ld)
    mods = np.abs(z)  # |γ| / q^((1+w)/2)
    dev = float(np.max(np.abs(mods - 1)))
    ld.residuals["rh"] = dev
    if dev <= tol_rh:
        ld.eigenphases = np.sort(np.angle(z))
        ld.classification = GOOD
        return GOOD
    if np.min(mods) > ld.q ** -0.25 and np.max(mods) < ld.q**0.25:
        ld.flags.append("borderline")
    ld.classification = MIXED
    return MIXED


def _unit_roots(M, norm, ld: LData) -> np.ndarray:
    """Normalized inverse roots γ/q^((1+w)/2) of M, polished by Newton."""
    S = len(M) - 1
    # P(u) = Σ M_j norm^-j u^j has roots u = 1/(normalized γ)
    P = M / norm ** np.arange(S + 1)
    roots = np.roots(P[::-1])
    dP = np.polyder(P[::-1])
    for _ in range(3):
        step = np.polyval(P[::-1], roots) / np.polyval(dP, roots)
        roots = roots - np.where(np.isfinite(step), step, 0)
    resid = np.abs(np.polyval(P[::-1], roots)) / np.max(np.abs(P))
    ld.residuals["root_residual"] = float(np.max(resid)) if len(resid) else 0.0
    if len(resid) and np.max(resid) > 1e-8:
        raise ArithmeticError(
            f"root finder residual {np.max(resid):.3g} above 1e-8 for character {ld.character}"
        )
    merged = _merge_clusters(roots, P)
    if merged is not None:
        ld.flags.append("repeated_root")
        roots = merged
    return 1 / roots


def _merge_clusters(roots, P, radius=1e-3, tol=1e-9):
    """Replace clusters of nearby roots by one multiple root.

    A k-fold root comes back from the eigenvalue solver spread over a
    circle of radius ~eps^(1/k).  It is a simple root of the (k-1)-th
    derivative, so the cluster centroid is polished by Newton there.  The
    merge is kept only if the rebuilt polynomial matches P to ``tol``.
    """
    hi = P[::-1]
    left = list(range(len(roots)))
    out, merged = np.empty_like(roots), False
    while left:
        i = left[0]
        grp = [j for j in left if abs(roots[j] - roots[i]) <= radius * max(1.0, abs(roots[i]))]
        x = np.mean(roots[grp])
        if len(grp) > 1:
            merged = True
            D = np.polyder(hi, len(grp) - 1)
            dD = np.polyder(D)
            for _ in range(5):
                den = np.polyval(dD, x)
                if den == 0:
                    break
                x = x - np.polyval(D, x) / den
        out[grp] = x
        left = [j for j in left if j not in grp]
    if not merged:
        return None
    mono = hi / hi[0]
    err = np.max(np.abs(np.poly(out) - mono)) / max(1.0, np.max(np.abs(mono)))
    return out if err <= tol else None


def unitarize(ld: LData) -> np.ndarray:
    """Eigenphases of the unitarized Frobenius (good characters only)."""
    if ld.classification != GOOD:
        raise ValueError(f"character {ld.character} is {ld.classification or 'unclassified'}, not good")
    return ld.eigenphases


def trace_from_theta(ld: LData, n: int) -> complex:
    """Tr(θ^n) from the eigenphases."""
    th = unitarize(ld)
    return complex(np.sum(np.exp(1j * n * th))) if len(th) else 0j


# -- drivers ------------------------------------------------------------------

def analyze(rep: Representation, chi: DirichletCharacter, D: int | None = None, tol_rh=TOL_RH) -> LData:
    m = chi.table.modulus_exponent
    D = D or default_bound(rep, m)
    ts = trace_series(rep, chi, D)
    ld = reconstruct_L(ts, rep.weight, rep.field.q, m * rep.dim, _epsilon(rep, chi))
    classify(ld, tol_rh)
    return ld


def _epsilon(rep: Representation, chi: DirichletCharacter) -> int:
    return rep.infinity_sign() if chi.even else 1


def analyze_all(rep: Representation, m: int, D: int | None = None, even_only=True, tol_rh=TOL_RH):
    """LData for every (even) character mod t^m, trivial character first."""
    tbl = build_unit_group(rep.field, m)
    D = D or default_bound(rep, m)
    B = all_traces(rep, tbl, D)
    mask = even_mask(tbl) if even_only else np.ones(tbl.orders, dtype=bool)
    out = []
    for e in zip(*np.nonzero(mask)):
        chi = DirichletCharacter(tbl, tuple(int(x) for x in e))
        ts = TraceSeries(rep.name, chi.to_text(), B[(slice(None),) + tuple(e)], D)
        ld = reconstruct_L(ts, rep.weight, rep.field.q, m * rep.dim, _epsilon(rep, chi))
        classify(ld, tol_rh)
        out.append((chi, ld))
    return out


@dataclass
class Census:
    rep: str
    q: int
    m: int
    D: int
    S_hist: dict
    majority_S: int | None
    counts: dict
    trivial_class: str
    heavy: list
    mixed: list
    flags: dict


def degree_census(rep: Representation, m: int, D: int | None = None, results=None) -> Census:
    results = results if results is not None else analyze_all(rep, m, D)
    D = results[0][1].D
    hist, counts, flags = Counter(), Counter(), Counter()
    heavy, mixed = [], []
    triv = ""
    for chi, ld in results:
        counts[ld.classification] += 1
        for f in ld.flags:
            flags[f] += 1
        if chi.is_trivial:
            triv = ld.classification
        if ld.classification == HEAVY:
            heavy.append(chi.to_text())
        elif ld.classification == MIXED:
            mixed.append(chi.to_text())
        elif not chi.is_trivial:
            hist[ld.S] += 1
    majority = max(hist, key=lambda s: (hist[s], s)) if hist else None
    return Census(rep.name, rep.field.q, m, D, dict(sorted(hist.items())), majority,
                  dict(counts), triv, heavy, mixed, dict(flags))


def predicted_limit(n: int, S: int | None) -> int | None:
    return None if S is None else min(n, S)


def rh_bound(ld: LData) -> float:
    return ld.residuals.get("rh", math.nan)
