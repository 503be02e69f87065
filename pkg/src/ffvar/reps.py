"""Galois representations through their local data, and Λ_ρ.

A representation is described by what the von Mangoldt function needs:
rank, q-weight, the ramified finite places, and the trace of the m-th power
of Frobenius on inertia invariants at each place.  Two are shipped: the
trivial representation and the rank-2 representation attached to the
Legendre curve y^2 = x(x-1)(x-t).  :func:`reflect` builds the
representation whose local data at P is the data of the original at the
reversed polynomial P*, which turns short-interval sums into residue-class
sums for the character route.
"""

from __future__ import annotations

import math
import threading
from functools import lru_cache

import numpy as np

from .frobenius import ExtensionField, get_extension
from .gf import FieldSpec
from .polyring import (
    NEG_INF,
    PlaceData,
    Poly,
    factorize,
    involute,
    irreducible_indices,
    prime_power_form,
)


class RepresentationError(ValueError):
    pass


class Representation:
    """Base class.  Subclasses implement ``_trace`` (and optionally
    ``_ramified_dim``, ``infinity_trace`` and ``orbit_traces``)."""

    name = "abstract"
    dim = 1
    weight = 0
    infinity_dim = 1  # dimension of the inertia invariants at infinity

    def __init__(self, field: FieldSpec, ramified=()):
        self.field = field
        self.ramified_places = frozenset(ramified)
        self._cache = {}
        self._lock = threading.Lock()

    def __repr__(self):
        return f"{type(self).__name__}(F_{self.field.q})"

    def local_dim(self, v: PlaceData) -> int:
        return self._ramified_dim(v) if v in self.ramified_places else self.dim

    def _ramified_dim(self, v: PlaceData) -> int:
        raise NotImplementedError

    def local_trace(self, v: PlaceData, m: int) -> int:
        """Trace of Frob_v^m on the inertia invariants at v (memoized)."""
        if m < 1:
            raise RepresentationError("exponent m must be >= 1")
        key = (v, m)
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        val = self._trace(v, m)
        with self._lock:
            self._cache[key] = val
        return val

    def _trace(self, v: PlaceData, m: int) -> int:
        raise NotImplementedError

    def infinity_trace(self, m: int) -> int:
        """Trace of Frob_∞^m on the inertia invariants at infinity."""
        raise NotImplementedError

    def infinity_sign(self) -> int:
        """ε in the trivial factor (1 - εT) of L(T, ρ⊗φ) for even φ.

        With one-dimensional inertia invariants at infinity this is the
        Frobenius eigenvalue there; otherwise the factor is taken as (1 - T).
        """
        return self.infinity_trace(1) if self.infinity_dim == 1 else 1

    def orbit_traces(self, ext: ExtensionField) -> np.ndarray:
        """a_n(λ) for every λ ∈ F_{q^n} (n = ext.n), indexed by element.

        For λ of degree d over F_q with minimal polynomial P this is
        ``local_trace(P, n/d)``.  The generic version factors each distinct
        characteristic polynomial; subclasses override it with closed forms.
        """
        n = ext.n
        cp = ext.charpoly_index
        out = np.zeros(ext.Q, dtype=np.int64)
        for idx in np.unique(cp):
            f = Poly.from_monic_index(self.field, n, int(idx))
            _, place, e = prime_power_form(f)
            out[cp == idx] = self.local_trace(place, e)
        return out


class TrivialRep(Representation):
    name = "trivial"
    dim = 1
    weight = 0

    def _trace(self, v, m):
        return 1

    def infinity_trace(self, m):
        return 1

    def orbit_traces(self, ext):
        return np.ones(ext.Q, dtype=np.int64)


def _legendre_discriminant(field: FieldSpec) -> Poly:
    # 16 t^2 (t-1)^2 for y^2 = x(x-1)(x-t)
    t = Poly.t(field)
    tm1 = t - Poly.one(field)
    sixteen = 16 % field.p
    return (t * t * tm1 * tm1).scale(field.from_vec([sixteen]))


def legendre_point_count(ext: ExtensionField, lam: int) -> int:
    """#E(F_{q^n}) for y^2 = x(x-1)(x-λ), projective, by counting x."""
    x = np.arange(ext.Q, dtype=np.int64)
    rhs = ext.mul(ext.mul(x, ext.minus_one(x)), ext.sub(x, np.full_like(x, lam)))
    chi = ext.quadratic_character[rhs].astype(np.int64)
    return 1 + int(np.sum(1 + chi))


def nonsingular_point_count(ext: ExtensionField, lam: int) -> int:
    """Points of y^2 = x(x-1)(x-λ) over F_{q^n} that are smooth (λ ∈ {0, 1}).

    The only singular point is (λ, 0); it is removed from the full count.
    """
    return legendre_point_count(ext, lam) - 1


class LegendreRep(Representation):
    """Tate module of E: y^2 = x(x-1)(x-t) over F_q(t)."""

    name = "legendre"
    dim = 2
    weight = 1
    infinity_dim = 0

    def __init__(self, field: FieldSpec):
        if field.p <= 3:
            raise RepresentationError("the Legendre representation needs characteristic > 3")
        disc = _legendre_discriminant(field)
        ram = [pl for pl, _ in factorize(disc).factors]
        super().__init__(field, ram)

    def _ramified_dim(self, v):
        return 1  # multiplicative reduction at t and t-1

    def _root(self, v: PlaceData):
        ext = get_extension(self.field, v.degree)
        return ext, ext.root_of(v.prime)

    def good_trace(self, v: PlaceData, m: int) -> int:
        if v in self.ramified_places:
            raise RepresentationError(f"{v} is a place of bad reduction")
        ext, lam = self._root(v)
        qd = v.residue_size
        a1 = qd + 1 - legendre_point_count(ext, lam)
        if a1 * a1 > 4 * qd:
            raise ArithmeticError(f"Hasse bound violated at {v}: a = {a1}")
        s_prev, s = 2, a1
        for _ in range(m - 1):
            s_prev, s = s, a1 * s - qd * s_prev
        return s

    def bad_trace(self, v: PlaceData, m: int) -> int:
        if v not in self.ramified_places:
            raise RepresentationError(f"{v} is a place of good reduction")
        ext, lam = self._root(v)
        a1 = v.residue_size - nonsingular_point_count(ext, lam)
        if a1 not in (1, -1):
            raise ArithmeticError(f"expected multiplicative reduction at {v}, got a = {a1}")
        return a1**m

    def _trace(self, v, m):
        return self.bad_trace(v, m) if v in self.ramified_places else self.good_trace(v, m)

    def infinity_trace(self, m):
        return 0  # additive reduction at infinity: no inertia invariants

    def orbit_traces(self, ext):
        # the point-count formula covers t and t-1 too: there it returns the
        # multiplicative-reduction trace
        return ext.legendre_traces()


class ReflectedRep(Representation):
    """Local data of ``base`` transported by P -> monic(P*).

    The place t plays the role of infinity of ``base``; infinity plays the
    role of t.
    """

    def __init__(self, base: Representation):
        self.base = base
        self.name = f"{base.name}*"
        self.dim = base.dim
        self.weight = base.weight
        F = base.field
        t_place = PlaceData(Poly.t(F))
        ram = {_reflect_place(v) for v in base.ramified_places if v != t_place}
        if base.infinity_dim != base.dim:
            ram.add(t_place)
        super().__init__(F, ram)
        self._t_place = t_place
        self.infinity_dim = base.local_dim(t_place)

    def _ramified_dim(self, v):
        if v == self._t_place:
            return self.base.infinity_dim
        return self.base.local_dim(_reflect_place(v))

    def _trace(self, v, m):
        if v == self._t_place:
            return self.base.infinity_trace(m)
        return self.base.local_trace(_reflect_place(v), m)

    def infinity_trace(self, m):
        return self.base.local_trace(self._t_place, m)

    def orbit_traces(self, ext):
        a = self.base.orbit_traces(ext)[ext.inverse_index()]
        a[0] = self.base.infinity_trace(ext.n)
        return a


def _reflect_place(v: PlaceData) -> PlaceData:
    P = involute(v.prime)
    return PlaceData(P.scale(P.field.tables.inv[P.lc]))


@lru_cache(maxsize=None)
def trivial_rep(field: FieldSpec) -> TrivialRep:
    return TrivialRep(field)


@lru_cache(maxsize=None)
def legendre_rep(field: FieldSpec) -> LegendreRep:
    return LegendreRep(field)


@lru_cache(maxsize=None)
def reflect(rep: Representation) -> Representation:
    if isinstance(rep, ReflectedRep):
        return rep.base
    return ReflectedRep(rep)


REPS = {"trivial": trivial_rep, "legendre": legendre_rep}


def get_rep(name: str, field: FieldSpec) -> Representation:
    """Look up a representation by CLI name; a trailing ``*`` reflects it."""
    base = name.rstrip("*")
    if base not in REPS:
        raise RepresentationError(f"unknown representation {name!r}")
    rep = REPS[base](field)
    return reflect(rep) if name.endswith("*") else rep


# -- von Mangoldt -------------------------------------------------------------

def von_mangoldt(rep: Representation, f: Poly) -> int:
    """deg(P) * a_{P,m} if f = c P^m, else 0."""
    if f.is_zero():
        raise ValueError("Λ is not defined at 0")
    form = prime_power_form(f) if f.degree is not NEG_INF and f.degree >= 1 else None
    if form is None:
        return 0
    _, place, m = form
    return place.degree * rep.local_trace(place, m)


def lambda_table(rep: Representation, n: int) -> np.ndarray:
    """Λ_ρ on all of M_n, indexed by monic index, via the extension engine."""
    if n == 0:
        return np.zeros(1, dtype=np.int64)
    ext = get_extension(rep.field, n)
    w = rep.orbit_traces(ext)
    tab = np.bincount(ext.charpoly_index, weights=w, minlength=ext.Q)
    return np.rint(tab).astype(np.int64)


def _rowwise_mul(tb, A, B):
    out = np.zeros((A.shape[0], A.shape[1] + B.shape[1] - 1), dtype=np.int64)
    for i in range(A.shape[1]):
        for j in range(B.shape[1]):
            out[:, i + j] = tb.np_add[out[:, i + j], tb.np_mul[A[:, i], B[:, j]]]
    return out


def lambda_table_sieve(rep: Representation, n: int) -> np.ndarray:
    """Λ_ρ on M_n from sieved irreducibles and their powers.

    Independent of the extension engine; the trivial representation is
    vectorized, others call ``local_trace`` once per place.
    """
    F = rep.field
    q = F.q
    tb = F.tables
    tab = np.zeros(q**n, dtype=np.int64)
    weights = q ** np.arange(n, dtype=np.int64)
    for d in range(1, n + 1):
        if n % d:
            continue
        e = n // d
        idx = irreducible_indices(F, d)
        P = np.stack([(idx // q**i) % q for i in range(d)] + [np.ones_like(idx)], axis=1)
        Pe = P
        for _ in range(e - 1):
            Pe = _rowwise_mul(tb, Pe, P)
        target = Pe[:, :n] @ weights
        if isinstance(rep, TrivialRep):
            tab[target] += d
        else:
            for i, tgt in zip(idx, target):
                place = PlaceData(Poly.from_monic_index(F, d, int(i)))
                tab[tgt] += d * rep.local_trace(place, e)
    return tab


def check_purity(rep: Representation, max_degree: int) -> list[tuple[PlaceData, int]]:
    """Places of degree <= max_degree violating |a_{v,1}| <= dim_v q^{d w/2}."""
    bad = []
    for d in range(1, max_degree + 1):
        ext = get_extension(rep.field, d)
        a = rep.orbit_traces(ext)
        idx, first = np.unique(ext.charpoly_index, return_index=True)
        irr = set(irreducible_indices(rep.field, d).tolist())
        for i, lam in zip(idx.tolist(), first.tolist()):
            if i not in irr:
                continue
            place = PlaceData(Poly.from_monic_index(rep.field, d, i))
            bound = rep.local_dim(place) * math.sqrt(place.residue_size**rep.weight)
            if abs(a[lam]) > bound + 1e-9:
                bad.append((place, int(a[lam])))
    return bad
