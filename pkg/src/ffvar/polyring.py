"""Polynomials over F_q: arithmetic, factorization, enumeration, intervals.

Coefficients are stored as F_q element indices (see :mod:`ffvar.gf`), lowest
degree first.  A monic polynomial of degree n is identified with the integer
``sum(c_i * q**i for i < n)`` built from its non-leading coefficients; this
"monic index" is the enumeration order used throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, total_ordering

import numpy as np

from .gf import DigitAdder, FieldElement, FieldError, FieldSpec, parse_field


@total_ordering
class _NegInf:
    """Degree of the zero polynomial.  Compares below every integer and
    refuses arithmetic so it can never leak into index computations."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("-inf-degree")

    def __repr__(self):
        return "-inf"

    def _no(self, *a):
        raise TypeError("the degree of the zero polynomial is not a number")

    __add__ = __radd__ = __sub__ = __rsub__ = __mul__ = __rmul__ = __int__ = __index__ = _no


NEG_INF = _NegInf()


class PolyError(ValueError):
    pass


def _tables(field: FieldSpec):
    return field.tables


@dataclass(frozen=True)
class Poly:
    field: FieldSpec
    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = list(self.coeffs)
        q = self.field.q
        if any(not 0 <= x < q for x in c):
            raise PolyError(f"coefficients must be element indices in [0, {q})")
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    # construction -----------------------------------------------------------
    @classmethod
    def zero(cls, field):
        return cls(field, ())

    @classmethod
    def one(cls, field):
        return cls(field, (1,))

    @classmethod
    def t(cls, field):
        return cls(field, (0, 1))

    @classmethod
    def monomial(cls, field, d, c=1):
        return cls(field, (0,) * d + (c,))

    @classmethod
    def from_monic_index(cls, field, n, idx):
        q = field.q
        c = []
        for _ in range(n):
            idx, r = divmod(idx, q)
            c.append(r)
        return cls(field, tuple(c) + (1,))

    # basic data -----------------------------------------------------------
    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def elements(self) -> tuple[FieldElement, ...]:
        return tuple(FieldElement(self.field, c) for c in self.coeffs)

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self):
        return not self.coeffs

    def is_monic(self):
        return self.lc == 1

    def monic_index(self) -> int:
        if not self.is_monic():
            raise PolyError("monic index requested for a non-monic polynomial")
        q = self.field.q
        v = 0
        for c in reversed(self.coeffs[:-1]):
            v = v * q + c
        return v

    def __call__(self, x: int) -> int:
        """Evaluate at the element index ``x`` (Horner)."""
        tb = _tables(self.field)
        r = 0
        for c in reversed(self.coeffs):
            r = tb.add[tb.mul[r][x]][c]
        return r

    def __repr__(self):
        return f"Poly[{self.field.tag}]({to_text(self)})"

    def __lt__(self, other):
        # degree first, then monic-index style order on coefficient vectors
        return _sort_key(self) < _sort_key(other)

    # arithmetic -------------------------------------------------------------
    def _same(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        if other.field != self.field:
            raise FieldError("polynomials over different fields")
        return None

    def __add__(self, other):
        self._same(other)
        tb = _tables(self.field)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly(self.field, tuple(tb.add[x][b[i]] if i < len(b) else x for i, x in enumerate(a)))

    def __neg__(self):
        tb = _tables(self.field)
        return Poly(self.field, tuple(tb.neg[x] for x in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._same(other)
        if not self.coeffs or not other.coeffs:
            return Poly.zero(self.field)
        tb = _tables(self.field)
        add, mul = tb.add, tb.mul
        r = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                row = mul[x]
                for j, y in enumerate(other.coeffs):
                    if y:
                        r[i + j] = add[r[i + j]][row[y]]
        return Poly(self.field, tuple(r))

    def scale(self, c: int) -> Poly:
        m = _tables(self.field).mul[c]
        return Poly(self.field, tuple(m[x] for x in self.coeffs))

    def __pow__(self, e: int):
        r, b = Poly.one(self.field), self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def __divmod__(self, other):
        return divrem(self, other)

    def __floordiv__(self, other):
        return divrem(self, other)[0]

    def __mod__(self, other):
        return divrem(self, other)[1]


def _sort_key(f: Poly):
    # monic polynomials of one degree sort by monic index; lc breaks ties
    return (len(f.coeffs), tuple(reversed(f.coeffs[:-1])), f.lc)


def divrem(f: Poly, g: Poly) -> tuple[Poly, Poly]:
    """Quotient and remainder with ``deg(rem) < deg(g)``."""
    f._same(g)
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    tb = _tables(f.field)
    r = list(f.coeffs)
    dg = len(g.coeffs) - 1
    inv_lc = tb.inv[g.lc]
    qt = [0] * max(len(r) - dg, 0)
    for i in range(len(r) - 1, dg - 1, -1):
        c = r[i]
        if c:
            c = tb.mul[c][inv_lc]
            qt[i - dg] = c
            for j, y in enumerate(g.coeffs):
                r[i - dg + j] = tb.sub[r[i - dg + j]][tb.mul[c][y]]
    return Poly(f.field, tuple(qt)), Poly(f.field, tuple(r[:dg]))


def gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd (zero if both inputs are zero)."""
    while not g.is_zero():
        f, g = g, divrem(f, g)[1]
    if f.is_zero():
        return f
    return f.scale(_tables(f.field).inv[f.lc])


def powmod(f: Poly, e: int, mod: Poly) -> Poly:
    r, b = Poly.one(f.field) % mod, f % mod
    while e:
        if e & 1:
            r = (r * b) % mod
        b = (b * b) % mod
        e >>= 1
    return r


# -- places and factorizations ------------------------------------------------

@dataclass(frozen=True)
class PlaceData:
    """A finite place: a monic irreducible ``prime`` of degree ``degree``."""

    prime: Poly

    def __post_init__(self):
        if not self.prime.is_monic():
            raise PolyError("a place is given by a monic polynomial")

    @property
    def degree(self) -> int:
        return self.prime.degree

    @property
    def residue_size(self) -> int:
        return self.prime.field.q ** self.degree

    def __lt__(self, other):
        return self.prime < other.prime

    def __repr__(self):
        return f"Place({to_text(self.prime)})"


@dataclass(frozen=True)
class Factorization:
    unit: int
    factors: tuple[tuple[PlaceData, int], ...]

    def expand(self, field: FieldSpec) -> Poly:
        r = Poly(field, (self.unit,))
        for place, e in self.factors:
            r = r * place.prime**e
        return r


def factorize(f: Poly) -> Factorization:
    """Complete factorization by trial division with monic irreducibles.

    Factors are listed by degree, then by monic index.
    """
    if f.is_zero():
        raise PolyError("cannot factor the zero polynomial")
    field = f.field
    unit = f.lc
    g = f.scale(_tables(field).inv[unit])
    out = []
    d = 1
    while g.degree >= 2 * d:
        for P in _irreducible_polys(field, d):
            e = 0
            while True:
                qt, r = divrem(g, P)
                if not r.is_zero():
                    break
                g, e = qt, e + 1
            if e:
                out.append((PlaceData(P), e))
            if g.degree < 2 * d:
                break
        d += 1
    if g.degree >= 1:
        # no factor of degree <= deg/2 remains, so g is irreducible
        out.append((PlaceData(g), 1))
    out.sort(key=lambda pe: _sort_key(pe[0].prime))
    return Factorization(unit, tuple(out))


def prime_power_form(f: Poly):
    """Return ``(c, P, m)`` with ``f = c * P**m`` and m >= 1, else ``None``."""
    fac = factorize(f)
    if len(fac.factors) != 1:
        return None
    place, m = fac.factors[0]
    return fac.unit, place, m


def is_irreducible(f: Poly) -> bool:
    if f.is_zero() or f.degree < 1:
        return False
    fac = factorize(f).factors
    return len(fac) == 1 and fac[0][1] == 1


# -- enumeration ----------------------------------------------------------------

def enumerate_monic(field: FieldSpec, n: int, start: int = 0, stop: int | None = None):
    """Monic polynomials of degree ``n`` in monic-index order.

    ``start``/``stop`` select an index range so workers can split M_n.
    """
    if n < 0:
        raise PolyError("degree must be non-negative")
    total = field.q**n
    stop = total if stop is None else min(stop, total)
    for idx in range(start, stop):
        yield Poly.from_monic_index(field, n, idx)


def _poly_mul_arrays(tb, A, B):
    """Row-wise products of coefficient arrays A (a, da+1) and B (b, db+1),
    returned as an (a*b, da+db+1) array."""
    da, db = A.shape[1] - 1, B.shape[1] - 1
    out = np.zeros((A.shape[0], B.shape[0], da + db + 1), dtype=np.int64)
    for i in range(da + 1):
        prod = tb.np_mul[A[:, i][:, None, None], B[None, :, :]]
        out[:, :, i:i + db + 1] = tb.np_add[out[:, :, i:i + db + 1], prod]
    return out.reshape(-1, da + db + 1)


def _monic_coeff_array(q, n, idx):
    cols = [(idx // q**i) % q for i in range(n)]
    cols.append(np.ones_like(idx))
    return np.stack(cols, axis=1)


def _monic_index_array(q, coeffs):
    return coeffs @ (q ** np.arange(coeffs.shape[1], dtype=np.int64))


@lru_cache(maxsize=None)
def irreducible_indices(field: FieldSpec, d: int) -> np.ndarray:
    """Monic indices of all irreducibles of degree ``d`` (sorted).

    Eratosthenes over M_d: every product of a lower-degree irreducible g
    with a monic cofactor is struck out.  Multiplication by a fixed g is
    F_q-linear in the cofactor's low coefficients, so each product index is
    assembled from two half-size lookup tables and one digitwise addition.
    """
    if d < 1:
        raise PolyError("degree must be >= 1")
    q = field.q
    if d == 1:
        return np.arange(q, dtype=np.int64)
    tb = _tables(field)
    adder = DigitAdder(field.p, field.k * d)
    alive = np.ones(q**d, dtype=bool)
    for a in range(1, d // 2 + 1):
        irr = _monic_coeff_array(q, a, irreducible_indices(field, a))
        e = d - a  # cofactor degree; its low part has e coefficients
        s = e // 2
        lo = np.arange(q**s, dtype=np.int64)
        hi = np.arange(q ** (e - s), dtype=np.int64)
        lo_c = np.stack([(lo // q**i) % q for i in range(s)], axis=1) if s else np.zeros((1, 0), np.int64)
        # hi block sits at t^s .. t^(e-1), followed by the leading t^e
        hi_c = np.concatenate(
            [np.zeros((len(hi), s), np.int64)]
            + [((hi // q**i) % q)[:, None] for i in range(e - s)]
            + [np.ones((len(hi), 1), np.int64)],
            axis=1,
        )
        if s == 0:
            lo_c = np.zeros((1, 1), np.int64)
        for g in irr:
            t_lo = _poly_mul_arrays(tb, g[None, :], lo_c)[:, :d]
            t_hi = _poly_mul_arrays(tb, g[None, :], hi_c)[:, :d]
            i_lo = _monic_index_array(q, t_lo)
            i_hi = _monic_index_array(q, t_hi)
            prod = adder(i_hi[:, None], i_lo[None, :])
            alive[prod.ravel()] = False
    return np.flatnonzero(alive).astype(np.int64)


@lru_cache(maxsize=None)
def _irreducible_polys(field: FieldSpec, d: int) -> tuple[Poly, ...]:
    return tuple(Poly.from_monic_index(field, d, int(i)) for i in irreducible_indices(field, d))


def enumerate_irreducibles(field: FieldSpec, d: int):
    return [PlaceData(P) for P in _irreducible_polys(field, d)]


def count_irreducibles(q: int, d: int) -> int:
    """Necklace formula (1/d) sum_{e | d} mu(e) q^{d/e}."""
    def mu(n):
        r, k = 1, 2
        while k * k <= n:
            if n % k == 0:
                n //= k
                if n % k == 0:
                    return 0
                r = -r
            k += 1
        return -r if n > 1 else r

    return sum(mu(e) * q ** (d // e) for e in range(1, d + 1) if d % e == 0) // d


# -- involution and intervals ---------------------------------------------------

def involute(f: Poly) -> Poly:
    """``t^deg f * f(1/t)``: coefficient reversal; the zero polynomial is fixed."""
    return Poly(f.field, tuple(reversed(f.coeffs)))


def interval(A: Poly, h: int):
    """All f with ``deg(f - A) <= h``, i.e. A with its low h+1 coefficients
    replaced, in index order of the replaced block."""
    n = A.degree
    if n is NEG_INF or not 0 <= h < n:
        raise PolyError("interval needs deg A > h >= 0")
    q = A.field.q
    high = A.coeffs[h + 1:]
    for idx in range(q ** (h + 1)):
        low = []
        for _ in range(h + 1):
            idx, r = divmod(idx, q)
            low.append(r)
        yield Poly(A.field, tuple(low) + high)


# -- text format ---------------------------------------------------------------

def to_text(f: Poly) -> str:
    return ",".join(str(c) for c in f.coeffs) if f.coeffs else "0"


def parse_poly(text: str, field: FieldSpec | str) -> Poly:
    """Parse ``"c0,c1,...,cd"`` (element indices) over ``field`` or ``"p^k"``."""
    if isinstance(field, str):
        field = parse_field(field)
    text = text.strip()
    if text in ("", "0"):
        return Poly.zero(field)
    return Poly(field, tuple(int(x) for x in text.split(",")))
