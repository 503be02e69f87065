"""Vectorized arithmetic in the extension F_{q^n} and per-element Frobenius data.

Every monic f of degree n with Λ_ρ(f) ≠ 0 is P^{n/d} for an irreducible P
of degree d | n, and the d roots of P in F_{q^n} all have characteristic
polynomial (over F_q) equal to f.  So sums over prime powers in M_n become
sums over λ ∈ F_{q^n}: one characteristic polynomial and one local trace per
element, both computed for the whole field at once with numpy.

F_{q^n} is realized as F_q[t]/(P0) with P0 primitive, so the class of t
generates the multiplicative group and discrete logs are plain table lookups.
Element indices use the same base-q digit layout as monic indices in
:mod:`ffvar.polyring` (constant coefficient first), which makes "x - 1" a
change of the lowest base-p digit only.
"""

from __future__ import annotations

from functools import cached_property, lru_cache

import numpy as np

from .gf import DigitAdder, FieldSpec, prime_factors
from .polyring import Poly, powmod

MAX_EXTENSION_ORDER = 41_000_000
_CACHE_ORDER = 1 << 22  # engines up to this size are kept in memory
_CHUNK = 1 << 21


class ExtensionTooLarge(ValueError):
    pass


def _primitive_modulus(field: FieldSpec, n: int) -> Poly:
    """Lowest-index monic P0 of degree n whose root t has order q^n - 1.

    A unit of order q^n - 1 in F_q[t]/(P0) forces every nonzero class to be
    a unit, so P0 is irreducible as well.
    """
    q = field.q
    Q = q**n
    facs = prime_factors(Q - 1)
    one = Poly.one(field)
    t = Poly.t(field)
    for idx in range(q**n):
        if idx % q == 0:
            continue
        P0 = Poly.from_monic_index(field, n, idx)
        if n == 1:
            g = field.tables.neg[P0.coeffs[0]]
            if q == 2 or all(field._pow(g, (Q - 1) // r) != 1 for r in facs):
                return P0
            continue
        if powmod(t, Q - 1, P0) != one:
            continue
        if all(powmod(t, (Q - 1) // r, P0) != one for r in facs):
            return P0
    raise RuntimeError("no primitive polynomial found")  # cannot happen


class ExtensionField:
    """F_{q^n} with exp/log/Zech tables and whole-field Frobenius data.

    Logs live in [0, Q-2]; the zero element has the sentinel log ``Q - 1``.
    """

    def __init__(self, field: FieldSpec, n: int):
        if n < 1:
            raise ValueError("extension degree must be >= 1")
        Q = field.q**n
        if Q > MAX_EXTENSION_ORDER:
            raise ExtensionTooLarge(
                f"F_{field.q}^{n} has {Q} elements, above the {MAX_EXTENSION_ORDER} budget"
            )
        self.field = field
        self.n = n
        self.q = field.q
        self.p = field.p
        self.Q = Q
        self.ndigits = field.k * n
        self.zero_log = Q - 1
        self.modulus = _primitive_modulus(field, n)
        self.adder = DigitAdder(self.p, self.ndigits)
        self._build_exp_log()

    # -- table construction --------------------------------------------------
    def _poly_to_index(self, f: Poly) -> int:
        v = 0
        for c in reversed(f.coeffs):
            v = v * self.q + c
        return v

    def _index_to_poly(self, v: int) -> Poly:
        c = []
        for _ in range(self.n):
            v, r = divmod(v, self.q)
            c.append(r)
        return Poly(self.field, tuple(c))

    def _scalar_digits(self, v, s):
        """Multiply every base-p digit of ``v`` by the F_p scalar ``s``."""
        p = self.p
        out = np.zeros_like(v)
        w = 1
        for _ in range(self.ndigits):
            out += ((v // w) % p * s % p) * w
            w *= p
        return out

    def _linear_tables(self, images: list[int]):
        """Lookup tables for the F_p-linear map sending base digit j to
        ``images[j]``, split into a low and a high half."""
        p = self.p
        half = self.ndigits // 2
        out = []
        for digs in (images[:half], images[half:]):
            tab = np.zeros(1, dtype=np.int64)
            for img in digs:
                img = np.int64(img)
                parts = [tab] + [self.adder(tab, self._scalar_digits(np.array([img]), s)[0]) for s in range(1, p)]
                tab = np.concatenate(parts)
            out.append(tab)
        return half, out[0], out[1]

    def _mul_const_map(self, c: int):
        P0 = self.modulus
        cp = self._index_to_poly(c)
        images = []
        for j in range(self.ndigits):
            i, l = divmod(j, self.field.k)
            basis = Poly.monomial(self.field, i, self.p**l)
            images.append(self._poly_to_index((basis * cp) % P0))
        half, lo, hi = self._linear_tables(images)
        split = self.p**half
        return lambda x: self.adder(lo[x % split], hi[x // split])

    def _build_exp_log(self):
        Q = self.Q
        exp = np.empty(Q - 1, dtype=np.int64)
        exp[0] = 1
        times_t = self._mul_const_map(self._poly_to_index(Poly.t(self.field)) if self.n > 1
                                      else self.field.tables.neg[self.modulus.coeffs[0]])
        size = 1
        while size < Q - 1:
            step = min(size, Q - 1 - size)
            t_size = int(times_t(np.array([exp[size - 1]]))[0])
            shift = self._mul_const_map(t_size)
            exp[size:size + step] = shift(exp[:step])
            size += step
        dt = np.int32 if Q < 2**31 else np.int64
        self.exp = exp.astype(dt)
        log = np.empty(Q, dtype=dt)
        log[0] = self.zero_log
        log[self.exp] = np.arange(Q - 1, dtype=dt)
        self.log = log
        if len(np.unique(self.exp)) != Q - 1:  # pragma: no cover - defensive
            raise RuntimeError("modulus is not primitive")

    @cached_property
    def zech(self) -> np.ndarray:
        """``zech[L] = log(1 + t^L)`` (sentinel when the sum is zero)."""
        p = self.p
        x = self.exp.astype(np.int64)
        plus_one = x - x % p + (x % p + 1) % p
        return self.log[plus_one]

    @cached_property
    def subfield_index(self) -> np.ndarray:
        """F_q index of t^(j*u), u = (Q-1)/(q-1), for j in [0, q-2]."""
        u = (self.Q - 1) // (self.q - 1)
        vals = self.exp[np.arange(self.q - 1, dtype=np.int64) * u].astype(np.int64)
        if vals.max() >= self.q:  # pragma: no cover - defensive
            raise RuntimeError("subfield embedding mismatch")
        return vals

    # -- log-domain arithmetic ---------------------------------------------
    def mul_log(self, a, b):
        z = self.zero_log
        r = (a + b) % (self.Q - 1)
        return np.where((a == z) | (b == z), z, r)

    def add_log(self, a, b):
        z = self.zero_log
        Qm = self.Q - 1
        zz = self.zech[np.where((a == z) | (b == z), 0, (b - a) % Qm)].astype(np.int64)
        r = np.where(zz == z, z, (a + zz) % Qm)
        r = np.where(a == z, b, r)
        return np.where(b == z, a, r)

    def log_to_subfield(self, L):
        """F_q indices of elements of F_q given by their logs."""
        u = (self.Q - 1) // (self.q - 1)
        z = L == self.zero_log
        if np.any((L % u != 0) & ~z):
            raise ArithmeticError("element does not lie in the base field")
        return np.where(z, 0, self.subfield_index[np.where(z, 0, L // u)])

    # -- characteristic polynomials -----------------------------------------
    def _elementary(self, L, levels, invert):
        """Logs of e_1..e_levels of the conjugates of t^L (or of t^-L)."""
        Qm = self.Q - 1
        z = self.zero_log
        E = [np.zeros_like(L)] + [np.full_like(L, z) for _ in range(levels)]
        base = (-L) % Qm if invert else L
        for i in range(self.n):
            conj = base * pow(self.q, i, Qm) % Qm
            for j in range(min(i + 1, levels), 0, -1):
                E[j] = self.add_log(E[j], self.mul_log(E[j - 1], conj))
        return E

    def charpoly_residues(self, m: int, route: str = "auto") -> np.ndarray:
        """For every element (by index) the residue mod t^m of its
        characteristic polynomial over F_q, as an index in [0, q^m).

        ``route="direct"`` expands all n elementary symmetric functions;
        ``route="reflected"`` only m-1 of them, using
        e_{n-j}(λ) = N(λ) e_j(1/λ).  ``auto`` picks the cheaper one.
        """
        n, q, Q = self.n, self.q, self.Q
        Qm = Q - 1
        u = Qm // (q - 1)
        ncoef = min(m, n + 1)
        if route == "auto":
            route = "reflected" if m - 1 < n else "direct"
        neg = self.field.tables.np_neg
        out = np.empty(Q, dtype=np.int64)
        # λ = 0 has characteristic polynomial t^n
        out[0] = q**n if m > n else 0
        for s in range(0, Qm, _CHUNK):
            L = np.arange(s, min(Qm, s + _CHUNK), dtype=np.int64)
            coeffs = []  # coefficient of t^k, k < ncoef
            if route == "direct":
                E = self._elementary(L, n, invert=False)
                for k in range(ncoef):
                    c = self.log_to_subfield(E[n - k]) if k < n else np.ones_like(L)
                    coeffs.append(neg[c] if (n - k) % 2 else c)
            else:
                levels = min(ncoef - 1, n)
                E = self._elementary(L, levels, invert=True)
                norm = L * u % Qm
                for k in range(ncoef):
                    if k == n:
                        coeffs.append(np.ones_like(L))
                        continue
                    c = self.log_to_subfield(self.mul_log(norm, E[k]))
                    coeffs.append(neg[c] if (n - k) % 2 else c)
            r = np.zeros_like(L)
            for k in reversed(range(ncoef)):
                r = r * q + coeffs[k]
            out[self.exp[L]] = r
        return out

    @cached_property
    def charpoly_index(self) -> np.ndarray:
        """Monic index (low n coefficients) of each element's characteristic
        polynomial over F_q."""
        return self.charpoly_residues(self.n, route="direct")

    def root_of(self, P: Poly) -> int:
        """Index of some root of the monic irreducible P with deg P | n."""
        d = P.degree
        if self.n % d:
            raise ValueError("degree of P must divide the extension degree")
        target = P**(self.n // d)
        hits = np.flatnonzero(self.charpoly_index == target.monic_index())
        if len(hits) == 0:
            raise ValueError(f"{P} has no root here; is it irreducible?")
        return int(hits[0])

    # -- characters and traces -----------------------------------------------
    @cached_property
    def quadratic_character(self) -> np.ndarray:
        """χ₂ on element indices (0 at zero); needs odd q."""
        if self.p == 2:
            raise ValueError("quadratic character needs odd characteristic")
        chi = np.zeros(self.Q, dtype=np.int8)
        chi[self.exp[0::2]] = 1
        chi[self.exp[1::2]] = -1
        return chi

    def minus_one(self, x):
        x = np.asarray(x, dtype=np.int64)
        p = self.p
        return x - x % p + (x % p - 1) % p

    def sub(self, a, b):
        return self.adder(a, self._scalar_digits(np.asarray(b, dtype=np.int64), self.p - 1))

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        L = self.mul_log(self.log[a].astype(np.int64), self.log[b].astype(np.int64))
        return np.where(L == self.zero_log, 0, self.exp[np.minimum(L, self.Q - 2)])

    def inverse_index(self) -> np.ndarray:
        """Index of 1/λ for each element index (0 maps to 0)."""
        L = self.log.astype(np.int64)
        out = self.exp[(-L) % (self.Q - 1)].astype(np.int64)
        out[0] = 0
        return out

    def legendre_traces(self) -> np.ndarray:
        """a(λ) = -Σ_x χ₂(x(x-1)(x-λ)) for every λ, as int64 by index.

        Σ_x g(x) χ₂(x-λ) with g = χ₂(x)χ₂(x-1) is a correlation over the
        additive group (Z/p)^(kn), evaluated with one FFT pair.
        """
        chi = self.quadratic_character.astype(np.float64)
        g = chi * chi[self.minus_one(np.arange(self.Q))]
        shape = (self.p,) * self.ndigits
        G = np.fft.rfftn(g.reshape(shape))
        S = np.fft.rfftn(chi.reshape(shape))
        G *= np.conj(S)
        del S
        corr = np.fft.irfftn(G, s=shape, axes=range(len(shape))).reshape(-1)
        return -np.rint(corr).astype(np.int64)


@lru_cache(maxsize=16)
def _cached_extension(field: FieldSpec, n: int) -> ExtensionField:
    return ExtensionField(field, n)


def get_extension(field: FieldSpec, n: int) -> ExtensionField:
    """Shared engine for small extensions, a fresh one for large ones."""
    if field.q**n <= _CACHE_ORDER:
        return _cached_extension(field, n)
    return ExtensionField(field, n)
