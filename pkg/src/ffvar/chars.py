"""Dirichlet characters modulo t^m over F_q.

The unit group Γ(t^m) = (F_q[t]/t^m)^× is split into cyclic factors by the
generic greedy algorithm and every unit gets an exponent vector (its
discrete log).  Characters are exponent vectors e, with
χ_e(u) = exp(2πi Σ e_i dlog(u)_i / o_i).

Residues mod t^m are indexed like monic indices: r = Σ_{i<m} c_i q^i.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from functools import cached_property, lru_cache

import numpy as np

from .gf import FieldSpec
from .polyring import Poly

MAX_UNIT_GROUP = 10**7


class CharacterError(ValueError):
    pass


def residue_digits(q: int, m: int, r):
    r = np.asarray(r, dtype=np.int64)
    return [(r // q**i) % q for i in range(m)]


def residue_mul(field: FieldSpec, m: int, a, b):
    """Elementwise product of residue indices modulo t^m."""
    tb = field.tables
    q = field.q
    da, db = residue_digits(q, m, a), residue_digits(q, m, b)
    shape = np.broadcast(np.asarray(a), np.asarray(b)).shape
    out = [np.zeros(shape, dtype=np.int64) for _ in range(m)]
    for i in range(m):
        for j in range(m - i):
            out[i + j] = tb.np_add[out[i + j], tb.np_mul[da[i], db[j]]]
    r = np.zeros(shape, dtype=np.int64)
    for i in reversed(range(m)):
        r = r * q + out[i]
    return r


def residue_of(f: Poly, m: int) -> int:
    q = f.field.q
    r = 0
    for c in reversed(f.coeffs[:m]):
        r = r * q + c
    return r


@dataclass(frozen=True, eq=False)
class UnitGroupTable:
    field: FieldSpec
    modulus_exponent: int
    generators: tuple[int, ...]
    orders: tuple[int, ...]
    dlog: np.ndarray = dc_field(repr=False)  # (q^m, r); -1 rows for non-units

    @property
    def order(self) -> int:
        return (self.field.q - 1) * self.field.q ** (self.modulus_exponent - 1)

    @cached_property
    def units(self) -> np.ndarray:
        q = self.field.q
        r = np.arange(q**self.modulus_exponent, dtype=np.int64)
        return r[r % q != 0]

    @cached_property
    def constant_generator_log(self) -> np.ndarray:
        return self.dlog[self.field.generator]

    def mul(self, a, b):
        return residue_mul(self.field, self.modulus_exponent, a, b)

    @cached_property
    def exponent(self) -> int:
        return math.lcm(*self.orders) if self.orders else 1

    def phase_numerators(self, exps) -> np.ndarray:
        """Σ e_i d_i (L / o_i) mod L for every residue; L = lcm of orders."""
        L = self.exponent
        w = np.array([e * (L // o) for e, o in zip(exps, self.orders)], dtype=np.int64)
        return (self.dlog @ w) % L if len(w) else np.zeros(len(self.dlog), np.int64)


def build_unit_group(field: FieldSpec, m: int) -> UnitGroupTable:
    return _build_unit_group(field, m)


@lru_cache(maxsize=None)
def _build_unit_group(field: FieldSpec, m: int) -> UnitGroupTable:
    if m < 1:
        raise CharacterError("modulus exponent must be >= 1")
    q = field.q
    N = (q - 1) * q ** (m - 1)
    if N > MAX_UNIT_GROUP:
        raise CharacterError(f"|Γ(t^{m})| = {N} exceeds {MAX_UNIT_GROUP}")
    mul = lambda a, b: residue_mul(field, m, a, b)  # noqa: E731
    R = q**m
    allr = np.arange(R, dtype=np.int64)
    units = allr[allr % q != 0]

    gens, ords = [], []
    dlog = np.full((R, 0), -1, dtype=np.int64)
    members = np.array([1], dtype=np.int64)  # subgroup H built so far
    coords = np.zeros((1, 0), dtype=np.int64)
    while len(members) < N:
        in_h = np.zeros(R, dtype=bool)
        in_h[members] = True
        # order of every unit in Γ/H
        qord = np.zeros(len(units), dtype=np.int64)
        cur = units.copy()
        k = 1
        while (qord == 0).any():
            hit = in_h[cur] & (qord == 0)
            qord[hit] = k
            cur = mul(cur, units)
            k += 1
        best = int(np.argmax(qord))  # first unit of maximal order
        x, k = int(units[best]), int(qord[best])
        # x^k lies in H; shift x by an element of H so that x^k = 1
        xk = 1
        for _ in range(k):
            xk = int(mul(xk, x))
        a = dlog[xk]
        if np.any(a % k):
            raise ArithmeticError("greedy decomposition failed: coordinate not divisible")
        for g, ai, oi in zip(gens, a, ords):
            step = (-(ai // k)) % oi
            gp = 1
            for _ in range(step):
                gp = int(mul(gp, g))
            x = int(mul(x, gp))
        # closure H x <x>
        new_m, new_c = [], []
        xp = np.int64(1)
        for j in range(k):
            new_m.append(mul(members, xp))
            new_c.append(np.concatenate([coords, np.full((len(members), 1), j)], axis=1))
            xp = mul(xp, x)
        if int(xp) != 1:
            raise ArithmeticError("adjusted generator has the wrong order")
        members = np.concatenate(new_m)
        coords = np.concatenate(new_c)
        gens.append(x)
        ords.append(k)
        dlog = np.full((R, len(gens)), -1, dtype=np.int64)
        dlog[members] = coords
    if len(np.unique(members)) != N:
        raise ArithmeticError("closure did not enumerate the unit group exactly once")
    dlog.setflags(write=False)
    return UnitGroupTable(field, m, tuple(gens), tuple(ords), dlog)


@dataclass(frozen=True)
class DirichletCharacter:
    table: UnitGroupTable
    exponents: tuple[int, ...]

    def __post_init__(self):
        if len(self.exponents) != len(self.table.orders):
            raise CharacterError("exponent vector has the wrong length")
        object.__setattr__(
            self, "exponents", tuple(int(e) % o for e, o in zip(self.exponents, self.table.orders))
        )

    def __hash__(self):
        return hash((id(self.table), self.exponents))

    def __eq__(self, other):
        return isinstance(other, DirichletCharacter) and other.table is self.table and other.exponents == self.exponents

    @property
    def is_trivial(self) -> bool:
        return not any(self.exponents)

    @cached_property
    def even(self) -> bool:
        c = self.table.constant_generator_log
        L = self.table.exponent
        s = sum(e * int(d) * (L // o) for e, d, o in zip(self.exponents, c, self.table.orders))
        return s % L == 0

    def conjugate(self) -> DirichletCharacter:
        return DirichletCharacter(self.table, tuple(-e for e in self.exponents))

    @cached_property
    def values(self) -> np.ndarray:
        """χ on every residue index (0 on non-units)."""
        L = self.table.exponent
        num = self.table.phase_numerators(self.exponents)
        v = np.exp(2j * np.pi * num / L)
        v[np.arange(len(v)) % self.table.field.q == 0] = 0
        return v

    def __call__(self, f: Poly) -> complex:
        return evaluate(self, f)

    def to_text(self) -> str:
        return ",".join(f"{e}/{o}" for e, o in zip(self.exponents, self.table.orders))


def parse_character(tbl: UnitGroupTable, text: str) -> DirichletCharacter:
    parts = [s.split("/") for s in text.split(",") if s]
    if [int(o) for _, o in parts] != list(tbl.orders):
        raise CharacterError("character orders do not match the unit group")
    return DirichletCharacter(tbl, tuple(int(e) for e, _ in parts))


def evaluate(chi: DirichletCharacter, f: Poly) -> complex:
    """0 if t divides f, otherwise a root of unity."""
    if f.is_zero() or f.coeffs[0] == 0:
        return 0j
    return complex(chi.values[residue_of(f, chi.table.modulus_exponent)])


def even_mask(tbl: UnitGroupTable) -> np.ndarray:
    """Boolean array over exponent vectors (shape = orders): χ_e even."""
    if not tbl.orders:
        return np.ones((), dtype=bool)
    L = tbl.exponent
    c = tbl.constant_generator_log
    grids = np.meshgrid(*[np.arange(o) for o in tbl.orders], indexing="ij")
    s = sum(g * int(d) * (L // o) for g, d, o in zip(grids, c, tbl.orders))
    return s % L == 0


def enumerate_characters(tbl: UnitGroupTable, even_only=False, exclude_trivial=False):
    mask = even_mask(tbl)
    for e in itertools.product(*[range(o) for o in tbl.orders]):
        if even_only and not mask[e]:
            continue
        if exclude_trivial and not any(e):
            continue
        yield DirichletCharacter(tbl, e)


def character_sums(tbl: UnitGroupTable, weights: np.ndarray) -> np.ndarray:
    """Σ_r χ_e(r) w[r] over units r, for every exponent vector e at once.

    Returns a complex array of shape ``tbl.orders``.  Placing the weights on
    the grid of discrete logs turns the sum into an inverse DFT.
    """
    weights = np.asarray(weights)
    units = tbl.units
    A = np.zeros(tbl.orders, dtype=np.complex128 if np.iscomplexobj(weights) else np.float64)
    np.add.at(A, tuple(tbl.dlog[units].T), weights[units])
    return np.fft.ifftn(A) * A.size if tbl.orders else A.astype(np.complex128)


def character_matrix(tbl: UnitGroupTable, chars) -> np.ndarray:
    return np.array([c.values[tbl.units] for c in chars])


@dataclass
class OrthogonalityReport:
    q: int
    m: int
    max_deviation: dict
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations


def orthogonality_check(tbl: UnitGroupTable, tol: float = 1e-10) -> OrthogonalityReport:
    """Check the three orthogonality relations by explicit summation."""
    N = tbl.order
    chars = list(enumerate_characters(tbl))
    X = character_matrix(tbl, chars)  # chars x units
    dev, bad = {}, []
    # characters against characters, summed over the group
    G = X @ X.conj().T / N
    E = np.abs(G - np.eye(len(chars)))
    dev["characters"] = float(E.max())
    bad += [("characters", chars[i].to_text(), chars[j].to_text()) for i, j in zip(*np.nonzero(E > tol))]
    # residues against residues, summed over characters
    R = X.T @ X.conj() / len(chars)
    E = np.abs(R - np.eye(N))
    dev["residues"] = float(E.max())
    units = tbl.units
    bad += [("residues", int(units[i]), int(units[j])) for i, j in zip(*np.nonzero(E > tol))]
    # even characters over residues with constant term 1
    evens = [c for c in chars if c.even]
    one = units[units % tbl.field.q == 1]
    Xe = np.array([c.values[one] for c in evens])
    Ge = Xe @ Xe.conj().T / len(evens)
    E = np.abs(Ge - np.eye(len(evens)))
    dev["even"] = float(E.max())
    bad += [("even", evens[i].to_text(), evens[j].to_text()) for i, j in zip(*np.nonzero(E > tol))]
    return OrthogonalityReport(tbl.field.q, tbl.modulus_exponent, dev, bad)
