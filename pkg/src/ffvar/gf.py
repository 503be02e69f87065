"""Exact arithmetic in the finite field F_q, q = p^k.

Elements are stored as integers ``v = c_0 + c_1 p + ... + c_{k-1} p^{k-1}``
where ``c_0 + c_1 x + ... + c_{k-1} x^{k-1}`` is the canonical representative
modulo the defining polynomial.  The same integer is used as the element
"index" by every other module, so F_q-coefficient arrays are plain ints.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

MAX_ORDER = 2**20
_TABLE_LIMIT = 1024  # full q x q tables only below this size


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` by trial division."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- coefficient-vector helpers over F_p (table-free arithmetic) -------------

def _vec_mulmod(a, b, modulus, p):
    """Multiply two length-k vectors modulo the monic ``modulus`` over F_p."""
    k = len(modulus) - 1
    r = [0] * (2 * k - 1 if k else 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    r[i + j] = (r[i + j] + x * y) % p
    for i in range(len(r) - 1, k - 1, -1):
        c = r[i]
        if c:
            for j in range(k + 1):
                r[i - k + j] = (r[i - k + j] - c * modulus[j]) % p
    return tuple((r + [0] * k)[:k])


def _fp_poly_divides(d, f, p) -> bool:
    """True if monic ``d`` divides ``f`` over F_p (lists, low to high)."""
    f = list(f)
    n = len(d) - 1
    for i in range(len(f) - 1, n - 1, -1):
        c = f[i]
        if c:
            for j in range(n + 1):
                f[i - n + j] = (f[i - n + j] - c * d[j]) % p
    return not any(f[:n])


def _fp_irreducible(f, p) -> bool:
    """Exhaustive factor search for a monic polynomial over F_p."""
    deg = len(f) - 1
    if deg <= 0:
        return False
    for e in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=e):
            if _fp_poly_divides(list(low) + [1], f, p):
                return False
    return True


@dataclass(frozen=True, eq=False)
class FieldSpec:
    """The finite field F_q with a fixed modulus and multiplicative generator.

    Build instances with :func:`make_field`; they are immutable and cached.
    """

    p: int
    k: int
    modulus: tuple[int, ...]  # monic, low to high, length k+1
    generator: int

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def tag(self) -> str:
        return f"{self.p}^{self.k}"

    def __repr__(self):
        return f"FieldSpec(F_{self.q}, modulus={self.modulus}, generator={self.generator})"

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and (self.p, self.k, self.modulus) == (
            other.p,
            other.k,
            other.modulus,
        )

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    # conversions between int encoding and coefficient vectors
    def to_vec(self, v: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.k):
            v, r = divmod(v, self.p)
            out.append(r)
        return tuple(out)

    def from_vec(self, vec) -> int:
        v = 0
        for c in reversed(vec):
            v = v * self.p + c % self.p
        return v

    def element(self, v: int) -> FieldElement:
        if not 0 <= v < self.q:
            raise FieldError(f"{v} is not an element index of F_{self.q}")
        return FieldElement(self, v)

    # raw int arithmetic (table-free); used to build the lookup tables
    def _add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        va, vb = self.to_vec(a), self.to_vec(b)
        return self.from_vec([(x + y) % self.p for x, y in zip(va, vb)])

    def _neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        return self.from_vec([(-x) % self.p for x in self.to_vec(a)])

    def _mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        return self.from_vec(_vec_mulmod(self.to_vec(a), self.to_vec(b), self.modulus, self.p))

    def _pow(self, a: int, e: int) -> int:
        r, b = 1, a
        while e:
            if e & 1:
                r = self._mul(r, b)
            b = self._mul(b, b)
            e >>= 1
        return r

    @cached_property
    def tables(self) -> FieldTables:
        if self.q > _TABLE_LIMIT:
            raise FieldError(f"lookup tables are only built for q <= {_TABLE_LIMIT}")
        return FieldTables.build(self)


@dataclass(frozen=True, eq=False)
class FieldTables:
    """Lookup tables derived from the table-free arithmetic, for hot loops.

    ``add``/``mul`` are nested lists (fast scalar indexing); the ``np_*``
    attributes are the same tables as numpy arrays for vectorized work.
    """

    add: list
    mul: list
    neg: list
    inv: list  # inv[0] is unused (0)
    sub: list
    log: list  # log[0] = -1
    exp: list  # exp[i] = generator**i, i < q-1
    np_add: np.ndarray
    np_mul: np.ndarray
    np_neg: np.ndarray
    np_inv: np.ndarray
    np_sub: np.ndarray

    @classmethod
    def build(cls, spec: FieldSpec) -> FieldTables:
        q = spec.q
        add = [[spec._add(a, b) for b in range(q)] for a in range(q)]
        mul = [[spec._mul(a, b) for b in range(q)] for a in range(q)]
        neg = [spec._neg(a) for a in range(q)]
        sub = [[add[a][neg[b]] for b in range(q)] for a in range(q)]
        exp = [1]
        for _ in range(q - 2):
            exp.append(mul[exp[-1]][spec.generator])
        log = [-1] * q
        for i, x in enumerate(exp):
            log[x] = i
        inv = [0] * q
        for a in range(1, q):
            inv[a] = exp[(-log[a]) % (q - 1)]
        return cls(
            add, mul, neg, inv, sub, log, exp,
            np.array(add, dtype=np.int64), np.array(mul, dtype=np.int64),
            np.array(neg, dtype=np.int64), np.array(inv, dtype=np.int64),
            np.array(sub, dtype=np.int64),
        )


@dataclass(frozen=True)
class FieldElement:
    field: FieldSpec
    value: int

    @property
    def rep(self) -> tuple[int, ...]:
        return self.field.to_vec(self.value)

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, neg(other))

    def __mul__(self, other):
        return mul(self, other)

    def __neg__(self):
        return neg(self)

    def __pow__(self, e):
        return pow(self, e)

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"GF({self.field.q})({self.value})"


@lru_cache(maxsize=None)
def make_field(p: int, k: int = 1) -> FieldSpec:
    """Return F_{p^k} with the lexicographically lowest modulus and generator.

    The modulus is the first monic irreducible of degree ``k`` over F_p when
    monic polynomials are ordered by their coefficient vector read from the
    constant term upward (the same order used for element indices).
    """
    if not isinstance(p, int) or not is_prime(p):
        raise FieldError(f"characteristic {p!r} is not prime")
    if not isinstance(k, int) or k < 1:
        raise FieldError(f"extension degree {k!r} must be a positive integer")
    if p**k > MAX_ORDER:
        raise FieldError(f"q = {p}^{k} exceeds the supported bound 2^20")
    q = p**k
    modulus = None
    for idx in range(q):
        # low coefficients of the candidate, constant term first
        cand = [(idx // p**i) % p for i in range(k)] + [1]
        if _fp_irreducible(cand, p):
            modulus = tuple(cand)
            break
    spec = FieldSpec(p, k, modulus, 0)
    factors = prime_factors(q - 1)
    gen = next(
        g for g in range(1, q)
        if q == 2 or all(spec._pow(g, (q - 1) // r) != 1 for r in factors)
    )
    return FieldSpec(p, k, modulus, gen)


def parse_field(text: str) -> FieldSpec:
    """Parse a field tag ``"p^k"`` (or a bare prime power such as ``"9"``)."""
    text = text.strip()
    if "^" in text:
        p, k = text.split("^", 1)
        return make_field(int(p), int(k))
    q = int(text)
    for p in prime_factors(q)[:1]:
        k = 0
        r = q
        while r % p == 0:
            r //= p
            k += 1
        if r == 1:
            return make_field(p, k)
    raise FieldError(f"{text!r} is not a prime power")


def _check_same(a: FieldElement, b: FieldElement):
    if a.field != b.field:
        raise FieldError("operands belong to different fields")


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    _check_same(a, b)
    return FieldElement(a.field, a.field._add(a.value, b.value))


def neg(a: FieldElement) -> FieldElement:
    return FieldElement(a.field, a.field._neg(a.value))


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    _check_same(a, b)
    return FieldElement(a.field, a.field._mul(a.value, b.value))


def inv(a: FieldElement) -> FieldElement:
    if a.value == 0:
        raise ZeroDivisionError("inverse of zero in a finite field")
    f = a.field
    return FieldElement(f, f._pow(a.value, f.q - 2))


def pow(a: FieldElement, e: int) -> FieldElement:
    """Square-and-multiply power; ``pow(0, 0)`` is 1 by convention."""
    if e < 0:
        return pow(inv(a), -e)
    return FieldElement(a.field, a.field._pow(a.value, e))


class SquareClass(enum.Enum):
    YES = "yes"
    NO = "no"
    ZERO = "zero"


def is_square(a: FieldElement) -> SquareClass:
    """Euler's criterion.  Only defined for odd q."""
    f = a.field
    if f.p == 2:
        raise FieldError("is_square is only defined for odd q")
    if a.value == 0:
        return SquareClass.ZERO
    return SquareClass.YES if f._pow(a.value, (f.q - 1) // 2) == 1 else SquareClass.NO


def enumerate_elements(spec: FieldSpec) -> list[FieldElement]:
    return [FieldElement(spec, v) for v in range(spec.q)]


class DigitAdder:
    """Vectorized addition of element indices of an F_p-vector space.

    An index with ``ndigits`` base-p digits is a vector over F_p; the sum is
    digitwise mod p.  Digits are processed in chunks through a small
    addition table so each pass handles several digits at once.
    """

    def __init__(self, p: int, ndigits: int, table_bits: int = 20):
        self.p = p
        self.ndigits = ndigits
        c = 1
        while c < ndigits and p ** (2 * (c + 1)) <= 2**table_bits:
            c += 1
        self.chunk = c
        self.base = p**c
        P = self.base
        a = np.arange(P)
        digs_a = [(a // p**i) % p for i in range(c)]
        tab = np.zeros((P, P), dtype=np.int64)
        for i in range(c):
            tab += ((digs_a[i][:, None] + digs_a[i][None, :]) % p) * p**i
        self.table = tab.ravel()
        self.nchunks = -(-ndigits // c)

    def __call__(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        P = self.base
        if self.nchunks == 1:
            return self.table[a * P + b]
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        w = 1
        for _ in range(self.nchunks):
            out += self.table[(a // w % P) * P + (b // w % P)] * w
            w *= P
        return out
