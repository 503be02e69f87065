"""Haar-random unitaries and Monte Carlo trace moments over U(S)."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

GENERATOR = "numpy.random.PCG64"
_BATCH = 4096


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


@dataclass
class UnitarySample:
    S: int
    matrix: np.ndarray

    @property
    def eigenphases(self) -> np.ndarray:
        return np.angle(np.linalg.eigvals(self.matrix))

    def orthonormality_residual(self) -> float:
        U = self.matrix
        return float(np.max(np.abs(U.conj().T @ U - np.eye(self.S))))


def haar_batch(S: int, N: int, rng: np.random.Generator) -> np.ndarray:
    """N independent Haar unitaries of size S, shape (N, S, S).

    QR of a complex Gaussian matrix, with column j of Q multiplied by the
    phase r_jj/|r_jj| of the triangular factor (Mezzadri's correction), so
    the law does not depend on the QR routine's sign convention.
    """
    if S < 1:
        raise ValueError("matrix size must be >= 1")
    Z = (rng.standard_normal((N, S, S)) + 1j * rng.standard_normal((N, S, S))) / math.sqrt(2)
    Qm, R = np.linalg.qr(Z)
    d = np.diagonal(R, axis1=1, axis2=2)
    return Qm * (d / np.abs(d))[:, None, :]


def sample_haar(S: int, seed: int) -> UnitarySample:
    return UnitarySample(S, haar_batch(S, 1, make_rng(seed))[0])


@dataclass
class MomentEstimate:
    """Mean of a (possibly complex) statistic from its sufficient statistics."""

    n: int
    S: int
    count: int = 0
    total: complex = 0j
    total_sq: float = 0.0  # sum of |x|^2

    @property
    def N(self) -> int:
        return self.count

    @property
    def mean(self) -> complex | float:
        m = self.total / self.count
        return m.real if isinstance(m, complex) and m.imag == 0 else m

    @property
    def stderr(self) -> float:
        if self.count < 2:
            return 0.0
        mu = self.total / self.count
        var = (self.total_sq - self.count * abs(mu) ** 2) / (self.count - 1)
        return math.sqrt(max(var, 0.0) / self.count)

    def add(self, values: np.ndarray):
        self.count += len(values)
        self.total += complex(np.sum(values))
        self.total_sq += float(np.sum(np.abs(values) ** 2))
        return self

    def merge(self, other: MomentEstimate) -> MomentEstimate:
        return MomentEstimate(self.n, self.S, self.count + other.count,
                              self.total + other.total, self.total_sq + other.total_sq)


def _power_traces(U: np.ndarray, n: int) -> np.ndarray:
    ev = np.linalg.eigvals(U)
    return np.sum(ev**n, axis=1)


def _moment_worker(args):
    S, n, N, seed, k = args
    rng = make_rng(seed)
    est = MomentEstimate(n, S)
    done = 0
    while done < N:
        b = min(_BATCH, N - done)
        U = haar_batch(S, b, rng)
        tr = _power_traces(U, n)
        vals = np.abs(tr) ** 2
        if k:
            vals = vals * np.linalg.det(U) ** k
        est.add(vals.real if not k else vals)
        done += b
    return est


def _run(S, n, N, seed, k, workers):
    workers = max(1, int(workers))
    shares = [N // workers + (i < N % workers) for i in range(workers)]
    jobs = [(S, n, c, seed + i, k) for i, c in enumerate(shares) if c]
    if workers == 1:
        parts = [_moment_worker(j) for j in jobs]
    else:
        with ProcessPoolExecutor(workers) as ex:
            parts = list(ex.map(_moment_worker, jobs))
    out = parts[0]
    for p in parts[1:]:
        out = out.merge(p)
    return out


def trace_moment(S: int, n: int, N: int, seed: int, workers: int = 1) -> MomentEstimate:
    """Monte Carlo mean of |Tr(g^n)|^2 over Haar g ∈ U(S).

    Worker i draws from seed + i; results merge through sufficient
    statistics, so a run is reproducible from (seed, workers).
    """
    if N < 100:
        raise ValueError("use at least 100 samples")
    return _run(S, n, N, seed, 0, workers)


def expected_moment(S: int, n: int) -> int:
    return min(n, S)


@dataclass
class PhaseCheck:
    k: int
    mean: complex
    stderr: float
    expected: float
    ok: bool


def phase_invariance_check(S: int, n: int, N: int, seed: int, ks=(-2, -1, 1, 2), workers: int = 1):
    """Mean of |Tr g^n|^2 (det g)^k: zero for k != 0, min(n, S) for k = 0."""
    out = []
    for k in ks:
        est = _run(S, n, N, seed + 1000 * (k + 10), k, workers)
        expected = float(min(n, S)) if k == 0 else 0.0
        mean = complex(est.total / est.count)
        ok = abs(mean - expected) <= 4 * est.stderr + 1e-9
        out.append(PhaseCheck(k, mean, est.stderr, expected, ok))
    return out
