"""Wiener path sampling, sign/magnitude factorization and variation sums.

Every path is a pure function of ``(seed, path_index, n, dt)``: each path
owns a Philox counter-based stream keyed by the pair, so ensembles come out
identical no matter how many workers generate them.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence, TypeVar

import numpy as np

DEFAULT_SEED = 20120615

_MASK64 = (1 << 64) - 1

T = TypeVar("T")


@dataclass(frozen=True, eq=False)
class WienerPath:
    t0: float
    dt: float
    increments: np.ndarray
    seed: int = DEFAULT_SEED
    path_index: int = 0

    @property
    def n(self) -> int:
        return len(self.increments)

    @property
    def horizon(self) -> float:
        """Elapsed time ``T = n * dt``."""
        return self.n * self.dt

    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.n + 1)

    def values(self) -> np.ndarray:
        """``W(t_k)`` for ``k = 0..n`` with ``W(t_0) = 0``."""
        return np.concatenate(([0.0], np.cumsum(self.increments)))

    @classmethod
    def from_increments(cls, increments, dt: float, t0: float = 0.0) -> "WienerPath":
        """Wrap hand-built increments (degenerate or injected test paths)."""
        inc = np.asarray(increments, dtype=np.float64)
        if inc.ndim != 1 or inc.size < 1:
            raise ValueError("increments must be a nonempty 1-D array")
        if not dt > 0:
            raise ValueError(f"dt must be positive, got {dt}")
        return cls(t0=t0, dt=float(dt), increments=inc, seed=-1, path_index=0)


@dataclass(frozen=True, eq=False)
class IncrementDecomposition:
    signs: np.ndarray
    magnitudes: np.ndarray

    def recombine(self) -> np.ndarray:
        return self.signs * self.magnitudes


def path_generator(seed: int, path_index: int) -> np.random.Generator:
    """Philox stream keyed by ``(seed, path_index)``."""
    if path_index < 0:
        raise ValueError("path_index must be non-negative")
    key = np.array([seed & _MASK64, path_index & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def generate_wiener(
    n: int, dt: float, seed: int = DEFAULT_SEED, path_index: int = 0, t0: float = 0.0
) -> WienerPath:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    rng = path_generator(seed, path_index)
    inc = rng.standard_normal(n) * math.sqrt(dt)
    return WienerPath(t0=t0, dt=float(dt), increments=inc, seed=seed, path_index=path_index)


def decompose(p: WienerPath) -> IncrementDecomposition:
    """Split increments into ``sign`` and ``|.|`` with ``sign(0) = +1``."""
    inc = p.increments
    signs = np.where(inc < 0, -1.0, 1.0)
    return IncrementDecomposition(signs=signs, magnitudes=np.abs(inc))


def power_variation(p: WienerPath, alpha: float) -> float:
    """``sum |dW_i|**alpha``."""
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    return math.fsum(np.abs(p.increments) ** alpha)


def abs_increment_mean(p: WienerPath) -> float:
    return math.fsum(np.abs(p.increments)) / p.n


def abs_increment_stderr(dt: float, n: int) -> float:
    """Standard error of the mean of ``n`` half-normal draws of scale ``sqrt(dt)``."""
    return math.sqrt((1.0 - 2.0 / math.pi) * dt / n)


def ensemble_map(
    fn: Callable[[WienerPath], T],
    n_paths: int,
    n: int,
    dt: float,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
    first_index: int = 0,
) -> list[T]:
    """Apply ``fn`` to paths ``first_index .. first_index + n_paths - 1``.

    Results come back in path-index order regardless of ``workers``.
    """
    if n_paths < 1:
        raise ValueError("n_paths must be >= 1")
    if workers < 1:
        raise ValueError("workers must be >= 1")

    def one(idx: int) -> T:
        return fn(generate_wiener(n, dt, seed, idx))

    indices = range(first_index, first_index + n_paths)
    if workers == 1:
        return [one(i) for i in indices]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, indices, chunksize=1))


def ordered_mean_stderr(values: Sequence[float]) -> tuple[float, float]:
    """Mean and standard error with fixed-order compensated summation."""
    vals = np.asarray(values, dtype=np.float64)
    m = len(vals)
    if m == 0:
        raise ValueError("empty sample")
    mean = math.fsum(vals) / m
    if m == 1:
        return mean, 0.0
    var = math.fsum((vals - mean) ** 2) / (m - 1)
    return mean, math.sqrt(var / m)


def loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Least-squares slope of ``log y`` against ``log x``."""
    lx = np.log(np.asarray(xs, dtype=np.float64))
    ly = np.log(np.asarray(ys, dtype=np.float64))
    return float(np.polyfit(lx, ly, 1)[0])
