"""Discrete wavefunctions whose squared moduli are symmetric binomial laws.

``psi(n, k) = 2**(-n/2) * sqrt(C(n, k)) * exp(i theta(k))`` for
``k = 0..n``, normalized under ``<a, b> = sum conj(a_k) b_k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

EXACT_LIMIT = 64


@dataclass(frozen=True, eq=False)
class DiscreteWave:
    n: int
    values: np.ndarray
    thetas: np.ndarray

    def probabilities(self) -> np.ndarray:
        return np.abs(self.values) ** 2


def binom_pmf(n: int) -> list[Fraction]:
    """Exact ``C(n, k) / 2**n`` for ``k = 0..n``."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    den = 1 << n
    return [Fraction(math.comb(n, k), den) for k in range(n + 1)]


def _pmf_floats(n: int) -> np.ndarray:
    if n <= EXACT_LIMIT:
        # int / int is correctly rounded
        den = 1 << n
        return np.array([math.comb(n, k) / den for k in range(n + 1)])
    k = np.arange(n + 1)
    from scipy.special import gammaln

    logp = gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1) - n * math.log(2.0)
    return np.exp(logp)


def discrete_wave(n: int, theta: Optional[Callable[[int], float]] = None) -> DiscreteWave:
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    amp = np.sqrt(_pmf_floats(n))
    thetas = np.array([0.0 if theta is None else float(theta(k)) for k in range(n + 1)])
    if theta is None:
        values = amp.astype(np.complex128)
    else:
        values = amp * np.exp(1j * thetas)
    return DiscreteWave(n=n, values=values, thetas=thetas)


def inner(a: DiscreteWave, b: DiscreteWave) -> complex:
    """``sum_k conj(a_k) b_k``."""
    if a.n != b.n:
        raise ValueError(f"size mismatch: n={a.n} vs n={b.n}")
    ar, ai = a.values.real, a.values.imag
    br, bi = b.values.real, b.values.imag
    # real-arithmetic form keeps <psi, psi> exactly real
    return complex(math.fsum(ar * br + ai * bi), math.fsum(ar * bi - ai * br))


def local_limit_density(n: int, k) -> np.ndarray:
    """Normal(n/2, n/4) density at ``k``."""
    var = n / 4.0
    k = np.asarray(k, dtype=np.float64)
    return np.exp(-((k - n / 2.0) ** 2) / (2.0 * var)) / math.sqrt(2.0 * math.pi * var)


def gaussian_local_limit_error(n: int) -> float:
    """``max_k |C(n,k)/2**n - g(k)|`` with ``g`` the de Moivre-Laplace density."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    den = 1 << n
    pmf = np.array([math.comb(n, k) / den for k in range(n + 1)])
    return float(np.max(np.abs(pmf - local_limit_density(n, np.arange(n + 1)))))
