"""Sampling of the complex square-root process driven by a Wiener path.

Each increment is ``dX = [1/2 + |dW| + (-1 + b sign(dW)) dt] * Phi`` where
``Phi = (1-i)/2 sign(dW) + (1+i)/2`` is 1 on up-steps and ``i`` on
down-steps, so ``Phi**2 = sign(dW)``. The free process has a constant
``b = beta``; the interacting one uses ``b = V(X, t)`` at the pre-step point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .paths import IncrementDecomposition, WienerPath, decompose

PHASE_SIGN_COEFF = (1 - 1j) / 2
PHASE_OFFSET = (1 + 1j) / 2
PHASE_MEAN = (1 + 1j) / 2
PHASE_VARIANCE = complex(0.0, -0.5)


@dataclass(frozen=True, eq=False)
class PhasePath:
    phases: np.ndarray

    def __len__(self):
        return len(self.phases)


@dataclass(frozen=True, eq=False)
class ComplexProcessPath:
    dt: float
    increments: np.ndarray
    beta: complex | str
    x0: complex = 0j
    t0: float = 0.0

    def values(self) -> np.ndarray:
        return self.x0 + np.concatenate(([0j], np.cumsum(self.increments)))


def phase_path(d: IncrementDecomposition) -> PhasePath:
    # exact in binary floating point: the two outcomes are 1 and i
    return PhasePath(phases=phase_formula(d.signs))


def phase_formula(signs: np.ndarray) -> np.ndarray:
    """The linear form ``(1-i)/2 * sign + (1+i)/2`` evaluated literally."""
    return PHASE_SIGN_COEFF * np.asarray(signs, dtype=np.float64) + PHASE_OFFSET


def phase_moments(p: PhasePath) -> tuple[complex, complex]:
    """Sample mean and unconjugated variance ``mean((Phi - m)**2)``."""
    phases = p.phases
    if len(phases) == 0:
        raise ValueError("empty phase path")
    m = _csum(phases) / len(phases)
    return m, _csum((phases - m) ** 2) / len(phases)


def phase_moment_stderrs(p: PhasePath) -> tuple[float, float]:
    """Standard errors of the mean and of the unconjugated variance.

    Each is the RMS spread of the per-sample terms (``Phi_k`` resp.
    ``(Phi_k - m)**2``) about their average, divided by ``sqrt(N)``.
    """
    phases = p.phases
    n = len(phases)
    if n == 0:
        raise ValueError("empty phase path")
    m, v = phase_moments(p)
    se_mean = math.sqrt(math.fsum(np.abs(phases - m) ** 2) / n / n)
    se_var = math.sqrt(math.fsum(np.abs((phases - m) ** 2 - v) ** 2) / n / n)
    return se_mean, se_var


def _csum(z: np.ndarray) -> complex:
    return complex(math.fsum(z.real), math.fsum(z.imag))


def _increments(
    d: IncrementDecomposition, drift_coeff: np.ndarray, dt: float
) -> np.ndarray:
    phases = phase_path(d).phases
    bracket = 0.5 + d.magnitudes + (-1.0 + drift_coeff * d.signs) * dt
    return bracket * phases


def sample_free(w: WienerPath, beta: complex) -> ComplexProcessPath:
    d = decompose(w)
    drift = np.full(w.n, complex(beta), dtype=np.complex128)
    return ComplexProcessPath(dt=w.dt, increments=_increments(d, drift, w.dt), beta=complex(beta), t0=w.t0)


def sample_potential(
    w: WienerPath,
    potential: Callable[[complex, float], complex],
    x0: complex = 0j,
) -> ComplexProcessPath:
    """Interacting process with drift coefficient ``V(X_k, t_k)``.

    ``X_k`` is the position before step ``k``; exceptions raised by
    ``potential`` propagate unchanged.
    """
    d = decompose(w)
    drift = np.empty(w.n, dtype=np.complex128)
    x = complex(x0)
    dt = w.dt
    for k in range(w.n):
        v = complex(potential(x, w.t0 + k * dt))
        drift[k] = v
        s = float(d.signs[k])
        phase = 1.0 + 0j if s > 0 else 1j
        x += (0.5 + float(d.magnitudes[k]) + (-1.0 + v * s) * dt) * phase
    return ComplexProcessPath(
        dt=dt, increments=_increments(d, drift, dt), beta="potential", x0=complex(x0), t0=w.t0
    )


def square_variation_residual(x: ComplexProcessPath, w: WienerPath, beta: complex) -> complex:
    """``sum dX**2 - [sum sign/4 + (W(T) - W(t0)) + beta T]``."""
    if len(x.increments) != w.n:
        raise ValueError(f"length mismatch: {len(x.increments)} process steps vs {w.n} increments")
    signs = decompose(w).signs
    # per-path sums in numpy's fixed pairwise order; ensembles use fsum
    squares = complex(np.sum(x.increments ** 2))
    target = 0.25 * float(np.sum(signs)) + float(np.sum(w.increments)) + complex(beta) * w.horizon
    return squares - target


def residual_for_path(beta: complex) -> Callable[[WienerPath], complex]:
    """Per-path residual closure, suitable for :func:`paths.ensemble_map`."""

    def fn(w: WienerPath) -> complex:
        return square_variation_residual(sample_free(w, beta), w, beta)

    return fn
