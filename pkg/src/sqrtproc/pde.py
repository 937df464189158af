"""Complex-coefficient Kolmogorov equation on a uniform 1-D grid.

Solves

    psi_t = A psi_x + c (V psi)_x + D psi_xx,     c = (1 - i)/4,

with zero Dirichlet boundaries by trapezoidal (Crank-Nicolson) stepping and
centered second-order differences. For the free equation with
``beta = i/2`` the drift vanishes and the equation reduces to
``psi_t = -(i/4) psi_xx``, whose Gaussian solution is known in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

import numpy as np
from scipy.linalg import solve_banded

POTENTIAL_COEFF = (1 - 1j) / 4
BOUNDARY_TOL = 1e-12

# printed equation: drift constant, drift coefficient of beta, diffusion
PRINTED = {"drift": -(1 + 1j) / 4, "beta": (1 - 1j) / 2, "diffusion": -0.25j}
# read off the stated moments mu = -(1+i)/2 + beta (1-i)/2, sigma^2 = -i/4,
# with the usual forward-equation diffusion sigma^2 / 2
MOMENTS = {"drift": -(1 + 1j) / 2, "beta": (1 - 1j) / 2, "diffusion": -0.25j / 2}
CONVENTIONS = {"printed": PRINTED, "moments": MOMENTS}

Potential = Callable[[np.ndarray, float], np.ndarray]


class GridTooNarrowError(ValueError):
    """The packet has non-negligible amplitude at the grid boundary."""


class NumericalBlowupError(ArithmeticError):
    def __init__(self, step: int):
        super().__init__(f"non-finite values after step {step}")
        self.step = step


@dataclass(frozen=True)
class GridSpec:
    x_min: float
    x_max: float
    dx: float

    def __post_init__(self):
        if not self.dx > 0:
            raise ValueError(f"dx must be positive, got {self.dx}")
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")
        if self.size < 3:
            raise ValueError("grid needs at least 3 points")

    @property
    def size(self) -> int:
        return int(round((self.x_max - self.x_min) / self.dx)) + 1

    def points(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.size)


@dataclass(frozen=True, eq=False)
class WaveGrid:
    x_min: float
    dx: float
    values: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        if len(self.values) < 3:
            raise ValueError("grid needs at least 3 points")
        if not self.dx > 0:
            raise ValueError("dx must be positive")

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(len(self.values))

    def norm_sq(self) -> float:
        return self.dx * math.fsum(np.abs(self.values) ** 2)

    def with_values(self, values: np.ndarray, time: float | None = None) -> "WaveGrid":
        return WaveGrid(self.x_min, self.dx, values, self.time if time is None else time)


@dataclass(frozen=True)
class EvolutionCoefficients:
    A: complex
    D: complex
    V: Optional[Potential] = field(default=None, compare=False)

    @classmethod
    def free(cls, beta: complex, convention: str = "printed") -> "EvolutionCoefficients":
        k = CONVENTIONS[convention]
        return cls(A=k["drift"] + complex(beta) * k["beta"], D=k["diffusion"])

    @classmethod
    def interacting(cls, potential: Potential) -> "EvolutionCoefficients":
        return cls(A=PRINTED["drift"], D=PRINTED["diffusion"], V=potential)


def schrodinger_beta(convention: str = "printed") -> complex:
    """The ``beta`` that cancels the first-derivative term (``i/2`` as printed)."""
    k = CONVENTIONS[convention]
    return -k["drift"] / k["beta"]


def gaussian_packet(delta_x: float, grid: GridSpec) -> WaveGrid:
    """``exp(-x^2 / (2 delta_x^2)) / (pi delta_x^2)^(1/4)`` sampled on ``grid``."""
    if not delta_x > 0:
        raise ValueError(f"delta_x must be positive, got {delta_x}")
    x = grid.points()
    psi = np.exp(-(x ** 2) / (2.0 * delta_x ** 2)) / (math.pi * delta_x ** 2) ** 0.25
    edge = max(abs(psi[0]), abs(psi[-1]))
    if edge >= BOUNDARY_TOL:
        raise GridTooNarrowError(f"boundary amplitude {edge:.3e} >= {BOUNDARY_TOL:g}")
    return WaveGrid(grid.x_min, grid.dx, psi.astype(np.complex128), 0.0)


def analytic_free(delta_x: float, t: float, grid: GridSpec, diffusion: complex = PRINTED["diffusion"]) -> WaveGrid:
    """Exact solution of ``psi_t = D psi_xx`` from :func:`gaussian_packet` data.

    The Gaussian keeps its shape with complex width ``s(t) = dx0^2 + 2 D t``
    (``dx0^2 - i t / 2`` for the printed ``D = -i/4``).
    """
    if not delta_x > 0:
        raise ValueError(f"delta_x must be positive, got {delta_x}")
    if t == 0:
        return gaussian_packet(delta_x, grid)
    x = grid.points()
    s0 = delta_x ** 2
    s = s0 + 2.0 * complex(diffusion) * t
    psi = np.sqrt(s0 / s) * np.exp(-(x ** 2) / (2.0 * s)) / (math.pi * s0) ** 0.25
    return WaveGrid(grid.x_min, grid.dx, psi, float(t))


def analytic_free_variance(delta_x: float, t: float) -> float:
    """Position variance of ``|psi|^2`` for the printed equation: ``dx0^2/2 + t^2/(8 dx0^2)``."""
    return delta_x ** 2 / 2 + t ** 2 / (8 * delta_x ** 2)


def moments(psi: WaveGrid) -> tuple[float, float, float]:
    """Norm ``dx sum |psi|^2`` plus mean and variance of the normalized density."""
    rho = np.abs(psi.values) ** 2
    norm = psi.dx * math.fsum(rho)
    if not norm > 0:
        raise ValueError("wavefunction has zero norm")
    x = psi.x
    mean = psi.dx * math.fsum(x * rho) / norm
    var = psi.dx * math.fsum((x - mean) ** 2 * rho) / norm
    return norm, mean, var


def l2_distance(a: WaveGrid, b: WaveGrid) -> float:
    if len(a.values) != len(b.values):
        raise ValueError("grids differ in size")
    return math.sqrt(a.dx * math.fsum(np.abs(a.values - b.values) ** 2))


def _operator_bands(c: EvolutionCoefficients, x: np.ndarray, t: float, dx: float):
    """Sub/main/super diagonals of the discrete right-hand side on interior points."""
    if c.V is None:
        v = np.zeros_like(x)
    else:
        v = np.broadcast_to(np.asarray(c.V(x, t), dtype=np.complex128), x.shape)
    inv2dx = 1.0 / (2.0 * dx)
    invdx2 = 1.0 / (dx * dx)
    vm = v[:-2]  # V at j-1 for interior j
    vp = v[2:]
    lower = -c.A * inv2dx - POTENTIAL_COEFF * vm * inv2dx + c.D * invdx2
    main = np.full(len(x) - 2, -2.0 * c.D * invdx2, dtype=np.complex128)
    upper = c.A * inv2dx + POTENTIAL_COEFF * vp * inv2dx + c.D * invdx2
    return lower, main, upper


def iter_evolve(psi: WaveGrid, c: EvolutionCoefficients, dt: float, steps: int) -> Iterator[WaveGrid]:
    """Yield the state after each trapezoidal step."""
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if steps < 0:
        raise ValueError("steps must be non-negative")
    x = psi.x
    m = len(x) - 2
    u = np.array(psi.values[1:-1], dtype=np.complex128)
    t = psi.time
    half = 0.5 * dt
    static = c.V is None
    bands_now = _operator_bands(c, x, t, psi.dx)
    ab = np.zeros((3, m), dtype=np.complex128)
    for step in range(1, steps + 1):
        t_next = psi.time + step * dt
        bands_next = bands_now if static else _operator_bands(c, x, t_next, psi.dx)
        lo, di, up = bands_now
        rhs = u + half * (di * u)
        rhs[1:] += half * lo[1:] * u[:-1]
        rhs[:-1] += half * up[:-1] * u[1:]
        lo_n, di_n, up_n = bands_next
        ab[0, 1:] = -half * up_n[:-1]
        ab[1, :] = 1.0 - half * di_n
        ab[2, :-1] = -half * lo_n[1:]
        u = solve_banded((1, 1), ab, rhs, check_finite=False)
        if not np.all(np.isfinite(u)):
            raise NumericalBlowupError(step)
        bands_now = bands_next
        t = t_next
        out = np.zeros(m + 2, dtype=np.complex128)
        out[1:-1] = u
        yield psi.with_values(out, t)


def evolve(psi: WaveGrid, c: EvolutionCoefficients, dt: float, steps: int) -> WaveGrid:
    out = psi
    for out in iter_evolve(psi, c, dt, steps):
        pass
    return out


def evolve_checkpoints(
    psi: WaveGrid, c: EvolutionCoefficients, dt: float, times
) -> list[WaveGrid]:
    """States at each requested time, which must be multiples of ``dt``."""
    wanted = {}
    for tt in times:
        k = int(round((tt - psi.time) / dt))
        if k < 0 or not math.isclose(psi.time + k * dt, tt, rel_tol=0, abs_tol=1e-9 * max(1.0, abs(tt))):
            raise ValueError(f"time {tt} is not reachable in steps of {dt}")
        wanted[k] = tt
    last = max(wanted)
    snaps = {0: psi} if 0 in wanted else {}
    for k, state in enumerate(iter_evolve(psi, c, dt, last), start=1):
        if k in wanted:
            snaps[k] = state
    return [snaps[k] for k in sorted(wanted)]
