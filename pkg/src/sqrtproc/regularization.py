"""Divergent-sum assignments and the mean-square of the ``|dW|`` Riemann sum.

Only two divergent series are assigned values: ``1 + 1 + ...`` (zeta value
at zero) and ``-1 + 1 - 1 + ...`` (Abel sum). The assignment is a symbolic
substitution into the closed-form expressions on the grid ``t_i = i/n``
over ``[0, 1]``; Monte Carlo estimates are computed separately and only
ever compared against the unregularized formula.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .paths import WienerPath, decompose, ordered_mean_stderr


class UnsupportedSeriesError(ValueError):
    """Raised for any divergent series other than the two licensed ones."""


class DivergentSeries(enum.Enum):
    ALL_ONES = "all_ones"
    ALTERNATING_UNITS = "alternating_units"


class Method(enum.Enum):
    ZETA = "zeta"
    ABEL = "abel"
    NONE = "none"


_ASSIGNMENTS = {
    DivergentSeries.ALL_ONES: (Fraction(-1, 2), Method.ZETA),
    DivergentSeries.ALTERNATING_UNITS: (Fraction(-1, 2), Method.ABEL),
}


@dataclass(frozen=True)
class RegularizedSum:
    n: int
    raw_value: float
    regularized_value: float
    method: Method

    def __post_init__(self):
        if (self.method is Method.NONE) != (
            math.isfinite(self.raw_value) and self.raw_value == self.regularized_value
        ):
            raise ValueError("method=none iff the raw value is finite and left unchanged")


def assign_divergent(kind) -> Fraction:
    """Value assigned to a divergent series.

    ``kind`` may be a :class:`DivergentSeries` or its string value; anything
    else raises :class:`UnsupportedSeriesError`.
    """
    return assignment_method(kind)[0]


def assignment_method(kind) -> tuple[Fraction, Method]:
    try:
        series = DivergentSeries(kind.value if isinstance(kind, DivergentSeries) else kind)
    except ValueError:
        raise UnsupportedSeriesError(f"no regularization licensed for series {kind!r}") from None
    return _ASSIGNMENTS[series]


TWO_OVER_PI = 2.0 / math.pi


def _abs_integral_formula(n: int, series_value) -> float:
    # (2/pi) * (1/n) * (sum_{i=1}^n 1)^2 with a pluggable value for the sum
    return TWO_OVER_PI * float(Fraction(series_value) ** 2 / n)


def abs_integral_mean_square(n: int, regularize: bool) -> RegularizedSum:
    """``<S_n^2>`` for ``S_n = sum |W(t_i) - W(t_{i-1})|`` on ``t_i = i/n``.

    Unregularized the inner sum counts ``n`` terms and the value is
    ``(2/pi) n``; regularized it is replaced by ``zeta(0) = -1/2`` giving
    ``(2/pi) / (4n)``.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    raw = _abs_integral_formula(n, n)
    if not regularize:
        return RegularizedSum(n=n, raw_value=raw, regularized_value=raw, method=Method.NONE)
    value, method = assignment_method(DivergentSeries.ALL_ONES)
    return RegularizedSum(n=n, raw_value=raw, regularized_value=_abs_integral_formula(n, value), method=method)


def abs_integral_mean_square_exact(n: int) -> float:
    """Exact ``<S_n^2> = 1 + (n - 1) 2/pi``, keeping the diagonal ``E[dW^2]`` terms.

    The closed form above uses ``(2/pi) dt`` for every pair including
    ``i == k``; the two differ by the constant ``1 - 2/pi``.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return 1.0 + (n - 1) * TWO_OVER_PI


def abs_sum(p: WienerPath) -> float:
    return math.fsum(np.abs(p.increments))


def sign_sum(p: WienerPath) -> float:
    return float(np.sum(decompose(p).signs))


def abs_integral_mean_square_mc(paths: Iterable[WienerPath]) -> tuple[float, float]:
    """Monte Carlo ``<S_n^2>`` of the ``|dW|`` sum: (estimate, standard error)."""
    squares = [abs_sum(p) ** 2 for p in _checked(paths)]
    return ordered_mean_stderr(squares)


def sign_integral_stats(paths: Iterable[WienerPath]) -> tuple[float, float]:
    """Ensemble mean and standard error of ``S_n = sum sign(dW_i)``."""
    return ordered_mean_stderr([sign_sum(p) for p in _checked(paths)])


def _checked(paths: Iterable[WienerPath]) -> list[WienerPath]:
    paths = list(paths)
    if not paths:
        raise ValueError("ensemble must be nonempty")
    if len({p.n for p in paths}) != 1:
        raise ValueError("all paths in an ensemble must share n")
    return paths
