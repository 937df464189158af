import math
from fractions import Fraction

import pytest

from sqrtproc.paths import WienerPath, ensemble_map, generate_wiener, ordered_mean_stderr
from sqrtproc.regularization import (
    DivergentSeries,
    Method,
    RegularizedSum,
    UnsupportedSeriesError,
    abs_integral_mean_square,
    abs_integral_mean_square_exact,
    abs_integral_mean_square_mc,
    abs_sum,
    assign_divergent,
    sign_integral_stats,
    sign_sum,
)


def test_all_ones_is_zeta_zero():
    assert assign_divergent(DivergentSeries.ALL_ONES) == Fraction(-1, 2)


def test_alternating_units():
    assert assign_divergent("alternating_units") == Fraction(-1, 2)


@pytest.mark.parametrize("kind", ["harmonic", "sum_of_i", 3])
def test_unlicensed_series_rejected(kind):
    with pytest.raises(UnsupportedSeriesError):
        assign_divergent(kind)


def test_raw_mean_square_n100():
    r = abs_integral_mean_square(100, regularize=False)
    assert r.method is Method.NONE
    assert r.raw_value == pytest.approx(63.66197723675813, rel=1e-15)
    assert r.raw_value == r.regularized_value


def test_regularized_mean_square_n100():
    r = abs_integral_mean_square(100, regularize=True)
    assert r.method is Method.ZETA
    assert r.regularized_value == pytest.approx((2 / math.pi) / 400, rel=1e-15)
    assert r.regularized_value == pytest.approx(1.5915494309189535e-03, rel=1e-15)


def test_raw_grows_linearly_regularized_decays():
    ns = [10, 10**2, 10**3, 10**4]
    raws = [abs_integral_mean_square(n, False).raw_value for n in ns]
    regs = [abs_integral_mean_square(n, True).regularized_value for n in ns]
    for n, r in zip(ns, raws):
        assert r == pytest.approx(2 / math.pi * n, rel=1e-15)
    assert all(a > b for a, b in zip(regs, regs[1:]))
    assert regs[-1] < 2e-5


def test_zero_partition_rejected():
    with pytest.raises(ValueError):
        abs_integral_mean_square(0, True)


def test_regularized_sum_invariant():
    with pytest.raises(ValueError):
        RegularizedSum(n=1, raw_value=1.0, regularized_value=2.0, method=Method.NONE)


def test_exact_formula_differs_by_diagonal_constant():
    for n in (1, 10, 1000):
        diff = abs_integral_mean_square_exact(n) - abs_integral_mean_square(n, False).raw_value
        assert diff == pytest.approx(1 - 2 / math.pi, abs=1e-9)


def test_monte_carlo_matches_unregularized_formula():
    n, m = 10**3, 4000
    paths = [generate_wiener(n, 1.0 / n, 99, i) for i in range(m)]
    mc, se = abs_integral_mean_square_mc(paths)
    assert abs(mc - abs_integral_mean_square(n, False).raw_value) < 4 * se
    assert abs(mc - abs_integral_mean_square_exact(n)) < 4 * se


def test_sign_integral_null_on_average():
    n, m = 10**3, 10**4
    sums = ensemble_map(sign_sum, m, n, 1.0 / n, 5)
    mean, se = ordered_mean_stderr(sums)
    assert abs(mean) < 4 * se
    # Var(S_n) = n for independent +-1 steps
    assert se == pytest.approx(math.sqrt(n / m), rel=0.05)


def test_sign_integral_relative_mean_small():
    n, m = 10**4, 10**4
    mean, _ = ordered_mean_stderr(ensemble_map(sign_sum, m, n, 1.0 / n, 6))
    assert abs(mean) / n < 1e-2


def test_sign_integral_degenerate_path():
    p = WienerPath.from_increments([0.1] * 50, dt=0.02)
    assert sign_integral_stats([p]) == (50.0, 0.0)


def test_ensemble_validation():
    with pytest.raises(ValueError):
        sign_integral_stats([])
    with pytest.raises(ValueError):
        sign_integral_stats([generate_wiener(3, 0.1), generate_wiener(4, 0.1)])


def test_abs_sum():
    assert abs_sum(WienerPath.from_increments([-0.5, 0.25], dt=1.0)) == 0.75
