import math

import numpy as np
import pytest

from sqrtproc.paths import WienerPath, decompose, ensemble_map, generate_wiener, ordered_mean_stderr
from sqrtproc.sqrt_process import (
    PHASE_MEAN,
    PHASE_VARIANCE,
    PhasePath,
    phase_formula,
    phase_moment_stderrs,
    phase_moments,
    phase_path,
    residual_for_path,
    sample_free,
    sample_potential,
    square_variation_residual,
)


def path(*inc, dt=0.01):
    return WienerPath.from_increments(list(inc), dt=dt)


def test_phase_values():
    ph = phase_path(decompose(path(0.1, -0.2, 0.3))).phases
    assert ph.tolist() == [1, 1j, 1]


def test_phase_formula_is_two_valued_and_squares_to_sign():
    signs = np.array([1.0, -1.0])
    ph = phase_formula(signs)
    assert ph.tolist() == [1 + 0j, 1j]
    assert np.array_equal(ph ** 2, signs.astype(complex))


def test_phase_moments_large_sample():
    n = 10**6
    ph = phase_path(decompose(generate_wiener(n, 1.0 / n, 17)))
    m, v = phase_moments(ph)
    _, se_v = phase_moment_stderrs(ph)
    assert abs(m - PHASE_MEAN) < 4 * (math.sqrt(2) / 2) / math.sqrt(n)
    assert abs(v - PHASE_VARIANCE) < 4 * se_v


def test_population_moments_of_fair_coin():
    # exact two-point distribution: E[Phi] = (1+i)/2, E[(Phi-mu)^2] = -i/2
    m, v = phase_moments(PhasePath(np.array([1, 1j])))
    assert m == PHASE_MEAN
    assert v == pytest.approx(PHASE_VARIANCE, abs=1e-16)


def test_phase_moments_all_up():
    m, v = phase_moments(PhasePath(np.ones(10, dtype=complex)))
    assert m == 1
    assert v == 0


def test_phase_moments_empty():
    with pytest.raises(ValueError):
        phase_moments(PhasePath(np.array([], dtype=complex)))


def test_sample_free_up_step():
    x = sample_free(path(0.2), beta=0)
    assert x.increments[0] == pytest.approx(0.69, abs=1e-15)


def test_sample_free_down_step():
    x = sample_free(path(-0.2), beta=0)
    assert x.increments[0] == pytest.approx(0.69j, abs=1e-15)


def test_sample_free_degenerate_bracket():
    x = sample_free(path(0.0, dt=1e-12), beta=0)
    assert x.increments[0] == pytest.approx(0.5, abs=1e-11)


def test_sample_free_beta_enters_with_sign():
    x = sample_free(path(0.2, -0.2), beta=2.0)
    # up: 1/2 + 0.2 + (-1 + 2) 0.01; down: (1/2 + 0.2 + (-1 - 2) 0.01) i
    np.testing.assert_allclose(x.increments, [0.71, 0.67j], atol=1e-15)


def test_potential_zero_equals_free():
    w = generate_wiener(200, 0.005, 3)
    a = sample_potential(w, lambda x, t: 0.0)
    b = sample_free(w, 0)
    assert a.increments.tobytes() == b.increments.tobytes()


def test_potential_constant_equals_free_bitwise():
    w = generate_wiener(200, 0.005, 3)
    c = 0.7 - 0.2j
    a = sample_potential(w, lambda x, t: c)
    b = sample_free(w, c)
    assert a.increments.tobytes() == b.increments.tobytes()


def test_potential_is_evaluated_before_the_step():
    seen = []

    def pot(x, t):
        seen.append((x, t))
        return x

    out = sample_potential(path(0.1), pot)
    assert seen == [(0j, 0.0)]
    assert out.increments[0] == pytest.approx(0.59, abs=1e-15)


def test_potential_tracks_running_position():
    seen = []
    w = path(0.1, -0.1, 0.2)
    out = sample_potential(w, lambda x, t: seen.append(x) or 0.0)
    np.testing.assert_allclose(seen, out.values()[:-1], atol=1e-15)


def test_potential_errors_propagate():
    def bad(x, t):
        raise RuntimeError("outside domain")

    with pytest.raises(RuntimeError, match="outside domain"):
        sample_potential(path(0.1), bad)


def test_residual_single_step_closed_form():
    w = path(0.0)
    r = square_variation_residual(sample_free(w, 0), w, 0)
    # dX = 1/2 - 0.01, target = 1/4
    assert r == pytest.approx(0.49**2 - 0.25, abs=1e-15)


def test_residual_length_mismatch():
    with pytest.raises(ValueError):
        square_variation_residual(sample_free(path(0.1, 0.2), 0), path(0.1), 0)


def test_residual_is_real_for_real_beta():
    w = generate_wiener(500, 0.002, 8)
    r = square_variation_residual(sample_free(w, 0.3), w, 0.3)
    assert r.imag == 0.0


def _residual_stats(n, m, seed):
    r = ensemble_map(residual_for_path(0.0), m, n, 1.0 / n, seed)
    mean, se = ordered_mean_stderr([z.real for z in r])
    rms = math.sqrt(math.fsum(abs(z) ** 2 for z in r) / len(r))
    return mean, se, rms


def test_residual_mean_zero_and_rms_scaling():
    m = 3000
    mean1, se1, rms1 = _residual_stats(10**3, m, 21)
    mean4, se4, rms4 = _residual_stats(4 * 10**3, m, 22)
    assert abs(mean1) < 4 * se1
    assert abs(mean4) < 4 * se4
    assert abs(rms4 / rms1 - 0.5) <= 0.15
    # leading fluctuation has variance 2 T dt
    assert rms1 == pytest.approx(math.sqrt(2e-3), rel=0.1)
