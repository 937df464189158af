"""Exit criteria, one test each, at the tolerances stated for the build.

Each test records a pass/fail line that is printed in the terminal summary.
"""

import json
import random
import time
from fractions import Fraction

import pytest

from sqrtproc import checks
from sqrtproc.cli import run
from sqrtproc.ito_algebra import (
    QI,
    ItoExpr,
    Monomial,
    SqrtAnsatzCoefficients,
    V,
    corollary_ansatz,
    reduce_ansatz_square,
    theorem_target,
)


def _run_timed(fn, *args, **kwargs):
    start = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - start


def _finish(record, number, title, result, elapsed, limit):
    failed = [c.name for c in result.checks if not c.passed]
    ok = not failed and elapsed < limit
    record(number, title, ok, f"({elapsed:.1f}s < {limit}s; failed: {failed or 'none'})")
    assert not failed, failed
    assert elapsed < limit


def test_c01_symbolic_theorem(record_criterion):
    start = time.perf_counter()
    result = checks.verify_ito(mu0="1/2", samples=20)
    # plus an independent batch of 20 complex-rational mu0
    rng = random.Random(2024)
    for _ in range(20):
        mu0 = QI(Fraction(rng.randint(-99, 99), rng.randint(1, 99)), Fraction(rng.randint(1, 99), rng.randint(1, 99)))
        reduced = reduce_ansatz_square(SqrtAnsatzCoefficients.solved(mu0))
        result.add(f"mu0={mu0}", reduced == theorem_target(mu0) and reduced.monomials() == {Monomial.SIGN_DW, Monomial.DW}, str(reduced), str(theorem_target(mu0)))
    elapsed = time.perf_counter() - start
    result.checks = [c for c in result.checks if c.name != "corollary_formal_V"]
    _finish(record_criterion, 1, "symbolic theorem, 20 random mu0", result, elapsed, 1.0)


def test_c02_symbolic_corollary(record_criterion):
    start = time.perf_counter()
    reduced = reduce_ansatz_square(corollary_ansatz(V))
    target = ItoExpr({Monomial.SIGN_DW: Fraction(1, 4), Monomial.DW: 1, Monomial.DT: V})
    elapsed = time.perf_counter() - start
    result = checks.SuiteResult()
    result.add("corollary", reduced == target, str(reduced), str(target))
    _finish(record_criterion, 2, "symbolic corollary with formal V", result, elapsed, 1.0)


def test_c03_phase_moments(record_criterion):
    result, elapsed = _run_timed(checks.verify_phase, n=10**6)
    _finish(record_criterion, 3, "phase mean (1+i)/2 and variance -i/2", result, elapsed, 10.0)


def test_c04_variation_suite(record_criterion):
    result, elapsed = _run_timed(checks.verify_variation, residual=False)
    names = {c.name for c in result.checks}
    assert {"quadratic_variation", "cubic_variation_slope"} <= names
    _finish(record_criterion, 4, "quadratic/cubic variation and E|dW|", result, elapsed, 60.0)


def test_c05_regularization(record_criterion):
    result, elapsed = _run_timed(checks.verify_regularization)
    assert "abs_integral_monte_carlo_n=1000" in {c.name for c in result.checks}
    _finish(record_criterion, 5, "|dW| integral sums raw/regularized, sign integral null", result, elapsed, 60.0)


def test_c06_square_root_residual(record_criterion):
    result, elapsed = _run_timed(checks.verify_residual, paths=10**4, ns=(10**3, 4 * 10**3, 10**4))
    assert {"residual_mean_n=1000", "residual_mean_n=10000", "residual_rms_halving"} <= {c.name for c in result.checks}
    _finish(record_criterion, 6, "square-root residual mean and RMS halving", result, elapsed, 120.0)


def test_c07_pde_oracle(record_criterion):
    result, elapsed = _run_timed(checks.verify_pde, spread_times=())
    assert {"oracle_l2_error", "norm_drift", "second_order_convergence"} <= {c.name for c in result.checks}
    _finish(record_criterion, 7, "CN solver vs Gaussian oracle, beta=i/2", result, elapsed, 120.0)


def test_c08_quadratic_spreading(record_criterion):
    result, elapsed = _run_timed(checks.verify_pde, cross_check=False)
    result.checks = [c for c in result.checks if c.name == "quadratic_spreading"]
    assert result.checks
    _finish(record_criterion, 8, "variance quadratic in t", result, elapsed, 120.0)


def test_c09_binomial_map(record_criterion):
    result, elapsed = _run_timed(checks.verify_map, n_max=64, ladder=(16, 64, 256))
    _finish(record_criterion, 9, "binomial map normalization and local limit", result, elapsed, 5.0)


def _strip_timing(path):
    report = json.loads(path.read_text(encoding="utf-8"))
    report.pop("timing")
    return json.dumps(report, sort_keys=True)


def _artifacts(directory):
    return {
        p.name: (_strip_timing(p) if p.name.endswith(".report.json") else p.read_bytes())
        for p in sorted(directory.iterdir())
    }


@pytest.mark.slow
def test_c10_determinism(record_criterion, tmp_path):
    start = time.perf_counter()
    dirs = {}
    codes = {}
    for label, workers in (("w1a", 1), ("w1b", 1), ("w8", 8)):
        d = tmp_path / label
        codes[label] = run(["all", "--seed", "42", "--workers", str(workers), "--output-dir", str(d)])
        dirs[label] = _artifacts(d)
    elapsed = time.perf_counter() - start
    result = checks.SuiteResult()
    result.add("exit codes", set(codes.values()) == {0}, codes, 0)
    result.add("rerun identical", dirs["w1a"] == dirs["w1b"], sorted(dirs["w1a"]), sorted(dirs["w1b"]))
    result.add("workers 1 vs 8 identical", dirs["w1a"] == dirs["w8"], sorted(dirs["w1a"]), sorted(dirs["w8"]))
    _finish(record_criterion, 10, "all --seed 42 reproducible across runs and workers", result, elapsed, 300.0)
