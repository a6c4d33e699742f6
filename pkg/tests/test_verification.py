"""The check registry itself: determinism, parallel equivalence, registry."""

import numpy as np
import pytest

from coherence_speed.errors import UnknownSuite
from coherence_speed.verification import (
    SUITES,
    CheckResult,
    check_benchmark_identity,
    check_thm1_equality,
    failures_as_dicts,
    run_suite,
)


def test_every_suite_runs_and_passes_at_small_trial_counts():
    for name in SUITES:
        for res in run_suite(name, seed=1, trials=4):
            assert isinstance(res, CheckResult)
            assert res.passed, f"{name}: {res.line()}"
            assert res.line().startswith("PASS ")


def test_unknown_suite_lists_the_valid_names():
    with pytest.raises(UnknownSuite) as err:
        run_suite("not-a-suite")
    assert "thm1" in str(err.value)


def test_same_seed_reproduces_worst_values():
    a = check_thm1_equality(seed=5, trials=12)
    b = check_thm1_equality(seed=5, trials=12)
    c = check_thm1_equality(seed=6, trials=12)
    assert a.worst == b.worst
    assert a.worst != c.worst


def test_thread_pool_does_not_change_results():
    a = check_benchmark_identity(seed=3, trials=16, jobs=1)
    b = check_benchmark_identity(seed=3, trials=16, jobs=4)
    assert a.worst == b.worst


def test_dim_override_is_respected():
    res = check_thm1_equality(seed=2, trials=6, dim=3)
    assert res.passed


def test_failures_serialize_only_failed_checks():
    good = check_benchmark_identity(seed=1, trials=5)
    bad = check_benchmark_identity(seed=1, trials=5, tol=1e-30)
    assert not bad.passed
    out = failures_as_dicts([good, bad])
    assert len(out) == 1
    assert out[0]["check"] == bad.name
    assert out[0]["worst"] == bad.worst


def test_tolerance_override_propagates():
    res = check_thm1_equality(seed=1, trials=5, tol=0.5)
    assert res.tol == 0.5 and res.passed
