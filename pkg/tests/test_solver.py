import math

import numpy as np
import pytest

from elasticmds import (
    Configuration,
    DissimilarityData,
    SolveOptions,
    ValidationError,
    builtin_dataset,
    elastic_stress,
    log_stress,
    solve,
    stress_report,
)
from elasticmds.core import pair_distances

from .conftest import euclidean_instance, random_instance


@pytest.mark.parametrize(
    "kwargs",
    [dict(level="interval"), dict(p=0), dict(max_iter=0), dict(eps=0.0), dict(eps=float("nan"))],
)
def test_invalid_options(kwargs):
    with pytest.raises(ValidationError):
        SolveOptions(**kwargs)


def test_exact_data_converges_immediately(rng):
    data, _ = euclidean_instance(rng, 10, 2)
    res = solve(data, SolveOptions(level="ratio"))
    assert res.converged
    assert res.iterations <= 2
    assert res.stress < 1e-10
    np.testing.assert_array_equal(res.delta_hat, data.delta)


def test_trace_shape_and_convergence_flag(rng):
    data = random_instance(rng, 12, 2)
    res = solve(data, SolveOptions(level="ordinal"))
    assert len(res.stress_trace) == res.iterations + 1
    assert res.converged
    assert abs(res.stress_trace[-2] - res.stress_trace[-1]) < 1e-6
    assert res.stress == pytest.approx(elastic_stress(data, res.config, res.delta_hat), rel=1e-12)


def test_max_iter_exhaustion_returns_partial(rng):
    data = random_instance(rng, 12, 2, noise=0.8)
    res = solve(data, SolveOptions(level="ratio", max_iter=3, eps=1e-15))
    assert not res.converged
    assert res.iterations == 3 and len(res.stress_trace) == 4


def test_relative_convergence_option(rng):
    data = random_instance(rng, 10, 2, noise=0.5)
    absolute = solve(data, SolveOptions(level="ratio", eps=1e-6))
    relative = solve(data, SolveOptions(level="ratio", eps=1e-6, relative=True))
    assert relative.converged
    t = relative.stress_trace
    assert abs(t[-2] - t[-1]) / t[-2] < 1e-6
    assert absolute.iterations != relative.iterations or absolute.stress == relative.stress


def test_ordinal_delta_hat_is_monotone(rng):
    data = random_instance(rng, 15, 2, noise=0.5)
    res = solve(data, SolveOptions(level="ordinal"))
    dh = res.delta_hat[data.order]
    assert np.all(np.diff(dh) >= -1e-12 * dh[1:])
    assert np.all(res.delta_hat > 0)


def test_config_is_centered(rng):
    res = solve(random_instance(rng, 9, 3), SolveOptions(p=3))
    assert np.all(np.abs(res.config.coords.mean(axis=0)) < 1e-12)


@pytest.mark.parametrize("level", ["ratio", "ordinal"])
def test_deterministic(rng, level):
    data = random_instance(rng, 14, 2)
    a = solve(data, SolveOptions(level=level))
    b = solve(data, SolveOptions(level=level))
    assert a.stress_trace == b.stress_trace
    assert a.config.coords.tobytes() == b.config.coords.tobytes()


def test_ratio_mode_ignores_order(rng):
    data = DissimilarityData(5, np.array([1.0, 2.0, 2.0, 3.0, 2.0, 1.0, 3.0, 1.5, 2.5, 2.0]))
    other = np.array(data.order)
    block = np.flatnonzero(data.delta[other] == 2.0)
    other[block] = other[block][::-1]
    swapped = DissimilarityData(5, data.delta, order=other)
    a = solve(data, SolveOptions(level="ratio"))
    b = solve(swapped, SolveOptions(level="ratio"))
    assert a.stress_trace == b.stress_trace


def test_ordinal_not_worse_than_ratio(rng):
    for _ in range(20):
        n = int(rng.integers(5, 15))
        data = random_instance(rng, n, 2, noise=0.5)
        r = solve(data, SolveOptions(level="ratio"))
        o = solve(data, SolveOptions(level="ordinal"))
        assert o.stress <= r.stress + 1e-9


def test_descent_with_weights_and_ties(rng):
    for _ in range(30):
        n = int(rng.integers(4, 12))
        data = random_instance(rng, n, 2, noise=0.6, weights=True)
        data = DissimilarityData(n, np.round(data.delta, 1) + 0.05, data.weights)
        for level in ("ratio", "ordinal"):
            t = solve(data, SolveOptions(level=level)).stress_trace
            assert np.all(np.diff(t) <= 1e-12)


class TestReport:
    def test_zero_stress(self, rng):
        data, _ = euclidean_instance(rng, 8, 2)
        rep = solve(data, SolveOptions(level="ratio")).report
        for v in rep.as_dict().values():
            assert v == pytest.approx(0, abs=1e-10)

    def test_uses_delta_hat(self, rng):
        data = random_instance(rng, 10, 2, noise=0.5)
        res = solve(data, SolveOptions(level="ordinal"))
        rep = stress_report(data, res)
        assert rep.log_stress == pytest.approx(log_stress(data, res.config, res.delta_hat))
        assert rep.elastic == pytest.approx(res.stress, rel=1e-12)
        assert abs(rep.elastic - rep.ratio_form) <= 1e-12 * rep.elastic


def test_ekman_golden():
    data = builtin_dataset("ekman")
    ratio = solve(data, SolveOptions(level="ratio"))
    ordinal = solve(data, SolveOptions(level="ordinal"))
    assert ratio.stress == pytest.approx(2.3268637, rel=1e-7)
    assert ordinal.stress == pytest.approx(0.056998, rel=1e-5)
    assert ordinal.report.log_stress == pytest.approx(0.0581521, rel=1e-6)


def test_morse_runs():
    data = builtin_dataset("morse")
    for level in ("ratio", "ordinal"):
        res = solve(data, SolveOptions(level=level))
        assert res.converged and math.isfinite(res.stress)
    # poor fit: log-stress is far from elastic stress
    assert res.report.log_stress > 1.2 * res.stress


def test_p1_solution(rng):
    data = random_instance(rng, 8, 1)
    res = solve(data, SolveOptions(p=1))
    assert res.config.p == 1
    assert res.stress <= res.stress_trace[0]
    assert np.all(pair_distances(Configuration(res.config.coords)) >= 0)


@pytest.mark.parametrize("level", ["ratio", "ordinal"])
def test_nonfinite_aborts_with_state(monkeypatch, level):
    from elasticmds import majorize
    from elasticmds.solver import NonFiniteStressError

    step = majorize.MajorizationWorkspace.step
    monkeypatch.setattr(majorize.MajorizationWorkspace, "step", lambda self, x, d: step(self, x, d) * np.nan)
    with pytest.raises(NonFiniteStressError) as exc:
        solve(builtin_dataset("ekman"), SolveOptions(level=level))
    assert exc.value.iteration == 1
    assert len(exc.value.stress_trace) == 1
    assert exc.value.coords.shape == (14, 2)
