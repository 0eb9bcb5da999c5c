import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from elasticmds import Configuration, DissimilarityData, ValidationError, elastic_stress, update_delta, weighted_pava
from elasticmds.core import DegenerateConfigurationError

from . import oracles
from .conftest import random_instance


def test_already_monotone():
    y = [1.0, 2.0, 2.0, 5.0]
    np.testing.assert_array_equal(weighted_pava(y, [1, 2, 3, 4]), y)


@pytest.mark.parametrize(
    "targets, expected",
    [([1, 3, 2], [1, 2.5, 2.5]), ([3, 1, 2], [2, 2, 2])],
)
def test_small_cases(targets, expected):
    np.testing.assert_allclose(weighted_pava(targets, [1, 1, 1]), expected, rtol=1e-15)


def test_zero_weights():
    out = weighted_pava([5.0, 1.0, 3.0], [0.0, 1.0, 1.0])
    assert np.all(np.diff(out) >= 0)
    np.testing.assert_allclose(out[1:], [1.0, 3.0])
    with pytest.raises(ValidationError):
        weighted_pava([1.0, 2.0], [0.0, 0.0])
    with pytest.raises(ValidationError):
        weighted_pava([1.0, 2.0], [1.0])


@settings(max_examples=300, deadline=None)
@given(
    st.integers(1, 8).flatmap(
        lambda k: st.tuples(
            st.lists(st.integers(-5, 5).map(float), min_size=k, max_size=k),
            st.lists(st.sampled_from([0.5, 1.0, 2.0, 3.0]), min_size=k, max_size=k),
        )
    )
)
def test_matches_exhaustive_oracle(case):
    y, w = case
    np.testing.assert_allclose(weighted_pava(y, w), oracles.exhaustive_isotonic(y, w), atol=1e-10)


def test_linear_scaling():
    # a long fully-reversed input pools into one block
    y = np.arange(20000, 0, -1, dtype=float)
    out = weighted_pava(y, np.ones_like(y))
    np.testing.assert_allclose(out, np.full_like(y, y.mean()))


class TestUpdateDelta:
    def test_feasible_targets_are_reproduced(self):
        x = Configuration(np.array([[0.0], [1.0], [3.0], [7.0]]))
        d = np.array([1, 3, 7, 2, 6, 4], dtype=float)
        data = DissimilarityData(4, d)  # observed order equals distance order
        dh = update_delta(data, x)
        np.testing.assert_allclose(dh, d, rtol=1e-14)
        assert elastic_stress(data, x, dh) == pytest.approx(0, abs=1e-28)

    def test_hand_example(self):
        data = DissimilarityData(3, [1.0, 2.0, 3.0])
        # distances (2, 1, 3) in pair order (2,1), (3,1), (3,2)
        x = Configuration(np.array([[0.0], [2.0], [-1.0]]))
        d = [2.0, 1.0, 3.0]
        gamma = oracles.exhaustive_isotonic([-1 / v for v in d], [v * v for v in d])
        expected = [-1 / g for g in gamma]
        # frozen from the oracle: first two pairs pool at gamma = -0.6
        np.testing.assert_allclose(expected, [5 / 3, 5 / 3, 3.0], rtol=1e-15)
        dh = update_delta(data, x)
        np.testing.assert_allclose(dh, expected, rtol=1e-13)
        assert np.all(np.diff(dh) >= 0)

    def test_degenerate(self):
        data = DissimilarityData(3, [1.0, 2.0, 3.0])
        with pytest.raises(DegenerateConfigurationError):
            update_delta(data, Configuration(np.zeros((3, 2))))

    def test_coincident_points_are_clamped(self):
        data = DissimilarityData(4, np.arange(1.0, 7.0))
        x = Configuration(np.array([[0.0, 0], [0, 0], [1, 0], [0, 2]]))
        dh = update_delta(data, x)
        assert np.all(np.isfinite(dh)) and np.all(dh > 0)

    def test_monotone_and_positive(self, rng):
        for _ in range(50):
            n = int(rng.integers(4, 15))
            data = random_instance(rng, n, 2, noise=0.6)
            # create ties
            data = DissimilarityData(n, np.round(data.delta, 1) + 0.1)
            x = Configuration(rng.normal(size=(n, 2)))
            dh = update_delta(data, x)
            assert np.all(dh > 0)
            for a, b in zip(data.order[:-1], data.order[1:]):
                if data.delta[a] < data.delta[b]:
                    assert dh[a] <= dh[b] * (1 + 1e-12)
            # sorted within blocks the fitted values are non-decreasing too
            srt = dh[np.lexsort((dh, data.tie_blocks))]
            assert np.all(np.diff(srt) >= -1e-12 * srt[1:])

    def test_never_increases_stress_from_feasible(self, rng):
        for _ in range(50):
            n = int(rng.integers(4, 12))
            data = random_instance(rng, n, 2, noise=0.6, weights=True)
            x = Configuration(rng.normal(size=(n, 2)))
            before = elastic_stress(data, x)  # observed delta is itself feasible
            after = elastic_stress(data, x, update_delta(data, x))
            assert after <= before + 1e-12

    def test_primary_ties_beat_any_fixed_tie_order(self, rng):
        data = DissimilarityData(4, [1.0, 1.0, 1.0, 2.0, 2.0, 2.0])
        x = Configuration(rng.normal(size=(4, 2)))
        best = elastic_stress(data, x, update_delta(data, x))
        for perm in ([0, 1, 2, 3, 4, 5], [2, 1, 0, 5, 4, 3], [1, 0, 2, 4, 3, 5]):
            fixed = DissimilarityData(4, data.delta, order=perm)
            d = np.linalg.norm(x.coords[[1, 2, 3, 2, 3, 3]] - x.coords[[0, 0, 0, 1, 1, 2]], axis=1)
            g = np.empty(6)
            g[fixed.order] = weighted_pava((-1 / d)[fixed.order], (d**2)[fixed.order])
            assert best <= elastic_stress(data, x, -1 / g) + 1e-12
