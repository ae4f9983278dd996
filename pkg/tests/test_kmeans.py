"""Clustering tests with an exhaustive two-partition SSE oracle."""

import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from botflow.analytics import EmptyInput, KTooLarge, kmeans


def cluster_sse(points):
    if not points:
        return 0.0
    mean = sum(points) / len(points)
    return sum((p - mean) ** 2 for p in points)


def best_two_partition_sse(points):
    """Minimum SSE over every split of 1-D points into two non-empty groups."""
    n = len(points)
    best = math.inf
    for mask in range(1, 2**n - 1):
        a = [p for i, p in enumerate(points) if mask >> i & 1]
        b = [p for i, p in enumerate(points) if not mask >> i & 1]
        best = min(best, cluster_sse(a) + cluster_sse(b))
    return best


def groups_of(points, result):
    groups = [[] for _ in result.centroids]
    for point, idx in zip(points, result.assignments):
        groups[idx].append(point)
    return [tuple(sorted(g)) for g in groups]


def test_two_band_example():
    points = [190, 200, 210, 4800, 5000]
    result = kmeans(points, 2, seed=0)
    assert sorted(groups_of(points, result)) == [(190, 200, 210), (4800, 5000)]
    assert sorted(result.centroids) == [(200.0,), (4900.0,)]
    assert result.sse == 20200.0
    assert result.sse == best_two_partition_sse(points)


def test_matches_partition_oracle_on_separated_bands():
    rng = random.Random(5)
    for _ in range(20):
        low = [rng.randint(100, 300) for _ in range(rng.randint(1, 5))]
        high = [rng.randint(4000, 6000) for _ in range(rng.randint(1, 4))]
        points = low + high
        rng.shuffle(points)
        result = kmeans(points, 2, seed=0)
        assert result.sse == pytest.approx(best_two_partition_sse(points))


def test_k1_centroid_is_mean():
    points = [1.0, 2.0, 4.0, 9.0]
    result = kmeans(points, 1, seed=0)
    assert result.centroids == ((4.0,),)
    assert result.assignments == (0, 0, 0, 0)


def test_k_equals_distinct_points():
    points = [3.0, 8.0, 1.0]
    result = kmeans(points, 3, seed=0)
    assert result.sse == 0.0
    assert sorted(result.centroids) == [(1.0,), (3.0,), (8.0,)]


def test_duplicates_weight_the_mean():
    result = kmeans([0, 0, 0, 10], 2, seed=0)
    assert sorted(result.centroids) == [(0.0,), (10.0,)]
    assert result.sse == 0.0


def test_invalid_inputs():
    with pytest.raises(EmptyInput):
        kmeans([], 1)
    with pytest.raises(KTooLarge):
        kmeans([1, 1, 2], 3)
    with pytest.raises(ValueError):
        kmeans([1, 2], 0)


def test_vector_points():
    points = [(0, 0), (0, 1), (10, 10), (11, 10)]
    result = kmeans(points, 2, seed=0)
    assert sorted(groups_of(points, result)) == [
        ((0, 0), (0, 1)),
        ((10, 10), (11, 10)),
    ]
    assert sorted(result.centroids) == [(0.0, 0.5), (10.5, 10.0)]


@given(
    st.lists(st.integers(0, 100), min_size=2, max_size=20),
    st.integers(1, 4),
)
@settings(deadline=None)
def test_assignments_pick_nearest_centroid(values, k):
    k = min(k, len(set(values)))
    result = kmeans(values, k, seed=0)
    for value, idx in zip(values, result.assignments):
        dists = [
            (value - centroid[0]) ** 2 for centroid in result.centroids
        ]
        assert dists[idx] == min(dists)
        assert idx == dists.index(min(dists))


@given(
    st.lists(st.integers(0, 100), min_size=2, max_size=20),
    st.integers(1, 4),
)
@settings(deadline=None)
def test_sse_history_non_increasing(values, k):
    k = min(k, len(set(values)))
    result = kmeans(values, k, seed=0)
    assert result.iterations <= 100
    history = result.sse_history
    assert history
    assert all(later <= earlier + 1e-9 for earlier, later in zip(history, history[1:]))
    assert result.sse == history[-1]


@given(
    st.lists(st.integers(0, 100), min_size=2, max_size=12),
    st.integers(1, 3),
    st.randoms(use_true_random=False),
)
@settings(deadline=None)
def test_input_order_invariance(values, k, rnd):
    k = min(k, len(set(values)))
    shuffled = list(values)
    rnd.shuffle(shuffled)
    a = kmeans(values, k, seed=3)
    b = kmeans(shuffled, k, seed=3)
    assert a.sse == b.sse
    assert sorted(a.centroids) == sorted(b.centroids)
    assert sorted(groups_of(values, a)) == sorted(groups_of(shuffled, b))


def test_seed_is_inert_without_ties():
    points = [190, 200, 210, 4800, 5000]
    results = [kmeans(points, 2, seed=s) for s in (0, 1, 99)]
    assert all(r == results[0] for r in results)
