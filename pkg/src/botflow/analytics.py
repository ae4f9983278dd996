"""Numeric kernels shared by both detection engines.

Warped-distance comparison of packet-rate series, Lloyd's clustering with a
deterministic farthest-point init, Spearman rank correlation, and token-set
similarity. Everything here is a pure function of its arguments.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence


class EmptySeries(ValueError):
    """A series needs at least one point."""


class EmptyInput(ValueError):
    """No points were given to cluster."""


class KTooLarge(ValueError):
    """k exceeds the number of distinct points."""


class LengthMismatch(ValueError):
    """Paired sequences must have equal length."""


class DegenerateInput(ValueError):
    """Rank correlation is undefined for a constant or too-short series."""


@dataclass(frozen=True)
class Series:
    """A sampled scalar signal, typically packets/sec at 5 second steps."""

    points: tuple[float, ...]
    step_seconds: float = 5.0

    def __post_init__(self) -> None:
        pts = tuple(float(p) for p in self.points)
        if not pts:
            raise EmptySeries("series needs at least one point")
        if any(not math.isfinite(p) for p in pts):
            raise ValueError("series points must be finite")
        if self.step_seconds <= 0:
            raise ValueError("step_seconds must be positive")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class DtwResult:
    distance: float
    accumulated: float
    normalizer: float
    path: tuple[tuple[int, int], ...]


def _as_series(s: Series | Sequence[float]) -> Series:
    return s if isinstance(s, Series) else Series(tuple(s))


def dtw_distance(a: Series | Sequence[float], b: Series | Sequence[float]) -> DtwResult:
    """Warped distance between two series.

    Alignment steps cost the point distance once for horizontal/vertical moves
    and twice for diagonal moves; the first cell costs twice its point
    distance. `accumulated` is the minimal warped cost, `distance` divides it
    by the path normalizer n + m. The returned path uses 1-based index pairs
    from (1, 1) to (n, m); cost ties break diagonal first, then vertical.
    """
    x = _as_series(a).points
    y = _as_series(b).points
    n, m = len(x), len(y)

    g = [[0.0] * m for _ in range(n)]
    g[0][0] = 2.0 * abs(x[0] - y[0])
    for i in range(1, n):
        g[i][0] = g[i - 1][0] + abs(x[i] - y[0])
    for j in range(1, m):
        g[0][j] = g[0][j - 1] + abs(x[0] - y[j])
    for i in range(1, n):
        row, prev = g[i], g[i - 1]
        xi = x[i]
        for j in range(1, m):
            d = abs(xi - y[j])
            row[j] = min(row[j - 1] + d, prev[j - 1] + 2.0 * d, prev[j] + d)

    path = [(n, m)]
    i, j = n - 1, m - 1
    while i > 0 or j > 0:
        d = abs(x[i] - y[j])
        if i > 0 and j > 0 and g[i][j] == g[i - 1][j - 1] + 2.0 * d:
            i, j = i - 1, j - 1
        elif i > 0 and g[i][j] == g[i - 1][j] + d:
            i -= 1
        else:
            j -= 1
        path.append((i + 1, j + 1))
    path.reverse()

    accumulated = g[n - 1][m - 1]
    normalizer = float(n + m)
    return DtwResult(
        distance=accumulated / normalizer,
        accumulated=accumulated,
        normalizer=normalizer,
        path=tuple(path),
    )


@dataclass(frozen=True)
class KMeansResult:
    assignments: tuple[int, ...]
    centroids: tuple[tuple[float, ...], ...]
    sse: float
    iterations: int
    sse_history: tuple[float, ...] = ()


def _as_vectors(points: Sequence) -> list[tuple[float, ...]]:
    vectors = []
    for p in points:
        if isinstance(p, (int, float)):
            vectors.append((float(p),))
        else:
            vectors.append(tuple(float(v) for v in p))
    if vectors and any(len(v) != len(vectors[0]) for v in vectors):
        raise ValueError("points must share one dimension")
    return vectors


def _sqdist(a: tuple[float, ...], b: tuple[float, ...]) -> float:
    return sum((u - v) ** 2 for u, v in zip(a, b))


def _nearest(point: tuple[float, ...], centroids: Sequence[tuple[float, ...]]) -> int:
    best, best_d = 0, _sqdist(point, centroids[0])
    for idx in range(1, len(centroids)):
        d = _sqdist(point, centroids[idx])
        if d < best_d:
            best, best_d = idx, d
    return best


def kmeans(points: Sequence, k: int, seed: int = 0, max_iterations: int = 100) -> KMeansResult:
    """Lloyd's clustering with deterministic farthest-point seeding.

    Seeding starts at the lexicographically smallest distinct point and then
    repeatedly takes the point farthest from its nearest chosen centroid; the
    seed only decides among exactly tied candidates. Points are processed in a
    canonical sorted order, so the result is invariant to input order.
    Assignment ties go to the lowest centroid index; an emptied cluster keeps
    its previous centroid.
    """
    vectors = _as_vectors(points)
    if not vectors:
        raise EmptyInput("no points to cluster")
    if k < 1:
        raise ValueError("k must be at least 1")
    distinct = sorted(set(vectors))
    if k > len(distinct):
        raise KTooLarge(f"k={k} exceeds {len(distinct)} distinct points")

    rng = random.Random(seed)
    centroids: list[tuple[float, ...]] = [distinct[0]]
    while len(centroids) < k:
        best_d = -1.0
        candidates: list[tuple[float, ...]] = []
        for p in distinct:
            d = min(_sqdist(p, c) for c in centroids)
            if d > best_d:
                best_d, candidates = d, [p]
            elif d == best_d:
                candidates.append(p)
        pick = candidates[0] if len(candidates) == 1 else candidates[rng.randrange(len(candidates))]
        centroids.append(pick)

    order = sorted(range(len(vectors)), key=lambda i: vectors[i])
    canonical = [vectors[i] for i in order]
    dim = len(canonical[0])

    assignments: list[int] = []
    history: list[float] = []
    iterations = 0
    for _ in range(max_iterations):
        iterations += 1
        new_assignments = [_nearest(p, centroids) for p in canonical]
        sums = [[0.0] * dim for _ in range(k)]
        counts = [0] * k
        for p, idx in zip(canonical, new_assignments):
            counts[idx] += 1
            for axis in range(dim):
                sums[idx][axis] += p[axis]
        centroids = [
            tuple(s / counts[idx] for s in sums[idx]) if counts[idx] else centroids[idx]
            for idx, _ in enumerate(centroids)
        ]
        history.append(
            sum(_sqdist(p, centroids[idx]) for p, idx in zip(canonical, new_assignments))
        )
        if new_assignments == assignments:
            break
        assignments = new_assignments

    by_input = [0] * len(vectors)
    for canonical_pos, input_idx in enumerate(order):
        by_input[input_idx] = assignments[canonical_pos]
    return KMeansResult(
        assignments=tuple(by_input),
        centroids=tuple(centroids),
        sse=history[-1],
        iterations=iterations,
        sse_history=tuple(history),
    )


@dataclass(frozen=True)
class SpearmanResult:
    rho: float
    rank_diffs: tuple[float, ...]


def _average_ranks(values: Sequence[float]) -> list[float]:
    n = len(values)
    order = sorted(range(n), key=lambda i: values[i])
    ranks = [0.0] * n
    i = 0
    while i < n:
        j = i
        while j + 1 < n and values[order[j + 1]] == values[order[i]]:
            j += 1
        shared = (i + j) / 2 + 1
        for t in range(i, j + 1):
            ranks[order[t]] = shared
        i = j + 1
    return ranks


def _pearson(x: Sequence[float], y: Sequence[float]) -> float:
    n = len(x)
    mx = sum(x) / n
    my = sum(y) / n
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = sum((a - mx) ** 2 for a in x)
    syy = sum((b - my) ** 2 for b in y)
    return sxy / math.sqrt(sxx * syy)


def spearman_rho(x: Sequence[float], y: Sequence[float]) -> SpearmanResult:
    """Spearman rank correlation with average-rank tie handling.

    Distinct ranks use the closed form 1 - 6*sum(d^2)/(n(n^2-1)); ties fall
    back to Pearson correlation of the rank vectors. Identical rank vectors
    short-circuit to exactly 1.0.
    """
    if len(x) != len(y):
        raise LengthMismatch(f"series lengths differ: {len(x)} vs {len(y)}")
    n = len(x)
    if n < 2:
        raise DegenerateInput("need at least two samples")
    if len(set(x)) < 2 or len(set(y)) < 2:
        raise DegenerateInput("rank correlation undefined for a constant series")

    rx = _average_ranks(x)
    ry = _average_ranks(y)
    diffs = tuple(a - b for a, b in zip(rx, ry))
    if rx == ry:
        rho = 1.0
    elif len(set(x)) == n and len(set(y)) == n:
        rho = 1.0 - 6.0 * sum(d * d for d in diffs) / (n * (n * n - 1))
    else:
        rho = _pearson(rx, ry)
    return SpearmanResult(rho=rho, rank_diffs=diffs)


def token_jaccard(a: set, b: set) -> float:
    """Set overlap |a & b| / |a | b|; two empty sets count as identical."""
    a, b = set(a), set(b)
    if not a and not b:
        return 1.0
    return len(a & b) / len(a | b)
