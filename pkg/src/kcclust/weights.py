"""Fusion weights on a k-nearest-neighbor graph.

Each point contributes Gaussian weights w_ij = exp(-||x_i - x_j||^2 / 2*sigma2^2)
to its knn nearest neighbors (a directed relation); the weights are then
symmetrized as w*_ij = (w_ij + w_ji) / 2 and stored once per unordered pair.
A pair therefore carries a positive weight exactly when at least one of its
endpoints selected the other as a neighbor.  Distances are taken in the
input space the graph is built from, not in any kernel embedding.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class WeightGraph:
    """Symmetrized positive fusion weights over point pairs.

    ``edges`` holds (i, j, weight) with i < j and weight > 0, sorted
    lexicographically.  ``knn`` and ``sigma2`` record how the graph was built.
    """

    n: int
    edges: tuple[tuple[int, int, float], ...]
    knn: int = 0
    sigma2: float = float("nan")

    def __post_init__(self):
        for i, j, w in self.edges:
            if not 0 <= i < j < self.n:
                raise ValueError(f"bad edge indices ({i}, {j}) for n={self.n}")
            if not w > 0:
                raise ValueError(f"edge ({i}, {j}) has non-positive weight {w}")
        pairs = [(i, j) for i, j, _ in self.edges]
        if len(set(pairs)) != len(pairs):
            raise ValueError("duplicate edges")

    @property
    def w_min(self) -> float:
        """Smallest positive stored weight (diagnostic; nan when edgeless)."""
        if not self.edges:
            return float("nan")
        return min(w for _, _, w in self.edges)

    def pair_weights(self, iu: np.ndarray, ju: np.ndarray) -> np.ndarray:
        """Weights aligned to the given (i, j) pair arrays; 0 where absent."""
        lut = {(i, j): w for i, j, w in self.edges}
        return np.array([lut.get((int(a), int(b)), 0.0) for a, b in zip(iu, ju)])

    def to_csv(self, path) -> None:
        """Export the edge list as ``i,j,weight`` rows (with header)."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["i", "j", "weight"])
            for i, j, w in self.edges:
                writer.writerow([i, j, repr(w)])


def knn_gaussian_weights(data: np.ndarray, knn: int, sigma2: float) -> WeightGraph:
    """Build the symmetrized Gaussian k-nearest-neighbor weight graph.

    Neighbor ties at equal distance are broken toward the smaller point
    index, which makes the construction deterministic.
    """
    X = np.asarray(data, dtype=float)
    if X.ndim != 2:
        raise ValueError(f"expected an (n, d) dataset, got shape {X.shape}")
    n = X.shape[0]
    if not 1 <= knn <= n - 1:
        raise ValueError(f"knn must be in [1, n-1] = [1, {n - 1}], got {knn}")
    if not sigma2 > 0:
        raise ValueError(f"sigma2 must be positive, got {sigma2}")

    sq = np.einsum("ij,ij->i", X, X)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (X @ X.T)
    np.maximum(d2, 0.0, out=d2)
    np.fill_diagonal(d2, np.inf)

    # stable argsort on distances keeps index order within ties
    order = np.argsort(d2, axis=1, kind="stable")[:, :knn]

    half = {}  # (i, j) with i < j -> accumulated w*_ij
    for i in range(n):
        for j in order[i]:
            j = int(j)
            w = np.exp(-d2[i, j] / (2.0 * sigma2**2))
            key = (i, j) if i < j else (j, i)
            half[key] = half.get(key, 0.0) + 0.5 * w
    edges = tuple((i, j, w) for (i, j), w in sorted(half.items()) if w > 0)
    return WeightGraph(n=n, edges=edges, knn=knn, sigma2=sigma2)


def components(g: WeightGraph) -> np.ndarray:
    """Connected-component id per point over the positive-weight edges.

    Ids are assigned by first occurrence in point order, so component 0
    contains point 0.  Convex clustering can only fuse centroids within a
    component; more than one component means full fusion is impossible.
    """
    parent = list(range(g.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j, _ in g.edges:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[rj] = ri

    ids: dict[int, int] = {}
    return np.array([ids.setdefault(find(i), len(ids)) for i in range(g.n)])
