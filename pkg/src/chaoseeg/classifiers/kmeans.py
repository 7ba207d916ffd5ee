"""Seeded k-means with k-means++ starts, run independently per class.

Lloyd iterations run to an assignment fixpoint; an empty cluster is
reseeded at the point farthest from its own center, which can only
lower the inertia. The best of several restarts wins by (inertia,
restart index), and training rows are canonically sorted first so the
result is independent of input order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateTrainingError

CLASS_ORDER = (1, -1)


def _canonical_order(X: np.ndarray) -> np.ndarray:
    return np.lexsort(tuple(X[:, j] for j in reversed(range(X.shape[1]))))


def _sq_dists(X: np.ndarray, centers: np.ndarray) -> np.ndarray:
    diff = X[:, None, :] - centers[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _plusplus_init(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = X.shape[0]
    centers = np.empty((k, X.shape[1]), dtype=np.float64)
    centers[0] = X[int(rng.integers(n))]
    closest = np.sum((X - centers[0]) ** 2, axis=1)
    for j in range(1, k):
        total = float(closest.sum())
        if total == 0.0:
            idx = int(rng.integers(n))
        else:
            idx = int(rng.choice(n, p=closest / total))
        centers[j] = X[idx]
        closest = np.minimum(closest, np.sum((X - centers[j]) ** 2, axis=1))
    return centers


@dataclass(frozen=True)
class KMeansResult:
    centers: np.ndarray
    inertia: float
    inertia_path: tuple[float, ...]  # after init and after every Lloyd step
    n_iter: int
    restart: int


def _lloyd(X: np.ndarray, centers: np.ndarray, max_iters: int):
    k = centers.shape[0]
    centers = centers.copy()
    d2 = _sq_dists(X, centers)
    assign = d2.argmin(axis=1)
    path = [float(d2[np.arange(X.shape[0]), assign].sum())]
    n_iter = 0
    for _ in range(max_iters):
        n_iter += 1
        taken = np.zeros(X.shape[0], dtype=bool)
        for j in range(k):
            members = assign == j
            if members.any():
                centers[j] = X[members].mean(axis=0)
        # reseed empties at the farthest point from its current center,
        # excluding points already claimed by an earlier empty cluster
        dist_own = _sq_dists(X, centers)[np.arange(X.shape[0]), assign]
        for j in range(k):
            if (assign == j).any():
                continue
            cand = np.where(taken, -np.inf, dist_own)
            far = int(np.argmax(cand))
            centers[j] = X[far]
            taken[far] = True
        d2 = _sq_dists(X, centers)
        new_assign = d2.argmin(axis=1)
        path.append(float(d2[np.arange(X.shape[0]), new_assign].sum()))
        if np.array_equal(new_assign, assign):
            assign = new_assign
            break
        assign = new_assign
    return centers, float(path[-1]), tuple(path), n_iter


def kmeans(
    X,
    k: int,
    seed: int = 0,
    restarts: int = 10,
    max_iters: int = 300,
    _seed_stream: tuple[int, ...] | None = None,
) -> KMeansResult:
    """Best-of-restarts k-means on one point set."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError(f"X must be a non-empty 2-D array, got shape {X.shape}")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if restarts < 1:
        raise ValueError(f"restarts must be >= 1, got {restarts}")
    distinct = np.unique(X, axis=0).shape[0]
    if distinct < k:
        raise DegenerateTrainingError(
            f"need at least {k} distinct points for k={k}, got {distinct}"
        )
    X = X[_canonical_order(X)]
    base = _seed_stream if _seed_stream is not None else (seed,)
    best: KMeansResult | None = None
    for r in range(restarts):
        rng = np.random.default_rng(base + (r,))
        init = _plusplus_init(X, k, rng)
        centers, inertia, path, n_iter = _lloyd(X, init, max_iters)
        if best is None or (inertia, r) < (best.inertia, best.restart):
            order = np.lexsort(
                tuple(centers[:, j] for j in reversed(range(centers.shape[1])))
            )
            best = KMeansResult(
                centers=centers[order],
                inertia=inertia,
                inertia_path=path,
                n_iter=n_iter,
                restart=r,
            )
    return best


def kmeans_fit(
    X,
    y,
    k_per_class: int = 4,
    seed: int = 0,
    restarts: int = 10,
    max_iters: int = 300,
) -> tuple[np.ndarray, np.ndarray]:
    """Cluster each class separately into k_per_class labeled centers.

    Returns (centers, labels) with the +1 block first, each class's
    centers in canonical row order.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if X.ndim != 2 or y.shape != (X.shape[0],):
        raise ValueError("X must be 2-D with one label per row")
    if not np.isin(y, (-1, 1)).all():
        raise ValueError("labels must be +1 or -1")
    centers = []
    labels = []
    for c, label in enumerate(CLASS_ORDER):
        rows = X[y == label]
        if rows.shape[0] == 0:
            raise DegenerateTrainingError(f"class {label:+d} has no points")
        result = kmeans(
            rows,
            k_per_class,
            restarts=restarts,
            max_iters=max_iters,
            _seed_stream=(seed, c),
        )
        centers.append(result.centers)
        labels.append(np.full(k_per_class, label, dtype=np.int64))
    return np.vstack(centers), np.concatenate(labels)


def kmeans_fit_total(
    X,
    y,
    k_total: int,
    seed: int = 0,
    restarts: int = 10,
    max_iters: int = 300,
) -> tuple[np.ndarray, np.ndarray]:
    """Cluster the pooled points, then label each center by majority vote.

    Ties vote +1. Errors if either class ends up with no center.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    result = kmeans(
        X, k_total, restarts=restarts, max_iters=max_iters, _seed_stream=(seed,)
    )
    d2 = _sq_dists(X, result.centers)
    assign = d2.argmin(axis=1)
    labels = np.empty(k_total, dtype=np.int64)
    for j in range(k_total):
        members = y[assign == j]
        pos = int((members == 1).sum())
        neg = int((members == -1).sum())
        labels[j] = 1 if pos >= neg else -1
    for label in CLASS_ORDER:
        if not (labels == label).any():
            raise DegenerateTrainingError(
                f"pooled clustering left class {label:+d} with no center"
            )
    return result.centers, labels
