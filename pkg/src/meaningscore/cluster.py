"""Diagonal-covariance Gaussian mixtures fitted by k-means-seeded EM.

Fitting is fully deterministic given (data, K, seed).  Restarts fan out
as seed, seed+1, ... and the run with the highest mixture log-likelihood
wins (ties go to the lowest restart index).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spectral import FrameMatrix

VARIANCE_FLOOR_REL = 1e-6
KMEANS_MAX_ITER = 100


@dataclass(frozen=True)
class ClusterModel:
    K: int
    centroids: np.ndarray      # (K, m)
    variances: np.ndarray      # (K, m), floored, strictly positive
    weights: np.ndarray        # (K,) mixture weights
    assignments: np.ndarray    # (n,) hard labels, argmax responsibility
    counts: np.ndarray         # (K,) hard per-cluster point counts
    log_likelihood: float
    loglik_trace: np.ndarray   # per-EM-iteration total log-likelihood


def variance_floor(X: np.ndarray) -> np.ndarray:
    """Per-dimension floor keeping densities finite for degenerate clusters."""
    return VARIANCE_FLOOR_REL * (X.var(axis=0) + 1e-12)


def _log_densities(X: np.ndarray, centroids: np.ndarray, variances: np.ndarray) -> np.ndarray:
    """Natural-log diagonal Gaussian densities, shape (n, K)."""
    inv = 1.0 / variances
    quad = (X * X) @ inv.T - 2.0 * (X @ (centroids * inv).T) + (centroids**2 * inv).sum(axis=1)
    norm = np.log(2.0 * np.pi * variances).sum(axis=1)
    return -0.5 * (quad + norm[None, :])


def _hard_assign(log_dens: np.ndarray, log_weights: np.ndarray) -> np.ndarray:
    # argmax breaks ties toward the lowest cluster index
    return np.argmax(log_dens + log_weights[None, :], axis=1)


def _finish(X, centroids, variances, weights, loglik, trace) -> ClusterModel:
    K = centroids.shape[0]
    log_dens = _log_densities(X, centroids, variances)
    labels = _hard_assign(log_dens, np.log(weights))
    counts = np.bincount(labels, minlength=K)
    return ClusterModel(
        K=K,
        centroids=centroids,
        variances=variances,
        weights=weights,
        assignments=labels,
        counts=counts,
        log_likelihood=float(loglik),
        loglik_trace=np.asarray(trace, dtype=np.float64),
    )


def kmeans_init(frames: FrameMatrix, K: int, seed: int) -> ClusterModel:
    """Lloyd's algorithm; empty clusters re-seed from the farthest point."""
    X = frames.frames
    n, m = X.shape
    if not (1 <= K <= n):
        raise ValueError(f"need 1 <= K <= n, got K={K}, n={n}")
    floor = variance_floor(X)
    rng = np.random.default_rng(seed)
    centroids = X[rng.choice(n, size=K, replace=False)].copy()
    labels = np.zeros(n, dtype=np.int64)
    x_sq = (X * X).sum(axis=1)
    for _ in range(KMEANS_MAX_ITER):
        d2 = x_sq[:, None] - 2.0 * (X @ centroids.T) + (centroids * centroids).sum(axis=1)
        new_labels = np.argmin(d2, axis=1)
        for k in range(K):
            sel = new_labels == k
            if sel.any():
                centroids[k] = X[sel].mean(axis=0)
            else:
                far = int(np.argmax(d2[np.arange(n), new_labels]))
                centroids[k] = X[far]
                new_labels[far] = k
        if np.array_equal(new_labels, labels):
            labels = new_labels
            break
        labels = new_labels

    counts = np.bincount(labels, minlength=K)
    variances = np.empty((K, m))
    for k in range(K):
        sel = labels == k
        variances[k] = np.maximum(X[sel].var(axis=0), floor) if sel.any() else floor
    weights = np.maximum(counts, 1) / np.maximum(counts, 1).sum()
    log_dens = _log_densities(X, centroids, variances)
    loglik = _total_loglik(log_dens, np.log(weights))
    return _finish(X, centroids, variances, weights, loglik, [loglik])


def _total_loglik(log_dens: np.ndarray, log_weights: np.ndarray) -> float:
    joint = log_dens + log_weights[None, :]
    mx = joint.max(axis=1)
    return float((mx + np.log(np.exp(joint - mx[:, None]).sum(axis=1))).sum())


def _em_run(X: np.ndarray, K: int, seed: int, tol: float, max_iter: int) -> ClusterModel:
    n, m = X.shape
    floor = variance_floor(X)
    init = kmeans_init(FrameMatrix(X, level=0), K, seed)
    centroids = init.centroids.copy()
    variances = init.variances.copy()
    weights = np.maximum(init.counts, 1).astype(np.float64)
    weights /= weights.sum()

    trace = []
    prev = -np.inf
    stepped = False
    for _ in range(max_iter):
        log_dens = _log_densities(X, centroids, variances)
        joint = log_dens + np.log(weights)[None, :]
        mx = joint.max(axis=1, keepdims=True)
        resp = np.exp(joint - mx)
        norm = resp.sum(axis=1, keepdims=True)
        loglik = float((mx[:, 0] + np.log(norm[:, 0])).sum())
        resp /= norm
        trace.append(loglik)
        stepped = False
        if loglik - prev < tol:
            break
        prev = loglik
        stepped = True

        nk = resp.sum(axis=0)
        if (nk < 1e-10).any():
            # collapsed component: re-seed at the lowest-density point
            dens = mx[:, 0] + np.log(norm[:, 0])
            for k in np.flatnonzero(nk < 1e-10):
                worst = int(np.argmin(dens))
                centroids[k] = X[worst]
                variances[k] = np.maximum(X.var(axis=0), floor)
                weights[k] = 1.0 / n
                dens[worst] = np.inf
            weights /= weights.sum()
            continue
        weights = nk / n
        centroids = (resp.T @ X) / nk[:, None]
        sq = resp.T @ (X * X) / nk[:, None]
        variances = np.maximum(sq - centroids**2, floor)

    if stepped:
        # loop exhausted after an M-step: score the final parameters
        log_dens = _log_densities(X, centroids, variances)
        joint = log_dens + np.log(weights)[None, :]
        mx = joint.max(axis=1)
        trace.append(float((mx + np.log(np.exp(joint - mx[:, None]).sum(axis=1))).sum()))
    return _finish(X, centroids, variances, weights, trace[-1], trace)


def fit_gmm(
    frames: FrameMatrix,
    K: int,
    seed: int,
    tol: float = 1e-3,
    max_iter: int = 100,
    restarts: int = 10,
) -> ClusterModel:
    """Best of ``restarts`` EM runs by total mixture log-likelihood.

    A run stops once the total log-likelihood improves by less than
    ``tol``, or after ``max_iter`` iterations.
    """
    X = frames.frames
    if not np.isfinite(X).all():
        raise ValueError("non-finite values in input frames")
    n = X.shape[0]
    if not (1 <= K <= n):
        raise ValueError(f"need 1 <= K <= n, got K={K}, n={n}")
    best = None
    for r in range(restarts):
        model = _em_run(X, K, seed + r, tol, max_iter)
        if best is None or model.log_likelihood > best.log_likelihood:
            best = model
    return best


def model_from_partition(frames: FrameMatrix, labels: np.ndarray, K: int) -> ClusterModel:
    """Hard-partition model: per-cluster ML mean and (floored) variance."""
    X = frames.frames
    n, m = X.shape
    labels = np.asarray(labels, dtype=np.int64)
    floor = variance_floor(X)
    centroids = np.zeros((K, m))
    variances = np.tile(floor, (K, 1))
    counts = np.bincount(labels, minlength=K)
    for k in range(K):
        sel = labels == k
        if sel.any():
            centroids[k] = X[sel].mean(axis=0)
            variances[k] = np.maximum(X[sel].var(axis=0), floor)
    weights = np.maximum(counts, 1) / np.maximum(counts, 1).sum()
    return ClusterModel(
        K=K,
        centroids=centroids,
        variances=variances,
        weights=weights,
        assignments=labels,
        counts=counts,
        log_likelihood=float("nan"),
        loglik_trace=np.array([]),
    )
