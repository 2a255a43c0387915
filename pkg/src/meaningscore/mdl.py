"""Two-part-code accounting: per-point code lengths, K selection, scoring.

Each point is coded either through its cluster (cluster index plus the
optimal code for its position under the cluster's diagonal Gaussian) or
independently at the raw cost of ``c`` bits per dimension.  The partition
is chosen to minimize the total; the score keeps only the label
information and the model cost.  All code lengths are in bits.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cluster import ClusterModel, fit_gmm
from .spectral import FrameMatrix

DEFAULT_PRECISION_BITS = 32
DEFAULT_K_MAX = 8

_LN2 = np.log(2.0)


@dataclass(frozen=True)
class CodingReport:
    per_point_code_bits: np.ndarray  # (n,)
    outlier_flags: np.ndarray        # (n,) bool, True => independent coding
    label_info_bits: float           # sum of log2(n / cluster size) over inliers
    model_bits: float                # 2*c*m per nonempty cluster
    total_cost_bits: float           # point bits + label bits (the selection objective)
    K_selected: int
    c: int
    m: int


@dataclass(frozen=True)
class ScoreCard:
    raw_bits_per_level: list[float]
    raw_bits_total: float
    normalized_score: float
    K_per_level: list[int]
    n_per_level: list[int]
    m_per_level: list[int] = field(default_factory=list)


def _nll_bits(x: np.ndarray, centroid: np.ndarray, variance: np.ndarray) -> np.ndarray:
    """-log2 of the diagonal Gaussian density, rows of x against one cluster."""
    quad = ((x - centroid) ** 2 / variance).sum(axis=-1)
    norm = np.log(2.0 * np.pi * variance).sum()
    return 0.5 * (quad + norm) / _LN2


def point_code_length(
    x: np.ndarray,
    centroid: np.ndarray,
    variance: np.ndarray,
    c: int = DEFAULT_PRECISION_BITS,
    floor_negative: bool = True,
) -> tuple[float, bool]:
    """Code length in bits for one point, and whether it is coded independently.

    The cluster route costs -log2 density (floored at 0 by default, since a
    density above 1 cannot buy a negative-length code); the independent
    route costs c bits per dimension.  The cheaper route wins; exact ties
    go to the independent route.
    """
    x = np.asarray(x, dtype=np.float64)
    centroid = np.asarray(centroid, dtype=np.float64)
    variance = np.asarray(variance, dtype=np.float64)
    if not (x.shape == centroid.shape == variance.shape):
        raise ValueError("dimension mismatch between point and cluster parameters")
    if not (np.isfinite(x).all() and np.isfinite(centroid).all()):
        raise ValueError("non-finite input")
    m = x.shape[-1]
    nll = float(_nll_bits(x, centroid, variance))
    cap = float(c * m)
    is_outlier = nll >= cap
    bits = min(cap, max(0.0, nll) if floor_negative else nll)
    return bits, is_outlier


def partition_cost(
    frames: FrameMatrix,
    model: ClusterModel,
    c: int = DEFAULT_PRECISION_BITS,
    floor_negative: bool = True,
) -> CodingReport:
    """Two-part-code accounting for a fitted partition.

    Cluster sizes are taken over all assigned points (outliers included);
    the outlier indicator only removes points from the label-information
    sum and caps their per-point cost at c*m.
    """
    X = frames.frames
    n, m = X.shape
    labels = model.assignments
    counts = np.bincount(labels, minlength=model.K)
    cap = float(c * m)

    nll = np.empty(n)
    for k in range(model.K):
        sel = labels == k
        if sel.any():
            nll[sel] = _nll_bits(X[sel], model.centroids[k], model.variances[k])
    outliers = nll >= cap
    per_point = np.minimum(cap, np.maximum(0.0, nll) if floor_negative else nll)
    label_bits = float(np.log2(n / counts[labels[~outliers]]).sum())
    nonempty = int((counts > 0).sum())
    return CodingReport(
        per_point_code_bits=per_point,
        outlier_flags=outliers,
        label_info_bits=label_bits,
        model_bits=2.0 * c * m * nonempty,
        total_cost_bits=float(per_point.sum()) + label_bits,
        K_selected=model.K,
        c=c,
        m=m,
    )


def select_partition(
    frames: FrameMatrix,
    K_max: int = DEFAULT_K_MAX,
    c: int = DEFAULT_PRECISION_BITS,
    seed: int = 0,
    tol: float = 1e-3,
    max_iter: int = 100,
    restarts: int = 10,
) -> tuple[ClusterModel, CodingReport]:
    """Fit K = 1..K_max mixtures and keep the cheapest total description.

    The description of the model itself (2*c*m bits per nonempty cluster)
    is part of the minimized total, so extra clusters must pay for
    themselves.  Ties go to the smaller K; K is additionally capped at the
    number of points.
    """
    n = frames.n
    if n < 2:
        raise ValueError("clustering needs at least 2 frames")
    best: tuple[ClusterModel, CodingReport] | None = None
    best_cost = np.inf
    for K in range(1, min(K_max, n) + 1):
        model = fit_gmm(frames, K, seed, tol=tol, max_iter=max_iter, restarts=restarts)
        report = partition_cost(frames, model, c)
        cost = report.total_cost_bits + report.model_bits
        if cost < best_cost:
            best, best_cost = (model, report), cost
    return best


def meaningfulness_bits(report: CodingReport) -> float:
    """The kept portion of the description: label information + model cost."""
    return report.label_info_bits + report.model_bits


def normalize_score(
    raw_bits_total: float,
    n_per_level: list[int],
    K_max: int,
    c: int,
    m_per_level: list[int],
) -> float:
    """Map raw bits to [0, 100] against the maximum attainable under K_max.

    The ceiling is uniform labels over K_max clusters plus a full K_max
    model at every level.
    """
    if raw_bits_total < 0:
        raise ValueError("raw score must be nonnegative")
    denom = sum(
        n * np.log2(K_max) + K_max * 2.0 * c * m
        for n, m in zip(n_per_level, m_per_level)
    )
    if denom <= 0:
        return 0.0
    return float(np.clip(100.0 * raw_bits_total / denom, 0.0, 100.0))
