"""Recursive scoring over three levels of abstraction.

Level 1 clusters spectrogram frames.  Levels 2 and 3 cluster histograms
of the previous level's cluster labels over consecutive chunks, so each
level-3 point summarizes 4 level-1 frames.  Per-level scores are summed.
"""
from __future__ import annotations

import numpy as np

from .cluster import fit_gmm
from .mdl import (
    DEFAULT_K_MAX,
    DEFAULT_PRECISION_BITS,
    ScoreCard,
    meaningfulness_bits,
    normalize_score,
    partition_cost,
    select_partition,
)
from .spectral import FrameMatrix

LEVEL_CHUNK = 2  # labels per chunk when moving up a level


def label_count_frames(
    labels: np.ndarray, K_prev: int, chunk: int = LEVEL_CHUNK, level: int = 2
) -> FrameMatrix:
    """Histogram previous-level labels over consecutive non-overlapping chunks.

    A trailing partial chunk is dropped.
    """
    labels = np.asarray(labels, dtype=np.int64)
    if chunk < 2 or K_prev < 1:
        raise ValueError("need chunk >= 2 and K_prev >= 1")
    n_chunks = len(labels) // chunk
    if n_chunks == 0:
        raise ValueError(f"fewer than one chunk of {chunk} labels")
    trimmed = labels[: n_chunks * chunk].reshape(n_chunks, chunk)
    counts = np.zeros((n_chunks, K_prev), dtype=np.float64)
    rows = np.repeat(np.arange(n_chunks), chunk)
    np.add.at(counts, (rows, trimmed.ravel()), 1.0)
    return FrameMatrix(frames=counts, level=level)


def _score_levels(frames_level1: FrameMatrix, levels: int, fit_level) -> ScoreCard:
    """Shared driver: ``fit_level(frames) -> (model, report)`` per level."""
    if levels not in (1, 2, 3):
        raise ValueError("levels must be 1, 2 or 3")
    if frames_level1.n < 2:
        raise ValueError("need at least 2 level-1 frames")

    raw, ks, ns, ms = [], [], [], []
    frames = frames_level1
    for level in range(1, levels + 1):
        if frames is None or frames.n < 2:
            raw.append(0.0)
            ks.append(0)
            ns.append(0)
            ms.append(0)
            frames = None
            continue
        model, report = fit_level(frames)
        raw.append(meaningfulness_bits(report))
        ks.append(model.K)
        ns.append(frames.n)
        ms.append(frames.dim)
        if level < levels:
            try:
                frames = label_count_frames(
                    model.assignments, model.K, LEVEL_CHUNK, level=level + 1
                )
            except ValueError:
                frames = None
    return raw, ks, ns, ms


def multilevel_score(
    frames_level1: FrameMatrix,
    K_max: int = DEFAULT_K_MAX,
    c: int = DEFAULT_PRECISION_BITS,
    seed: int = 0,
    levels: int = 3,
) -> ScoreCard:
    """Full pipeline: per-level MDL partition selection, summed scores."""

    def fit_level(frames):
        return select_partition(frames, K_max=K_max, c=c, seed=seed)

    raw, ks, ns, ms = _score_levels(frames_level1, levels, fit_level)
    total = float(sum(raw))
    return ScoreCard(
        raw_bits_per_level=raw,
        raw_bits_total=total,
        normalized_score=normalize_score(total, ns, K_max, c, ms),
        K_per_level=ks,
        n_per_level=ns,
        m_per_level=ms,
    )


def fixed_k_score(
    frames_level1: FrameMatrix,
    K_fixed: int = 5,
    c: int = DEFAULT_PRECISION_BITS,
    seed: int = 0,
    levels: int = 3,
    K_max: int = DEFAULT_K_MAX,
) -> ScoreCard:
    """Ablation: skip the K sweep and fit ``K_fixed`` clusters at every level.

    K is clipped to the number of points.  The normalization ceiling keeps
    the same ``K_max`` budget so scores stay comparable to the MDL run.
    """

    def fit_level(frames):
        model = fit_gmm(frames, min(K_fixed, frames.n), seed)
        return model, partition_cost(frames, model, c)

    raw, ks, ns, ms = _score_levels(frames_level1, levels, fit_level)
    total = float(sum(raw))
    return ScoreCard(
        raw_bits_per_level=raw,
        raw_bits_total=total,
        normalized_score=normalize_score(total, ns, K_max, c, ms),
        K_per_level=ks,
        n_per_level=ns,
        m_per_level=ms,
    )
