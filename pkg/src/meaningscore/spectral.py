"""Short-window magnitude spectrogram used as the level-1 dataset.

Each 30-sample window (hop 27, rectangular) becomes one data point: the
16 one-sided DFT magnitudes of the raw slice.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .audio_io import Waveform

DEFAULT_WINDOW = 30
DEFAULT_OVERLAP = 3


@dataclass(frozen=True)
class FrameMatrix:
    """Ordered real vectors of a common dimension, at a recursion level."""

    frames: np.ndarray  # (n, m) float64
    level: int = 1

    @property
    def n(self) -> int:
        return self.frames.shape[0]

    @property
    def dim(self) -> int:
        return self.frames.shape[1]


def spectrogram_frames(
    w: Waveform,
    window: int = DEFAULT_WINDOW,
    overlap: int = DEFAULT_OVERLAP,
    log_magnitude: bool = False,
) -> FrameMatrix:
    """Slice the waveform into overlapping windows and take DFT magnitudes.

    Trailing samples that do not fill a window are dropped.  With the
    defaults (window 30, overlap 3) the hop is 27 samples and each frame
    has dimension 16.
    """
    if not (window > overlap >= 0):
        raise ValueError("need window > overlap >= 0")
    x = np.asarray(w.samples, dtype=np.float64)
    if len(x) < window:
        raise ValueError(f"waveform of {len(x)} samples shorter than window {window}")
    hop = window - overlap
    n = (len(x) - window) // hop + 1
    idx = hop * np.arange(n)[:, None] + np.arange(window)[None, :]
    mags = np.abs(np.fft.rfft(x[idx], axis=1))
    if log_magnitude:
        mags = np.log1p(mags)
    return FrameMatrix(frames=mags, level=1)
