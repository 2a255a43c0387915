"""Waveform loading, amplitude normalization and excerpt extraction.

All downstream analysis consumes mono float waveforms in [-1, 1].  Every
waveform is rescaled to a common mean absolute amplitude before scoring so
that the score reflects structure, not loudness.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.io import wavfile

DEFAULT_TARGET_MEAN_ABS = 0.1


class AudioLoadError(ValueError):
    """File could not be decoded as PCM audio."""


class DegenerateSignalError(ValueError):
    """Signal has no usable content (empty or all-zero)."""


@dataclass(frozen=True)
class Waveform:
    samples: np.ndarray  # float64 mono
    sample_rate: int

    @property
    def duration_s(self) -> float:
        return len(self.samples) / self.sample_rate


# scale factors for integer PCM widths as decoded by scipy
_PCM_SCALE = {
    np.dtype(np.int16): 2.0**15,
    np.dtype(np.int32): 2.0**31,  # also covers 24-bit (left-justified)
    np.dtype(np.int64): 2.0**63,
}


def load_waveform(path: str | Path, channel_policy: str = "average") -> Waveform:
    """Load a PCM WAV file as a mono waveform in [-1, 1].

    ``channel_policy`` is ``"average"`` (mean across channels) or
    ``"first"`` (keep channel 0).
    """
    if channel_policy not in ("average", "first"):
        raise ValueError(f"unknown channel_policy: {channel_policy!r}")
    path = Path(path)
    try:
        rate, data = wavfile.read(str(path))
    except FileNotFoundError:
        raise
    except Exception as exc:
        raise AudioLoadError(f"{path}: not decodable as PCM WAV ({exc})") from exc
    if data.size == 0:
        raise DegenerateSignalError(f"{path}: zero-length audio")

    data = np.atleast_2d(data.T).T  # (n, channels)
    if data.dtype == np.uint8:
        x = (data.astype(np.float64) - 128.0) / 128.0
    elif data.dtype in _PCM_SCALE:
        x = data.astype(np.float64) / _PCM_SCALE[data.dtype]
    elif np.issubdtype(data.dtype, np.floating):
        x = data.astype(np.float64)
    else:
        raise AudioLoadError(f"{path}: unsupported sample format {data.dtype}")

    if channel_policy == "average":
        mono = x.mean(axis=1)
    else:
        mono = x[:, 0]
    return Waveform(samples=mono, sample_rate=int(rate))


def normalize_amplitude(w: Waveform, target_mean_abs: float = DEFAULT_TARGET_MEAN_ABS) -> Waveform:
    """Rescale so the mean absolute amplitude equals ``target_mean_abs``."""
    if target_mean_abs <= 0:
        raise ValueError("target_mean_abs must be positive")
    mean_abs = float(np.mean(np.abs(w.samples)))
    if mean_abs == 0.0:
        raise DegenerateSignalError("all-zero waveform has no amplitude scale")
    return Waveform(samples=w.samples * (target_mean_abs / mean_abs), sample_rate=w.sample_rate)


def extract_excerpt(w: Waveform, offset_s: float, duration_s: float) -> Waveform:
    """Contiguous slice of ``duration_s`` seconds starting at ``offset_s``."""
    if offset_s < 0 or duration_s <= 0:
        raise ValueError("offset must be >= 0 and duration > 0")
    start = int(round(offset_s * w.sample_rate))
    count = int(round(duration_s * w.sample_rate))
    if start + count > len(w.samples):
        raise ValueError(
            f"excerpt [{offset_s}s, {offset_s + duration_s}s) out of range "
            f"for {w.duration_s:.3f}s waveform"
        )
    return Waveform(samples=w.samples[start:start + count], sample_rate=w.sample_rate)
