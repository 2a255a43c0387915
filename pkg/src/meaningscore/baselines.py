"""Comparison metrics: spectrogram entropy, Katz fractal dimension, and
lossless compression ratios of the spectrogram image and the raw audio.

Compression ratios are reported as space savings, 100 * (1 - compressed /
original), so all four metrics share the 0-100 convention of the main
score (Katz FD excepted, which is reported as-is).
"""
from __future__ import annotations

import shutil
import subprocess
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import zlib

from .audio_io import DegenerateSignalError, Waveform
from .spectral import FrameMatrix

_FLAC_BIN = shutil.which("flac")


@dataclass(frozen=True)
class BaselineScores:
    spectrogram_entropy: float
    katz_fd: float
    lz_spectrogram_ratio: float
    lossless_audio_ratio: float
    audio_codec: str = "flac"  # names the codec actually used


def spectrogram_entropy(frames: FrameMatrix) -> float:
    """Shannon entropy of the spectrogram mass, as a percentage of maximum.

    All cells are normalized into a probability distribution; the result
    is 100 * H / log2(#cells).
    """
    cells = np.asarray(frames.frames, dtype=np.float64).ravel()
    if cells.size == 0 or (cells < 0).any():
        raise ValueError("need nonempty, nonnegative spectrogram cells")
    total = cells.sum()
    if total == 0:
        raise DegenerateSignalError("all-zero spectrogram has no entropy")
    p = cells / total
    nz = p > 0
    h = float(-(p[nz] * np.log2(p[nz])).sum())
    return 100.0 * h / np.log2(cells.size)


def katz_fd(samples: np.ndarray) -> float:
    """Katz fractal dimension of the (index, value) waveform graph.

    D = log10(n_steps) / (log10(n_steps) + log10(d / L)) with L the total
    path length and d the maximum distance from the first point.
    """
    y = np.asarray(samples, dtype=np.float64)
    if y.size < 2:
        raise ValueError("need at least 2 samples")
    if np.all(y == y[0]):
        raise DegenerateSignalError("constant sequence has no extent")
    steps = y.size - 1
    dy = np.diff(y)
    L = float(np.sqrt(1.0 + dy * dy).sum())
    idx = np.arange(y.size, dtype=np.float64)
    d = float(np.sqrt(idx**2 + (y - y[0]) ** 2).max())
    return float(np.log10(steps) / (np.log10(steps) + np.log10(d / L)))


def _quantize_u8(frames: FrameMatrix) -> bytes:
    """Min-max 8-bit grayscale image of the spectrogram, row-major."""
    cells = np.asarray(frames.frames, dtype=np.float64)
    lo, hi = cells.min(), cells.max()
    if hi > lo:
        img = np.round(255.0 * (cells - lo) / (hi - lo)).astype(np.uint8)
    else:
        img = np.zeros_like(cells, dtype=np.uint8)
    return img.tobytes()


def lz_spectrogram_ratio(frames: FrameMatrix) -> float:
    """DEFLATE space savings of the 8-bit spectrogram image, in [0, 100]."""
    raw = _quantize_u8(frames)
    comp = zlib.compress(raw)
    return float(np.clip(100.0 * (1.0 - len(comp) / len(raw)), 0.0, 100.0))


def _pcm16(w: Waveform) -> np.ndarray:
    x = np.clip(np.asarray(w.samples, dtype=np.float64), -1.0, 1.0)
    return np.round(x * 32767.0).astype(np.int16)


def _flac_encode_size(pcm: np.ndarray, sample_rate: int) -> int:
    """Size in bytes of the FLAC encoding, via the flac binary."""
    from scipy.io import wavfile

    with tempfile.TemporaryDirectory() as tmp:
        wav = Path(tmp) / "clip.wav"
        out = Path(tmp) / "clip.flac"
        wavfile.write(str(wav), sample_rate, pcm)
        subprocess.run(
            [_FLAC_BIN, "--silent", "--force", "-o", str(out), str(wav)],
            check=True,
            capture_output=True,
        )
        return out.stat().st_size


def _delta_deflate_size(pcm: np.ndarray) -> int:
    """Fallback lossless audio coder: first-order prediction + DEFLATE."""
    resid = np.diff(pcm.astype(np.int32), prepend=np.int32(0)).astype(np.int16)
    return len(zlib.compress(resid.tobytes(), 9))


def lossless_audio_ratio(w: Waveform) -> tuple[float, str]:
    """Lossless-codec space savings over 16-bit PCM, and the codec name.

    Uses FLAC when the encoder is available, otherwise a delta+DEFLATE
    substitute (named in the result so reports can flag that the column is
    not comparable across codecs).
    """
    if len(w.samples) == 0:
        raise DegenerateSignalError("empty waveform")
    pcm = _pcm16(w)
    original = pcm.nbytes
    if _FLAC_BIN is not None:
        compressed, codec = _flac_encode_size(pcm, w.sample_rate), "flac"
    else:
        compressed, codec = _delta_deflate_size(pcm), "delta-deflate"
    return float(np.clip(100.0 * (1.0 - compressed / original), 0.0, 100.0)), codec


def compute_baselines(w: Waveform, frames: FrameMatrix) -> BaselineScores:
    audio_ratio, codec = lossless_audio_ratio(w)
    return BaselineScores(
        spectrogram_entropy=spectrogram_entropy(frames),
        katz_fd=katz_fd(w.samples),
        lz_spectrogram_ratio=lz_spectrogram_ratio(frames),
        lossless_audio_ratio=audio_ratio,
        audio_codec=codec,
    )
