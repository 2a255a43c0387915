import numpy as np
import pytest
from scipy.io import wavfile

from meaningscore import Waveform

SR = 44100


def tone(freq: float, n_samples: int, sr: int = SR, amp: float = 1.0) -> np.ndarray:
    t = np.arange(n_samples) / sr
    return amp * np.sin(2 * np.pi * freq * t)


def eight_tone_sequence(sr: int = SR, seg_s: float = 0.125, reps: int = 1) -> np.ndarray:
    """Structured synthetic: alternating tone segments at 8 distinct,
    off-bin frequencies interleaved across the spectrum."""
    seg = int(np.ceil(seg_s * sr))
    bins = (1, 9, 3, 11, 5, 13, 7, 14)
    segments = [tone((k + 0.3) * sr / 30, seg, sr) for k in bins]
    return np.concatenate(segments * reps)


def white_noise(n_samples: int, seed: int = 123) -> np.ndarray:
    return np.random.default_rng(seed).standard_normal(n_samples)


def pure_sine(n_samples: int, freq: float = 440.0, sr: int = SR) -> np.ndarray:
    return tone(freq, n_samples, sr)


def write_wav(path, samples: np.ndarray, sr: int = SR, dtype=np.int16):
    x = np.asarray(samples, dtype=np.float64)
    peak = np.max(np.abs(x)) or 1.0
    x = x / peak * 0.9
    if dtype == np.int16:
        data = np.round(x * 32767).astype(np.int16)
    elif dtype == np.float32:
        data = x.astype(np.float32)
    else:
        raise ValueError(dtype)
    wavfile.write(str(path), sr, data)
    return path


@pytest.fixture
def synth_corpus(tmp_path):
    """Directory-per-class corpus: structured / sine / noise, 2 clips each."""
    root = tmp_path / "corpus"
    for name, gen in [
        ("structured", lambda s: eight_tone_sequence()),
        ("sine", lambda s: pure_sine(SR)),
        ("noise", lambda s: white_noise(SR, seed=s)),
    ]:
        d = root / name
        d.mkdir(parents=True)
        for i in range(2):
            write_wav(d / f"clip{i}.wav", gen(100 + i))
    return root


def make_frames(X, level=1):
    from meaningscore import FrameMatrix

    return FrameMatrix(frames=np.asarray(X, dtype=np.float64), level=level)


def make_waveform(samples, sr=SR):
    return Waveform(samples=np.asarray(samples, dtype=np.float64), sample_rate=sr)
