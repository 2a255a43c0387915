import numpy as np
import pytest
from scipy.io import wavfile

from meaningscore import (
    DegenerateSignalError,
    Waveform,
    extract_excerpt,
    load_waveform,
    normalize_amplitude,
)
from meaningscore.audio_io import AudioLoadError

from conftest import make_waveform


class TestLoadWaveform:
    def test_int16_rescale(self, tmp_path):
        path = tmp_path / "mono.wav"
        wavfile.write(str(path), 8000, np.full(100, 16384, dtype=np.int16))
        w = load_waveform(path)
        assert w.sample_rate == 8000
        np.testing.assert_allclose(w.samples, 0.5, atol=1e-4)

    def test_stereo_average(self, tmp_path):
        path = tmp_path / "stereo.wav"
        data = np.empty((50, 2), dtype=np.float32)
        data[:, 0] = 0.2
        data[:, 1] = 0.6
        wavfile.write(str(path), 8000, data)
        w = load_waveform(path, channel_policy="average")
        np.testing.assert_allclose(w.samples, 0.4, atol=1e-7)

    def test_stereo_first(self, tmp_path):
        path = tmp_path / "stereo.wav"
        data = np.stack([np.full(50, 0.2), np.full(50, 0.6)], axis=1).astype(np.float32)
        wavfile.write(str(path), 8000, data)
        w = load_waveform(path, channel_policy="first")
        np.testing.assert_allclose(w.samples, 0.2, atol=1e-7)

    def test_uint8_centering(self, tmp_path):
        path = tmp_path / "u8.wav"
        wavfile.write(str(path), 8000, np.full(40, 192, dtype=np.uint8))
        w = load_waveform(path)
        np.testing.assert_allclose(w.samples, 0.5, atol=1e-2)

    def test_24bit(self, tmp_path):
        import struct

        sr, n = 8000, 16
        vals = (np.arange(n) * 2**16).astype(np.int64)
        body = b"".join(int(v).to_bytes(4, "little", signed=True)[:3] for v in vals)
        hdr = (
            b"RIFF" + struct.pack("<I", 36 + len(body)) + b"WAVEfmt "
            + struct.pack("<IHHIIHH", 16, 1, 1, sr, sr * 3, 3, 24)
            + b"data" + struct.pack("<I", len(body))
        )
        path = tmp_path / "s24.wav"
        path.write_bytes(hdr + body)
        w = load_waveform(path)
        np.testing.assert_allclose(w.samples, vals / 2**23, atol=1e-9)

    def test_empty_file_errors(self, tmp_path):
        path = tmp_path / "empty.wav"
        path.write_bytes(b"")
        with pytest.raises((AudioLoadError, DegenerateSignalError)):
            load_waveform(path)

    def test_garbage_errors(self, tmp_path):
        path = tmp_path / "bad.wav"
        path.write_bytes(b"not audio at all" * 10)
        with pytest.raises(AudioLoadError):
            load_waveform(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_waveform(tmp_path / "nope.wav")


class TestNormalizeAmplitude:
    def test_exact_scaling(self):
        w = normalize_amplitude(make_waveform([0.5, -0.5]), 0.1)
        np.testing.assert_allclose(w.samples, [0.1, -0.1], atol=1e-12)

    def test_all_zero_errors(self):
        with pytest.raises(DegenerateSignalError):
            normalize_amplitude(make_waveform([0.0, 0.0]), 0.1)

    def test_scale_factor(self):
        samples = np.array([0.25, -0.25, 0.25, -0.25])
        w = normalize_amplitude(make_waveform(samples), 0.1)
        np.testing.assert_allclose(w.samples, samples * 0.4, atol=1e-12)

    def test_target_hit(self):
        rng = np.random.default_rng(0)
        w = normalize_amplitude(make_waveform(rng.standard_normal(1000)), 0.1)
        assert abs(np.mean(np.abs(w.samples)) - 0.1) < 1e-9

    def test_idempotent(self):
        rng = np.random.default_rng(1)
        w1 = normalize_amplitude(make_waveform(rng.standard_normal(500)), 0.1)
        w2 = normalize_amplitude(w1, 0.1)
        np.testing.assert_allclose(w2.samples, w1.samples, rtol=1e-12)

    @pytest.mark.parametrize("alpha", [0.01, 0.5, 3.0, 1e4])
    def test_scale_invariant(self, alpha):
        rng = np.random.default_rng(2)
        x = rng.standard_normal(300)
        a = normalize_amplitude(make_waveform(x), 0.1)
        b = normalize_amplitude(make_waveform(alpha * x), 0.1)
        np.testing.assert_allclose(a.samples, b.samples, atol=1e-9)


class TestExtractExcerpt:
    def test_slice_indices(self):
        w = make_waveform(np.arange(2 * 44100, dtype=np.float64))
        e = extract_excerpt(w, 0.5, 1.0)
        assert len(e.samples) == 44100
        assert e.samples[0] == 22050
        assert e.sample_rate == 44100

    def test_out_of_range(self):
        w = make_waveform(np.zeros(2 * 44100))
        with pytest.raises(ValueError):
            extract_excerpt(w, 1.5, 1.0)

    def test_identity_slice(self):
        x = np.arange(44100, dtype=np.float64)
        w = make_waveform(x)
        e = extract_excerpt(w, 0.0, 1.0)
        np.testing.assert_array_equal(e.samples, x)
