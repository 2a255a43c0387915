"""Meaningfulness scoring of audio via MDL clustering of spectrogram frames."""

from .audio_io import (
    AudioLoadError,
    DegenerateSignalError,
    Waveform,
    extract_excerpt,
    load_waveform,
    normalize_amplitude,
)
from .baselines import (
    BaselineScores,
    compute_baselines,
    katz_fd,
    lossless_audio_ratio,
    lz_spectrogram_ratio,
    spectrogram_entropy,
)
from .cluster import (
    ClusterModel,
    fit_gmm,
    kmeans_init,
    model_from_partition,
    variance_floor,
)
from .mdl import (
    CodingReport,
    ScoreCard,
    meaningfulness_bits,
    normalize_score,
    partition_cost,
    point_code_length,
    select_partition,
)
from .multilevel import fixed_k_score, label_count_frames, multilevel_score
from .spectral import FrameMatrix, spectrogram_frames

__all__ = [
    "AudioLoadError",
    "BaselineScores",
    "ClusterModel",
    "CodingReport",
    "DegenerateSignalError",
    "FrameMatrix",
    "ScoreCard",
    "Waveform",
    "compute_baselines",
    "extract_excerpt",
    "fit_gmm",
    "fixed_k_score",
    "katz_fd",
    "kmeans_init",
    "label_count_frames",
    "load_waveform",
    "lossless_audio_ratio",
    "lz_spectrogram_ratio",
    "meaningfulness_bits",
    "model_from_partition",
    "variance_floor",
    "multilevel_score",
    "normalize_amplitude",
    "normalize_score",
    "partition_cost",
    "point_code_length",
    "select_partition",
    "spectrogram_entropy",
    "spectrogram_frames",
]
