"""Batch scoring CLI: single-clip scoring, per-class tables and sample-count
sweeps, with CSV output.

Corpus layout is one directory per class of WAV files, or a manifest file
with one ``path,class[,offset]`` line per clip.  A ``key=value`` config
file can supply any flag; command-line values win.
"""
from __future__ import annotations

import argparse
import csv
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import audio_io, baselines, multilevel, spectral
from .mdl import DEFAULT_K_MAX, DEFAULT_PRECISION_BITS, ScoreCard

log = logging.getLogger("meaningscore")

METRICS = ("ours", "katz", "ent", "zl_ratio", "wav_ratio")


@dataclass(frozen=True)
class RunConfig:
    seconds: float = 1.0
    offset: float = 0.0
    seed: int = 0
    kmax: int = DEFAULT_K_MAX
    precision: int = DEFAULT_PRECISION_BITS
    levels: int = 3
    fixed_k: int | None = None
    target_amp: float = audio_io.DEFAULT_TARGET_MEAN_ABS
    baselines: bool = True
    channel_policy: str = "average"
    workers: int = 1
    n_samples: int | None = None  # overrides seconds when set (sweep mode)

    def __post_init__(self):
        if self.seconds <= 0 or self.kmax < 1 or self.levels not in (1, 2, 3):
            raise ValueError("need seconds > 0, kmax >= 1, levels in {1,2,3}")


@dataclass(frozen=True)
class ClipResult:
    path: str
    clazz: str
    score: ScoreCard
    base: baselines.BaselineScores | None


def score_clip(path: str | Path, config: RunConfig, offset: float | None = None) -> ClipResult:
    """Run the full pipeline on one file."""
    t0 = time.monotonic()
    w = audio_io.load_waveform(path, channel_policy=config.channel_policy)
    if w.sample_rate != 44100:
        log.warning("%s: sample rate %d != 44100 Hz", path, w.sample_rate)
    w = audio_io.normalize_amplitude(w, config.target_amp)
    off = config.offset if offset is None else offset
    w = audio_io.extract_excerpt(w, off, config.seconds)
    if config.n_samples is not None:
        if config.n_samples > len(w.samples):
            raise ValueError(f"requested {config.n_samples} samples, have {len(w.samples)}")
        w = audio_io.Waveform(w.samples[: config.n_samples], w.sample_rate)

    try:
        frames = spectral.spectrogram_frames(w)
    except ValueError:
        frames = None
    if frames is None or frames.n < 2:
        log.warning("%s: too short for spectrogram frames, score 0", path)
        card = ScoreCard([0.0], 0.0, 0.0, [0], [0], [0])
    elif config.fixed_k is not None:
        card = multilevel.fixed_k_score(
            frames, K_fixed=config.fixed_k, c=config.precision,
            seed=config.seed, levels=config.levels, K_max=config.kmax,
        )
    else:
        card = multilevel.multilevel_score(
            frames, K_max=config.kmax, c=config.precision,
            seed=config.seed, levels=config.levels,
        )
    base = None
    if config.baselines and frames is not None:
        base = baselines.compute_baselines(w, frames)
    log.info("%s: scored in %.2fs", path, time.monotonic() - t0)
    return ClipResult(str(path), "", card, base)


def _clip_metrics(r: ClipResult) -> dict[str, float]:
    vals = {"ours": r.score.normalized_score}
    if r.base is not None:
        vals.update(
            katz=r.base.katz_fd,
            ent=r.base.spectrogram_entropy,
            zl_ratio=r.base.lz_spectrogram_ratio,
            wav_ratio=r.base.lossless_audio_ratio,
        )
    return vals


def discover_clips(root: str | Path) -> list[tuple[str, str, float]]:
    """(path, class, offset) triples from a class-per-directory tree or manifest."""
    root = Path(root)
    clips: list[tuple[str, str, float]] = []
    if root.is_file():
        for line_no, line in enumerate(root.read_text().splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = [p.strip() for p in line.split(",")]
            if len(parts) < 2:
                raise ValueError(f"{root}:{line_no}: expected 'path,class[,offset]'")
            offset = float(parts[2]) if len(parts) > 2 else 0.0
            clips.append((parts[0], parts[1], offset))
    elif root.is_dir():
        for cls_dir in sorted(p for p in root.iterdir() if p.is_dir()):
            for wav in sorted(cls_dir.glob("*.wav")):
                clips.append((str(wav), cls_dir.name, 0.0))
    else:
        raise FileNotFoundError(root)
    if not clips:
        raise ValueError(f"no clips found under {root}")
    return clips


def _score_task(args: tuple[str, str, float, RunConfig]):
    path, clazz, offset, config = args
    try:
        result = score_clip(path, config, offset=offset)
        return path, clazz, _clip_metrics(result), None
    except Exception as exc:  # per-file failures must not kill the batch
        return path, clazz, None, f"{type(exc).__name__}: {exc}"


def _run_all(clips, config: RunConfig):
    tasks = [(p, cls, off, config) for p, cls, off in clips]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_score_task, tasks))
    else:
        results = [_score_task(t) for t in tasks]
    ok, failed = [], []
    for path, clazz, metrics, err in results:
        if err is None:
            ok.append((path, clazz, metrics))
        else:
            log.error("%s: %s", path, err)
            failed.append(path)
    ok.sort(key=lambda r: r[0])
    return ok, failed


def _summarize(results, class_order):
    """Per-class mean/std per metric, in first-seen class order."""
    rows = []
    for clazz in class_order:
        vals = [m for _, c, m in results if c == clazz]
        if not vals:
            log.warning("class %r: no successful clips, excluded", clazz)
            continue
        row = {"class": clazz, "count": len(vals)}
        for metric in METRICS:
            series = [v[metric] for v in vals if metric in v]
            if series:
                row[f"{metric}_mean"] = float(np.mean(series))
                row[f"{metric}_std"] = float(np.std(series))
        rows.append(row)
    return rows


def _write_csv(path: str | None, header: list[str], rows: list[list]):
    out = open(path, "w", newline="") if path else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([f"{v:.6f}" if isinstance(v, float) else v for v in row])
    finally:
        if path:
            out.close()


def _print_table(rows):
    cols = ["class", "count"] + [f"{m}_{s}" for m in METRICS for s in ("mean", "std")]
    cols = [c for c in cols if any(c in r for r in rows)]
    widths = {c: max(len(c), *(len(_fmt(r.get(c))) for r in rows)) for c in cols}
    print("  ".join(c.ljust(widths[c]) for c in cols))
    for r in rows:
        print("  ".join(_fmt(r.get(c)).ljust(widths[c]) for c in cols))


def _fmt(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, float):
        return f"{v:.2f}"
    return str(v)


def cmd_score(args, config: RunConfig) -> int:
    result = score_clip(args.path, config)
    card = result.score
    print(f"normalized_score: {card.normalized_score:.4f}")
    print(f"raw_bits_total: {card.raw_bits_total:.4f}")
    print(f"raw_bits_per_level: {[round(b, 4) for b in card.raw_bits_per_level]}")
    print(f"K_per_level: {card.K_per_level}")
    print(f"n_per_level: {card.n_per_level}")
    if result.base is not None:
        b = result.base
        print(f"katz_fd: {b.katz_fd:.4f}")
        print(f"spectrogram_entropy: {b.spectrogram_entropy:.4f}")
        print(f"lz_spectrogram_ratio: {b.lz_spectrogram_ratio:.4f}")
        print(f"lossless_audio_ratio: {b.lossless_audio_ratio:.4f} ({b.audio_codec})")
    return 0


def cmd_batch(args, config: RunConfig) -> int:
    clips = discover_clips(args.path)
    class_order = list(dict.fromkeys(c for _, c, _ in clips))
    results, failed = _run_all(clips, config)
    rows = _summarize(results, class_order)
    _print_table(rows)
    if args.out:
        header = ["class", "count"] + [
            f"{m}_{s}" for m in METRICS for s in ("mean", "std")
            if any(f"{m}_{s}" in r for r in rows)
        ]
        _write_csv(args.out, header, [[r.get(c, "") for c in header] for r in rows])
    return 1 if failed else 0


def cmd_sweep(args, config: RunConfig) -> int:
    clips = discover_clips(args.path)
    class_order = list(dict.fromkeys(c for _, c, _ in clips))
    counts = [int(c) for c in args.counts.split(",")]
    csv_rows = []
    any_failed = False
    for count in counts:
        cfg = replace(config, n_samples=count, baselines=False)
        results, failed = _run_all(clips, cfg)
        any_failed |= bool(failed)
        for clazz in class_order:
            series = [m["ours"] for _, c, m in results if c == clazz]
            if not series:
                log.warning("class %r at %d samples: no results, skipped", clazz, count)
                continue
            csv_rows.append([clazz, count, float(np.mean(series)), float(np.std(series))])
    header = ["class", "n_samples", "mean_score", "std"]
    _write_csv(args.out, header, csv_rows)
    return 1 if any_failed else 0


def _load_config_file(path: str) -> dict:
    values = {}
    for line_no, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{line_no}: expected key=value")
        key, _, val = line.partition("=")
        values[key.strip().replace("-", "_")] = val.strip()
    return values


_CONFIG_TYPES = {
    "seconds": float, "offset": float, "seed": int, "kmax": int,
    "precision": int, "levels": int, "fixed_k": int, "target_amp": float,
    "workers": int, "no_baselines": lambda v: v.lower() in ("1", "true", "yes"),
    "channel_policy": str, "out": str, "counts": str,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="meaningscore",
        description="Score the meaningfulness of audio via MDL clustering.",
    )
    parser.add_argument("--config", help="key=value file supplying any flag")
    sub = parser.add_subparsers(dest="command", required=True)
    specs = [
        ("score", "score a single audio file", "path", "audio file"),
        ("batch", "per-class summary over a corpus", "path", "class directory tree or manifest"),
        ("sweep", "scores as a function of sample count", "path", "class directory tree or manifest"),
    ]
    for name, help_text, arg, arg_help in specs:
        p = sub.add_parser(name, help=help_text)
        p.add_argument(arg, help=arg_help)
        p.add_argument("--seconds", type=float, default=1.0)
        p.add_argument("--offset", type=float, default=0.0)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--kmax", type=int, default=DEFAULT_K_MAX)
        p.add_argument("--precision", type=int, default=DEFAULT_PRECISION_BITS)
        p.add_argument("--levels", type=int, default=3, choices=(1, 2, 3))
        p.add_argument("--fixed-k", type=int, default=None)
        p.add_argument("--target-amp", type=float, default=audio_io.DEFAULT_TARGET_MEAN_ABS)
        p.add_argument("--no-baselines", action="store_true")
        p.add_argument("--channel-policy", choices=("average", "first"), default="average")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--out", default=None, help="CSV output path")
        if name == "sweep":
            p.add_argument("--counts", required=True, help="comma-separated sample counts")
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="%(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        overrides = _load_config_file(args.config)
        explicit = set(a.lstrip("-").replace("-", "_").split("=")[0]
                       for a in (argv if argv is not None else sys.argv[1:])
                       if a.startswith("--"))
        for key, raw in overrides.items():
            if key in explicit or not hasattr(args, key):
                continue
            setattr(args, key, _CONFIG_TYPES.get(key, str)(raw))
    config = RunConfig(
        seconds=args.seconds,
        offset=args.offset,
        seed=args.seed,
        kmax=args.kmax,
        precision=args.precision,
        levels=args.levels,
        fixed_k=args.fixed_k,
        target_amp=args.target_amp,
        baselines=not args.no_baselines,
        channel_policy=args.channel_policy,
        workers=args.workers,
    )
    handler = {"score": cmd_score, "batch": cmd_batch, "sweep": cmd_sweep}[args.command]
    return handler(args, config)


if __name__ == "__main__":
    sys.exit(main())
