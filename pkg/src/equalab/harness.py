"""Seeded, parallel Monte Carlo BER/SER sweeps with CSV output.

Determinism contract: every random draw descends from a per-frame seed
sequence derived from (master_seed, stream tag, SNR index, frame index).
Detector identity is deliberately absent from the seed, so every detector at
a given sweep point sees identical channels, data, and noise (paired
comparison). Frames are processed in fixed-size chunks and the early-stopping
decision is taken on the chunk-index-ordered cumulative counts, so results
are bit-identical for any worker count.
"""

from __future__ import annotations

import csv
import os
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .analysis import SerModel, ber_frame, diversity_bound
from .channel import (
    FadingParams,
    build_channel_matrix,
    ChannelRealization,
    convolve_taps,
    jakes_taps,
    ls_estimate,
    sample_noise,
)
from .constellation import Constellation
from .equalizers import batched_detect
from .linalg import OpCounter

# Stream tags keeping the simulation and analytic seed spaces disjoint.
_SIM_STREAM = 0
_ANALYTIC_STREAM = 1

CSV_HEADER = (
    "detector,lf,snr_db,frames,bits,bit_errors,symbol_errors,ber,ser,"
    "wall_seconds,source"
)

OPS_CSV_HEADER = (
    "detector,lf,n,l,measured_mults,measured_adds,model_adds,model_mults"
)

ENV_THREADS = "EQUALAB_THREADS"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class DetectorSpec:
    """A detector id plus its window lengths."""

    detector_id: str
    forward_len: int
    backward_len: int | None = None


@dataclass(frozen=True)
class SweepConfig:
    snr_db_list: tuple[float, ...]
    detectors: tuple[DetectorSpec, ...]
    n_symbols: int = 128
    n_paths: int = 5
    order: int = 2
    fading: FadingParams = field(default_factory=lambda: FadingParams(normalized_doppler=1e-4))
    channel_est: str = "perfect"  # perfect | ls
    trials_max: int = 1_000_000
    min_bit_errors: int = 200
    min_bits: int = 0
    master_seed: int = 0
    chunk_frames: int = 64
    genie_feedback: bool = False
    measure_time: bool = True
    analytic_realizations: int = 200

    def __post_init__(self):
        if not self.snr_db_list:
            raise ConfigError("need at least one SNR point")
        if not self.detectors:
            raise ConfigError("need at least one detector")
        if self.channel_est not in ("perfect", "ls"):
            raise ConfigError(f"unknown channel estimator {self.channel_est!r}")
        if self.trials_max < 1:
            raise ConfigError("trials_max must be >= 1")
        if self.n_symbols < 1 or self.n_paths < 1:
            raise ConfigError("frame and channel lengths must be >= 1")
        if self.min_bit_errors < 100:
            warnings.warn(
                f"min_bit_errors={self.min_bit_errors} < 100: BER confidence "
                "intervals will be wide",
                stacklevel=2,
            )


@dataclass(frozen=True)
class BerRecord:
    detector: str
    lf: int
    snr_db: float
    frames: int
    bits: int
    bit_errors: int
    symbol_errors: int
    ber: float
    ser: float
    wall_seconds: float
    source: str  # sim | analytic

    def as_row(self) -> list:
        return [
            self.detector, self.lf, f"{self.snr_db:g}", self.frames, self.bits,
            self.bit_errors, self.symbol_errors, f"{self.ber:.10g}",
            f"{self.ser:.10g}", f"{self.wall_seconds:.6f}", self.source,
        ]


def _frame_rngs(master_seed: int, snr_idx: int, frame_idx: int):
    """(channel, data, noise) generators for one frame; detector-independent."""
    ss = np.random.SeedSequence([master_seed, _SIM_STREAM, snr_idx, frame_idx])
    ch, data, noise = ss.spawn(3)
    return (
        np.random.default_rng(ch),
        np.random.default_rng(data),
        np.random.default_rng(noise),
    )


def _make_chunk(cfg: SweepConfig, c: Constellation, snr_idx: int,
                frame0: int, n_frames: int):
    """Channels, symbols and received samples for frames frame0..+n_frames.

    Returns (det_taps (B,L,N), true_symbols (B,N), r (B,N+L-1)). With LS
    estimation the fading evolves over a pilot frame followed by the data
    frame; the detector sees the quasi-static pilot estimate while the data
    passes through the true (time-varying) channel.
    """
    L, N = cfg.n_paths, cfg.n_symbols
    sigma2 = 10.0 ** (-cfg.snr_db_list[snr_idx] / 10.0)
    fd_ts = cfg.fading.fd_ts
    use_ls = cfg.channel_est == "ls"
    n_times = 2 * N if use_ls else N

    det_taps = np.empty((n_frames, L, N), dtype=complex)
    symbols = np.empty((n_frames, N), dtype=complex)
    r = np.empty((n_frames, N + L - 1), dtype=complex)
    for b in range(n_frames):
        rng_ch, rng_data, rng_noise = _frame_rngs(cfg.master_seed, snr_idx, frame0 + b)
        taps = jakes_taps(rng_ch, L, n_times, fd_ts, cfg.fading.oscillators)
        s = c.points[rng_data.integers(0, cfg.order, size=N)]
        symbols[b] = s
        if use_ls:
            pilot = c.points[rng_data.integers(0, cfg.order, size=N)]
            r_pilot = convolve_taps(taps[:, :N], pilot)
            r_pilot += sample_noise(rng_noise, N + L - 1, sigma2)
            data_taps = taps[:, N:]
            det_taps[b] = ls_estimate(pilot, r_pilot, L, cfg.fading).taps[:, :N]
        else:
            data_taps = taps
            det_taps[b] = taps
        r[b] = convolve_taps(data_taps, s) + sample_noise(rng_noise, N + L - 1, sigma2)
    return det_taps, symbols, r


def _chunk_errors(cfg: SweepConfig, c: Constellation, spec: DetectorSpec,
                  snr_idx: int, frame0: int, n_frames: int):
    """(frames, bits, bit_errors, symbol_errors) for one chunk."""
    det_taps, symbols, r = _make_chunk(cfg, c, snr_idx, frame0, n_frames)
    sigma2 = 10.0 ** (-cfg.snr_db_list[snr_idx] / 10.0)
    genie = symbols if cfg.genie_feedback else None
    decided = batched_detect(
        spec.detector_id, det_taps, r, sigma2, c, spec.forward_len,
        spec.backward_len, genie_symbols=genie,
    )
    true_idx = c.index_of(symbols)
    dec_idx = c.index_of(decided)
    sym_err = int(np.count_nonzero(true_idx != dec_idx))
    bit_err = int(np.abs(c.gray_map[true_idx] - c.gray_map[dec_idx]).sum())
    bits = n_frames * cfg.n_symbols * c.bits_per_symbol
    return n_frames, bits, bit_err, sym_err


def _n_workers() -> int:
    env = os.environ.get(ENV_THREADS)
    if env:
        return max(1, int(env))
    return min(os.cpu_count() or 1, 8)


def _sweep_point(cfg: SweepConfig, c: Constellation, spec: DetectorSpec,
                 snr_idx: int, pool: ThreadPoolExecutor, workers: int) -> BerRecord:
    t0 = time.perf_counter()
    chunk = cfg.chunk_frames
    n_chunks = -(-cfg.trials_max // chunk)
    frames = bits = bit_err = sym_err = 0
    next_chunk = 0
    done = False
    while not done and next_chunk < n_chunks:
        wave = []
        for _ in range(max(workers, 1)):
            if next_chunk >= n_chunks:
                break
            frame0 = next_chunk * chunk
            size = min(chunk, cfg.trials_max - frame0)
            wave.append(pool.submit(
                _chunk_errors, cfg, c, spec, snr_idx, frame0, size))
            next_chunk += 1
        # reduce strictly in chunk order so early stopping is worker-invariant
        for fut in wave:
            f, b, be, se = fut.result()
            if done:
                continue
            frames += f
            bits += b
            bit_err += be
            sym_err += se
            if bit_err >= cfg.min_bit_errors and bits >= cfg.min_bits:
                done = True
    wall = time.perf_counter() - t0 if cfg.measure_time else 0.0
    return BerRecord(
        detector=spec.detector_id, lf=spec.forward_len,
        snr_db=cfg.snr_db_list[snr_idx], frames=frames, bits=bits,
        bit_errors=bit_err, symbol_errors=sym_err,
        ber=bit_err / bits if bits else 0.0,
        ser=sym_err / (frames * cfg.n_symbols) if frames else 0.0,
        wall_seconds=wall, source="sim",
    )


def run_sweep(cfg: SweepConfig) -> list[BerRecord]:
    """Monte Carlo sweep over every (detector, SNR) pair in the config."""
    c = Constellation.mpsk(cfg.order)
    workers = _n_workers()
    records = []
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for spec in cfg.detectors:
            for snr_idx in range(len(cfg.snr_db_list)):
                records.append(_sweep_point(cfg, c, spec, snr_idx, pool, workers))
    return records


def analytic_records(cfg: SweepConfig, forward_len: int) -> list[BerRecord]:
    """Frame-averaged analytical BER/SER of the block equalizer, averaged over
    ``analytic_realizations`` seeded channel draws per SNR point."""
    L, N, R = cfg.n_paths, cfg.n_symbols, cfg.analytic_realizations
    m = SerModel(cfg.order)
    out = []
    for snr_db in cfg.snr_db_list:
        t0 = time.perf_counter()
        sigma2 = 10.0 ** (-snr_db / 10.0)
        bers = np.empty(R)
        sers = np.empty(R)
        for rr in range(R):
            # the same realizations are reused at every SNR point so the
            # averaged curve is smooth even for modest ensemble sizes
            ss = np.random.SeedSequence([cfg.master_seed, _ANALYTIC_STREAM, rr])
            taps = jakes_taps(np.random.default_rng(ss), L, N,
                              cfg.fading.fd_ts, cfg.fading.oscillators)
            h = build_channel_matrix(ChannelRealization(taps, cfg.fading))
            bers[rr] = ber_frame(h, forward_len, sigma2, m)
            sers[rr] = bers[rr] * m.bits_per_symbol
        wall = time.perf_counter() - t0 if cfg.measure_time else 0.0
        out.append(BerRecord(
            detector="amldfbe", lf=forward_len, snr_db=snr_db, frames=R,
            bits=0, bit_errors=0, symbol_errors=0,
            ber=float(bers.mean()), ser=float(sers.mean()),
            wall_seconds=wall, source="analytic",
        ))
    return out


def bound_records(cfg: SweepConfig, forward_len: int) -> list[BerRecord]:
    """Multipath-diversity SER upper bound, one record per SNR point."""
    m = SerModel(cfg.order)
    out = []
    for snr_db in cfg.snr_db_list:
        snr = 10.0 ** (snr_db / 10.0)
        b = diversity_bound(snr, cfg.n_paths, forward_len, m)
        out.append(BerRecord(
            detector="amldfbe-bound", lf=forward_len, snr_db=snr_db,
            frames=0, bits=0, bit_errors=0, symbol_errors=0,
            ber=min(b / m.bits_per_symbol, 1.0), ser=min(b, 1.0),
            wall_seconds=0.0, source="analytic",
        ))
    return out


def ops_records(cfg: SweepConfig) -> list[dict]:
    """Measured operation counts for one frame per detector, next to the
    closed-form model where one exists."""
    from .analysis import UnknownDetector, complexity_model

    c = Constellation.mpsk(cfg.order)
    rows = []
    for spec in cfg.detectors:
        det_taps, symbols, r = _make_chunk(cfg, c, 0, 0, 1)
        sigma2 = 10.0 ** (-cfg.snr_db_list[0] / 10.0)
        counter = OpCounter()
        batched_detect(spec.detector_id, det_taps, r, sigma2, c,
                       spec.forward_len, spec.backward_len, counter=counter)
        try:
            model_adds, model_mults = complexity_model(
                spec.detector_id, cfg.n_symbols, cfg.n_paths,
                spec.forward_len, spec.backward_len)
        except UnknownDetector:
            model_adds = model_mults = ""
        rows.append({
            "detector": spec.detector_id, "lf": spec.forward_len,
            "n": cfg.n_symbols, "l": cfg.n_paths,
            "measured_mults": counter.mults, "measured_adds": counter.adds,
            "model_adds": model_adds, "model_mults": model_mults,
        })
    return rows


def write_records_csv(records: list[BerRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_HEADER.split(","))
        for rec in records:
            w.writerow(rec.as_row())


def write_ops_csv(rows: list[dict], path) -> None:
    cols = OPS_CSV_HEADER.split(",")
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=cols)
        w.writeheader()
        w.writerows(rows)
