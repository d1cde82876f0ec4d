"""Doubly selective Rayleigh channel simulation.

Jakes'-style sum-of-sinusoids fading per path, banded Toeplitz-like channel
matrix construction, transmission with AWGN, and least-squares channel
estimation from a pilot frame.

The channel is a length-L FIR filter with time-varying taps h_l(t). A frame
of N symbols produces N+L-1 received samples (implicit zero-padding guard
between frames). The per-tap average power is 1/L (uniform power-delay
profile), so the total channel power is 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0

# Sum-of-sinusoids order per tap.
DEFAULT_OSCILLATORS = 16

# sigma^2 stand-in for "noiseless" runs; NoiseModel requires sigma^2 > 0.
NOISELESS_SIGMA2 = 1e-30


class RankDeficientPilot(ValueError):
    """Raised when the pilot's convolution matrix is singular."""


@dataclass(frozen=True)
class FadingParams:
    """Doppler specification, either physical (f_c, T_s, v) or normalized.

    ``normalized_doppler`` (f_d * T_s), when given, overrides the physical
    triple.
    """

    carrier_hz: float = 2e9
    symbol_period_s: float = 128.0 / SPEED_OF_LIGHT
    speed_mps: float = 0.0
    oscillators: int = DEFAULT_OSCILLATORS
    normalized_doppler: float | None = None

    def __post_init__(self):
        if self.oscillators < 8:
            raise ValueError("need at least 8 oscillators per tap")
        if self.fd_ts < 0:
            raise ValueError("normalized Doppler must be non-negative")

    @property
    def fd_ts(self) -> float:
        """Normalized maximum Doppler f_d * T_s."""
        if self.normalized_doppler is not None:
            return self.normalized_doppler
        fd = self.speed_mps * self.carrier_hz / SPEED_OF_LIGHT
        return fd * self.symbol_period_s


@dataclass
class ChannelRealization:
    """Per-path, per-symbol-time complex taps; taps[l, t] = h_{l+1}(t)."""

    taps: np.ndarray  # (L, N) complex
    params: FadingParams

    @property
    def n_paths(self) -> int:
        return self.taps.shape[0]

    @property
    def n_symbols(self) -> int:
        return self.taps.shape[1]


@dataclass
class ChannelMatrix:
    """Dense (N+L-1) x N channel matrix with band-structure metadata.

    entry(i, j) = taps[i-j, j] for 0 <= i-j <= L-1 and exactly 0 elsewhere,
    so columns g and i are structurally orthogonal whenever |g - i| >= L.
    """

    h: np.ndarray  # (N+L-1, N) complex
    band: tuple[int, int]  # (L, N)

    @property
    def n_paths(self) -> int:
        return self.band[0]

    @property
    def n_symbols(self) -> int:
        return self.band[1]

    def taps(self) -> np.ndarray:
        """Recover the (L, N) tap array from the band of the matrix."""
        L, N = self.band
        cols = np.arange(N)
        return np.stack([self.h[cols + l, cols] for l in range(L)])


@dataclass(frozen=True)
class NoiseModel:
    """Complex AWGN with variance sigma^2 per complex sample."""

    variance: float

    def __post_init__(self):
        if self.variance <= 0:
            raise ValueError("noise variance must be positive")

    @classmethod
    def from_snr_db(cls, snr_db: float, symbol_energy: float = 1.0) -> "NoiseModel":
        return cls(symbol_energy / 10.0 ** (snr_db / 10.0))


def jakes_taps(
    rng: np.random.Generator, n_paths: int, n_symbols: int, fd_ts: float,
    oscillators: int = DEFAULT_OSCILLATORS,
) -> np.ndarray:
    """Raw sum-of-sinusoids taps, (L, N) complex, per-tap mean power 1/L.

    Each tap is an independent sum of ``oscillators`` complex sinusoids with
    uniformly random arrival angles and phases, giving the Bessel J0
    autocorrelation of the Jakes spectrum in expectation. For fd_ts = 0 each
    tap is constant over time.
    """
    L, N, Q = n_paths, n_symbols, oscillators
    angles = rng.uniform(0.0, 2.0 * np.pi, size=(L, Q))
    phases = rng.uniform(0.0, 2.0 * np.pi, size=(L, Q))
    t = np.arange(N)
    # (L, Q, N) phase evolution collapsed over oscillators
    arg = (2.0 * np.pi * fd_ts) * np.cos(angles)[:, :, None] * t[None, None, :]
    arg = arg + phases[:, :, None]
    taps = np.exp(1j * arg).sum(axis=1) / np.sqrt(Q * L)
    return taps


def jakes_realize(
    params: FadingParams, n_paths: int, n_symbols: int, seed
) -> ChannelRealization:
    """Generate a doubly selective Rayleigh realization, deterministic in seed."""
    if n_paths < 1 or n_symbols < 1:
        raise ValueError("need n_paths >= 1 and n_symbols >= 1")
    rng = np.random.default_rng(seed)
    taps = jakes_taps(rng, n_paths, n_symbols, params.fd_ts, params.oscillators)
    return ChannelRealization(taps=taps, params=params)


def build_channel_matrix(real: ChannelRealization) -> ChannelMatrix:
    """Assemble the banded (N+L-1) x N matrix from a realization."""
    L, N = real.taps.shape
    h = np.zeros((N + L - 1, N), dtype=complex)
    cols = np.arange(N)
    for l in range(L):
        h[cols + l, cols] = real.taps[l]
    return ChannelMatrix(h=h, band=(L, N))


def convolve_taps(taps: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Noiseless channel output H s for time-varying taps, length N+L-1."""
    L, N = taps.shape
    out = np.zeros(N + L - 1, dtype=complex)
    for l in range(L):
        out[l:l + N] += taps[l] * s
    return out


def transmit(h: ChannelMatrix, s: np.ndarray, noise: NoiseModel, seed) -> np.ndarray:
    """r = H s + n with circular complex Gaussian noise, deterministic in seed."""
    L, N = h.band
    s = np.asarray(s, dtype=complex)
    if s.shape != (N,):
        raise ValueError(f"expected frame of length {N}, got {s.shape}")
    rng = np.random.default_rng(seed)
    n = sample_noise(rng, N + L - 1, noise.variance)
    return convolve_taps(h.taps(), s) + n


def sample_noise(rng: np.random.Generator, n: int, variance: float) -> np.ndarray:
    """Circular complex Gaussian, variance per complex sample (half per dim)."""
    scale = np.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n))


def pilot_convolution_matrix(pilot: np.ndarray, n_paths: int) -> np.ndarray:
    """(N_p + L - 1) x L convolution matrix of a pilot sequence."""
    pilot = np.asarray(pilot, dtype=complex)
    n_p = pilot.shape[0]
    L = n_paths
    s_mat = np.zeros((n_p + L - 1, L), dtype=complex)
    for l in range(L):
        s_mat[l:l + n_p, l] = pilot
    return s_mat


def ls_estimate(pilot: np.ndarray, r: np.ndarray, n_paths: int,
                params: FadingParams | None = None) -> ChannelRealization:
    """Static-tap least-squares channel estimate from a pilot frame.

    Solves min_h ||r - S h||^2 with S the pilot convolution matrix; the
    estimate is replicated across symbol times (quasi-static).

    Raises:
        RankDeficientPilot: if S^H S is singular (e.g. an all-zero pilot).
    """
    pilot = np.asarray(pilot, dtype=complex)
    r = np.asarray(r, dtype=complex)
    L = n_paths
    n_p = pilot.shape[0]
    if n_p < 2 * L:
        raise ValueError(f"pilot of length {n_p} too short for {L} paths")
    if r.shape != (n_p + L - 1,):
        raise ValueError(f"expected received pilot of length {n_p + L - 1}")
    s_mat = pilot_convolution_matrix(pilot, L)
    gram = s_mat.conj().T @ s_mat
    sv = np.linalg.svd(gram, compute_uv=False)
    if sv[-1] <= 1e-12 * max(sv[0], 1e-300):
        raise RankDeficientPilot("pilot convolution matrix is rank deficient")
    h_hat = np.linalg.solve(gram, s_mat.conj().T @ r)
    taps = np.repeat(h_hat[:, None], n_p, axis=1)
    return ChannelRealization(taps=taps, params=params or FadingParams(normalized_doppler=0.0))


def save_realization_csv(real: ChannelRealization, path) -> None:
    """Fixture format: one row per symbol time, (re, im) pairs l = 1..L."""
    L, N = real.taps.shape
    flat = np.empty((N, 2 * L))
    flat[:, 0::2] = real.taps.T.real
    flat[:, 1::2] = real.taps.T.imag
    header = ",".join(f"re_l{l + 1},im_l{l + 1}" for l in range(L))
    np.savetxt(path, flat, delimiter=",", header=header, comments="")


def load_realization_csv(path, params: FadingParams | None = None) -> ChannelRealization:
    flat = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    taps = (flat[:, 0::2] + 1j * flat[:, 1::2]).T
    return ChannelRealization(taps=taps, params=params or FadingParams(normalized_doppler=0.0))
