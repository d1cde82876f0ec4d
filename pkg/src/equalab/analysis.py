"""Analytical performance and complexity models for the block equalizers.

With genie-aided feedback and a full window, the decision statistic for
symbol k reduces to an effective scalar channel y' = xi * s + v with
post-whitening SNR gamma = xi = j_k^H Lambda_k^{-1} j_k. This module
computes that SNR exactly, its high-SNR closed form, the resulting M-PSK
SER/BER via the Craig integral, a multipath diversity bound, and closed-form
operation-count polynomials for the sliding-window detectors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelMatrix
from .equalizers import _WindowPattern, gram_band
from .linalg import DEFAULT_QUAD_NODES, solve_hermitian_pd


class UnknownDetector(ValueError):
    pass


@dataclass(frozen=True)
class EffectiveScalarChannel:
    """Scalar-channel reduction of one whitened window decision.

    The whitened statistic has gain ``xi`` on the desired symbol and noise
    variance equal to ``xi``, so the SNR is gamma = xi.
    """

    xi: float
    noise_var: float

    @property
    def gamma(self) -> float:
        return self.xi

    def __post_init__(self):
        if self.xi < 0:
            raise ValueError("effective gain must be non-negative")


@dataclass(frozen=True)
class SerModel:
    """M-PSK symbol-error model; g_psk = sin^2(pi/M)."""

    order: int

    def __post_init__(self):
        if self.order < 2 or self.order & (self.order - 1):
            raise ValueError("constellation order must be a power of two >= 2")

    @property
    def g_psk(self) -> float:
        return float(np.sin(np.pi / self.order) ** 2)

    @property
    def bits_per_symbol(self) -> int:
        return self.order.bit_length() - 1


def interference_covariance(
    h: ChannelMatrix, k: int, forward_len: int, sigma2: float
) -> tuple[np.ndarray, np.ndarray]:
    """(Lambda_k, j_k) for a full window anchored at symbol k (1-based).

    k ranges over 1..N-L_f+2; the last index reuses the final full-window
    anchor (the averaging range includes it, but no further full window
    exists).
    """
    L, N = h.band
    Lf = forward_len
    if not 1 <= Lf <= N:
        raise ValueError(f"forward length {Lf} outside 1..{N}")
    if not 1 <= k <= N - Lf + 2:
        raise ValueError(f"symbol index {k} outside 1..{N - Lf + 2}")
    if sigma2 <= 0:
        raise ValueError("sigma2 must be positive")
    anchor = min(k - 1, N - Lf)
    taps = h.taps()[None]
    Gb = gram_band(taps)
    win = _WindowPattern(Lf, L - 1, L).gather(Gb, anchor, N)[0]
    fut = win[:, L:]
    lam = fut @ fut.conj().T + sigma2 * win[:, L - 1:]
    return lam, win[:, L - 1]


def effective_scalar_channel(
    h: ChannelMatrix, k: int, forward_len: int, sigma2: float
) -> EffectiveScalarChannel:
    lam, jk = interference_covariance(h, k, forward_len, sigma2)
    xi = float((jk.conj() @ solve_hermitian_pd(lam, jk)).real)
    return EffectiveScalarChannel(xi=xi, noise_var=xi)


def gamma_k(h: ChannelMatrix, k: int, forward_len: int, sigma2: float) -> float:
    """Exact post-whitening SNR j_k^H Lambda_k^{-1} j_k (PD solve, no inverse)."""
    return effective_scalar_channel(h, k, forward_len, sigma2).gamma


def gamma_high_snr(taps_at_t, forward_len: int, sigma2: float) -> float:
    """Closed-form high-SNR approximation of the post-whitening SNR:
    (1 / (sigma^2 L_f)) * sum_{i=0}^{min(L_f-1, L-1)} |h_i(t)|^2."""
    if sigma2 <= 0:
        raise ValueError("sigma2 must be positive")
    g = np.asarray(taps_at_t, dtype=complex).ravel()
    n = min(forward_len, g.shape[0])
    return float(np.sum(np.abs(g[:n]) ** 2) / (sigma2 * forward_len))


def ser_mpsk(gamma, m: SerModel, nodes: int = DEFAULT_QUAD_NODES):
    """M-PSK symbol error rate at post-whitening SNR gamma:
    (1/pi) * int_0^{(M-1)pi/M} exp(-g_psk * gamma / sin^2 theta) d theta.

    Accepts a scalar or array gamma; fixed Gauss-Legendre quadrature.
    """
    gamma_arr = np.asarray(gamma, dtype=float)
    if np.any(gamma_arr < 0):
        raise ValueError("gamma must be non-negative")
    hi = (m.order - 1) * np.pi / m.order
    x, w = np.polynomial.legendre.leggauss(nodes)
    theta = 0.5 * hi * (x + 1.0)
    vals = np.exp(-m.g_psk * gamma_arr[..., None] / np.sin(theta) ** 2)
    out = (0.5 * hi / np.pi) * (vals @ w)
    out = np.clip(out, 0.0, 1.0)
    return float(out) if np.isscalar(gamma) or gamma_arr.ndim == 0 else out


def ber_frame(h: ChannelMatrix, forward_len: int, sigma2: float, m: SerModel) -> float:
    """Frame-average analytical BER: mean over k = 1..N-L_f+2 of
    SER(gamma_k) / log2(M), under genie feedback (tail symbols excluded)."""
    L, N = h.band
    ks = range(1, N - forward_len + 3)
    gammas = np.array([gamma_k(h, k, forward_len, sigma2) for k in ks])
    return float(np.mean(ser_mpsk(gammas, m)) / m.bits_per_symbol)


def diversity_bound(
    snr: float, n_paths: int, forward_len: int, m: SerModel, sin2_theta: float = 1.0
) -> float:
    """Rayleigh-averaged Chernoff bound on SER:
    0.5 * (g_psk * SNR / (L * L_f * sin^2 theta))^{-L}.

    Log-log slope against SNR is exactly -L (full multipath diversity).
    """
    if snr <= 0:
        raise ValueError("snr must be positive (linear scale)")
    if not 0 < sin2_theta <= 1:
        raise ValueError("sin2_theta must lie in (0, 1]")
    base = m.g_psk * snr / (n_paths * forward_len * sin2_theta)
    return 0.5 * base ** (-n_paths)


# Closed-form operation-count polynomials (per frame of N symbols) for the
# sliding-window schemes, BPSK, as (additions, multiplications). They reflect
# dense per-window processing with explicit inverses and are pessimistic
# relative to the measured counters (see complexity demos); only growth order
# and bounded ratios are asserted against measurements.
def complexity_model(
    detector_id: str, n_symbols: int, n_paths: int, forward_len: int,
    backward_len: int | None = None,
) -> tuple[int, int]:
    N, L, Lf = n_symbols, n_paths, forward_len
    Lb = backward_len if backward_len is not None else L - 1
    if detector_id == "amldfbe":
        adds = N * (8 * Lf**3 + 34 * Lf**2 + (6 * L + 7) * Lf + (3 * L - 1))
        mults = N * (2 * Lf**3 + 42 * Lf**2 - (12 * L + 19) * Lf + 18)
    elif detector_id == "lmmse":
        adds = N * (8 * Lf**3 + 30 * Lf**2 + 2 * (3 * L + 2) * Lf)
        mults = N * (2 * Lf**3 + 42 * Lf**2 - (12 * L - 17) * Lf - (6 * L - 1))
    elif detector_id == "mmse-dfe":
        adds = N * (
            8 * (Lf**3 + Lb**3) + 42 * (Lf**2 + Lb**2) + 2 * (3 * L + 2) * (Lf + Lb)
        )
        mults = N * (
            2 * (Lf**3 + Lb**3) + 42 * (Lf**2 + Lb**2) + (12 * L - 11) * (Lf + Lb) + 6
        )
    elif detector_id == "bad":
        adds = N * (
            16 * (Lf**3 + Lb**3) + 84 * (Lf**2 + Lb**2) + 4 * (3 * L + 2) * (Lf + Lb)
        )
        mults = N * (
            4 * (Lf**3 + Lb**3) + 84 * (Lf**2 + Lb**2) + 2 * (12 * L - 11) * (Lf + Lb) + 12
        )
    else:
        raise UnknownDetector(f"no complexity row for {detector_id!r}")
    return adds, mults
