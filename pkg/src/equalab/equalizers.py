"""Block equalizers for banded time-varying FIR channels.

Detectors
---------
* ``amldfbe``      sliding-window decision-feedback block equalizer that
                   matched-filters the received frame, cancels past decisions,
                   and makes per-symbol ML decisions under a Gaussian model of
                   the undetected in-window interference.
* ``amldfbe-nomf`` the same procedure on raw received samples (no matched
                   filter), for ablation studies.
* ``mlse``         exact Viterbi sequence detection over M^(L-1) states.
* ``lmmse``        sliding-window linear MMSE (Wiener) filtering.
* ``mmse-dfe``     sliding-window MMSE decision-feedback equalizer.
* ``exhaustive``   brute-force minimizer of ||r - H s||^2 (oracle).

All detectors exploit the band structure of the channel matrix: column
inner products h_g^H h_i with |g - i| >= L are structurally zero and are
never formed. The internal kernels are batched over independent frames
(leading axis B) so Monte Carlo sweeps amortize numpy call overhead; the
public single-frame functions wrap them with B = 1.

Operation counts returned in :class:`DetectionResult` follow the convention
documented in :mod:`equalab.linalg` and are identical for every frame of a
batch (the work done does not depend on the data).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .channel import ChannelMatrix, ChannelRealization
from .constellation import Constellation
from .linalg import NotPositiveDefinite, OpCounter

# Relative floor applied to sigma^2 before assembling the interference
# covariance: its rank-deficient first term makes the matrix singular at
# sigma^2 = 0.
SIGMA2_REL_FLOOR = 1e-12

DEFAULT_STATE_CAP = 2**20
DEFAULT_SEARCH_CAP = 2**24


class DimensionMismatch(ValueError):
    pass


class StateSpaceTooLarge(ValueError):
    pass


class SearchSpaceTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class AmlDfbeConfig:
    """Window lengths for the decision-feedback block equalizer.

    The backward length is pinned to L-1 by the band structure; forward
    lengths below L are allowed (with a warning) to reproduce short-window
    behaviour.
    """

    forward_len: int
    backward_len: int | None = None
    use_matched_filter: bool = True

    def resolved_backward(self, n_paths: int) -> int:
        return n_paths - 1 if self.backward_len is None else self.backward_len


@dataclass
class DetectionResult:
    symbols: np.ndarray  # (N,) hard decisions
    bits: np.ndarray  # decoded bit stream
    op_count: tuple[int, int]  # (complex multiplications, complex additions)
    diagnostics: np.ndarray | None = None  # per-symbol post-whitening SNR


def _check_frame(taps: np.ndarray, r: np.ndarray) -> None:
    B, L, N = taps.shape
    if r.shape != (B, N + L - 1):
        raise DimensionMismatch(
            f"received batch {r.shape}, expected {(B, N + L - 1)} for L={L}, N={N}"
        )


# ---------------------------------------------------------------------------
# band-limited precomputations
# ---------------------------------------------------------------------------

def gram_band(taps: np.ndarray, counter: OpCounter | None = None) -> np.ndarray:
    """Banded column Gram of the channel matrix.

    Returns (B, N, 2L-1) with Gb[:, i, d + L - 1] = h_i^H h_{i+d} for
    |d| <= L-1 (zero where i+d falls outside the frame). Inner products with
    |d| >= L are structurally zero and never computed.
    """
    B, L, N = taps.shape
    Gb = np.zeros((B, N, 2 * L - 1), dtype=complex)
    for d in range(L):
        n_valid = N - d
        if n_valid <= 0:
            continue
        acc = np.zeros((B, n_valid), dtype=complex)
        for m in range(d, L):
            acc += taps[:, m, :n_valid].conj() * taps[:, m - d, d:d + n_valid]
        Gb[:, :n_valid, L - 1 + d] = acc
        if d > 0:
            Gb[:, d:, L - 1 - d] = Gb[:, :n_valid, L - 1 + d].conj()
    if counter is not None:
        for d in range(L):
            counter.add(mults=(N - d) * (L - d), adds=(N - d) * max(L - d - 1, 0))
    return Gb


def matched_filter_outputs(
    taps: np.ndarray, r: np.ndarray, counter: OpCounter | None = None
) -> np.ndarray:
    """All N matched-filter outputs h_i^H r, (B, N)."""
    B, L, N = taps.shape
    y = np.zeros((B, N), dtype=complex)
    for m in range(L):
        y += taps[:, m, :].conj() * r[:, m:m + N]
    if counter is not None:
        counter.add(mults=N * L, adds=N * max(L - 1, 0))
    return y


class _WindowPattern:
    """Anchor-independent index pattern for gathering Gram windows.

    A window anchored at column a covers rows a..a+Lf-1 of the matched-filter
    system and columns a-Lb..a+Lf-1 of the Gram; entry (w, c) lives at band
    offset c - Lb - w.
    """

    def __init__(self, Lf: int, Lb: int, L: int):
        w = np.arange(Lf)[:, None]
        c = np.arange(Lb + Lf)[None, :]
        off = c - Lb - w
        self.in_band = np.abs(off) <= L - 1
        self.off_idx = np.clip(off, -(L - 1), L - 1) + L - 1
        self.col_rel = c - Lb  # column index relative to the anchor
        self.w = w

    def gather(self, Gb: np.ndarray, anchor: int, N: int) -> np.ndarray:
        rows = anchor + self.w  # (Lf, 1), always valid for anchor <= N - Lf
        cols_ok = (self.col_rel + anchor >= 0) & (self.col_rel + anchor < N)
        win = Gb[:, rows, self.off_idx]
        win *= self.in_band & cols_ok
        return win


class _ColumnPattern:
    """Index pattern for slicing raw channel-matrix windows out of the taps.

    Rows row0..row0+Lf-1 of H against columns row0-Lb..row0+Lf-1; entry
    (w, c) is tap w + Lb - c of column row0 - Lb + c.
    """

    def __init__(self, Lf: int, Lb: int, L: int):
        w = np.arange(Lf)[:, None]
        c = np.arange(Lb + Lf)[None, :]
        tap = w + Lb - c
        self.valid_tap = (tap >= 0) & (tap <= L - 1)
        self.tap_idx = np.clip(tap, 0, L - 1)
        self.col_rel = c - Lb

    def gather(self, taps: np.ndarray, row0: int, N: int) -> np.ndarray:
        cols = self.col_rel + row0
        cols_ok = (cols >= 0) & (cols < N)
        win = taps[:, self.tap_idx, np.clip(cols, 0, N - 1)]
        win *= self.valid_tap & cols_ok
        return win


def _chol_solve_batch(lam: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Batched Hermitian-PD solve via Cholesky factors (no explicit inverse)."""
    try:
        c = np.linalg.cholesky(lam)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from exc
    z = np.linalg.solve(c, rhs)
    return np.linalg.solve(c.conj().transpose(0, 2, 1), z)


# ---------------------------------------------------------------------------
# decision-feedback block equalizer (with and without matched filter)
# ---------------------------------------------------------------------------

def amldfbe_symbols_batch(
    taps: np.ndarray,
    r: np.ndarray,
    forward_len: int,
    sigma2: float,
    constellation: Constellation,
    *,
    use_matched_filter: bool = True,
    genie_symbols: np.ndarray | None = None,
    want_gamma: bool = False,
    counter: OpCounter | None = None,
) -> tuple[np.ndarray, np.ndarray | None]:
    """Batched detector core. taps (B, L, N), r (B, N+L-1).

    Returns (decisions (B, N), gamma (B, N) or None). ``genie_symbols``
    switches the feedback to the true transmitted symbols (analysis mode).
    """
    _check_frame(taps, r)
    B, L, N = taps.shape
    Lf = forward_len
    if not 1 <= Lf <= N:
        raise DimensionMismatch(f"forward length {Lf} outside 1..{N}")
    if Lf < L:
        warnings.warn(
            f"forward length {Lf} < channel length {L}: out-of-window ISI "
            "is ignored and performance degrades",
            stacklevel=2,
        )
    Lb = L - 1
    points = constellation.points
    M = points.shape[0]

    eye = np.eye(Lf)
    decided = np.zeros((B, N), dtype=complex)
    feedback = genie_symbols if genie_symbols is not None else decided
    gamma = np.zeros((B, N)) if want_gamma else None

    def decide(ytil, jk, lam, n_fut):
        """Gaussian-model ML decision; returns (indices, gamma)."""
        b = _chol_solve_batch(lam, jk[:, :, None])[:, :, 0]
        t1 = np.einsum("bw,bw->b", b.conj(), ytil)
        g = np.einsum("bw,bw->b", b.conj(), jk).real
        metric = np.abs(points)[None, :] ** 2 * g[:, None] - 2.0 * (
            points.conj()[None, :] * t1[:, None]
        ).real
        if counter is not None:
            counter.add(mults=Lf * Lf * n_fut, adds=Lf * Lf * n_fut)  # J J^H
            counter.add(mults=Lf * Lf, adds=Lf * Lf)  # + sigma^2 term
            counter.cholesky(Lf)
            counter.triangular_solve_pair(Lf)
            counter.inner_product(Lf, count=2)
            counter.add(mults=M, adds=M)
        return np.argmin(metric, axis=1), g

    def covariance(win, ct, base, trace):
        """Gaussian interference+noise covariance for target offset ct."""
        fut = win[:, :, ct + 1:]
        s2 = np.maximum(sigma2, SIGMA2_REL_FLOOR * trace / Lf)
        lam = fut @ fut.conj().transpose(0, 2, 1)
        lam += s2[:, None, None] * base
        return lam, fut.shape[2]

    if use_matched_filter:
        Gb = gram_band(taps, counter)
        y_all = matched_filter_outputs(taps, r, counter)
        pattern = _WindowPattern(Lf, Lb, L)

        # main phase: slide the window, one anchor per symbol
        for k in range(N - Lf):
            win = pattern.gather(Gb, k, N)
            ytil = y_all[:, k:k + Lf].copy()
            if Lb:
                past = win[:, :, :Lb]
                ytil -= np.einsum(
                    "bwc,bc->bw", past, _padded_slice(feedback, k - Lb, k))
                if counter is not None:
                    counter.add(mults=Lf * Lb, adds=Lf * Lb)
            gram = win[:, :, Lb:]
            tr = np.einsum("bww->b", gram).real
            lam, n_fut = covariance(win, Lb, gram, tr)
            idx, g = decide(ytil, win[:, :, Lb], lam, n_fut)
            decided[:, k] = points[idx]
            if want_gamma:
                gamma[:, k] = g

        # tail: freeze the window at the last anchor (the matched-filter
        # outputs already integrate every received sample) and shrink the
        # undetected set one column per step until the covariance is pure
        # filtered noise
        a0 = N - Lf
        win = pattern.gather(Gb, a0, N)
        gram = win[:, :, Lb:]
        tr = np.einsum("bww->b", gram).real
        ycur = y_all[:, a0:].copy()
        if Lb:
            past = win[:, :, :Lb]
            ycur -= np.einsum(
                "bwc,bc->bw", past, _padded_slice(feedback, a0 - Lb, a0))
            if counter is not None:
                counter.add(mults=Lf * Lb, adds=Lf * Lb)
        for j in range(Lf):
            k = a0 + j
            ct = Lb + j
            lam, n_fut = covariance(win, ct, gram, tr)
            idx, g = decide(ycur, win[:, :, ct], lam, n_fut)
            decided[:, k] = points[idx]
            if want_gamma:
                gamma[:, k] = g
            if j < Lf - 1:
                fb = feedback[:, k] if genie_symbols is not None else decided[:, k]
                ycur = ycur - win[:, :, ct] * fb[:, None]
                if counter is not None:
                    counter.add(mults=Lf, adds=Lf)
    else:
        # raw-sample window: slide over received rows, clamping at the frame
        # end so the last L-1 samples still contribute; every decided
        # in-window symbol is cancelled (the clamped windows hold more than
        # L_b of them)
        pattern = _ColumnPattern(Lf, Lb, L)
        last_row = N + L - 1 - Lf
        for k in range(N):
            row0 = min(k, last_row)
            ct = k - row0 + Lb
            win = pattern.gather(taps, row0, N)
            ytil = r[:, row0:row0 + Lf].copy()
            if ct:
                past = win[:, :, :ct]
                ytil -= np.einsum(
                    "bwc,bc->bw", past, _padded_slice(feedback, k - ct, k))
                if counter is not None:
                    counter.add(mults=Lf * ct, adds=Lf * ct)
            tr = (np.abs(win[:, :, Lb:]) ** 2).sum(axis=(1, 2))
            lam, n_fut = covariance(win, ct, eye, tr)
            idx, g = decide(ytil, win[:, :, ct], lam, n_fut)
            decided[:, k] = points[idx]
            if want_gamma:
                gamma[:, k] = g
    return decided, gamma


def _padded_slice(a: np.ndarray, lo: int, hi: int) -> np.ndarray:
    """a[:, lo:hi] with zeros where indices fall before the frame start."""
    if lo >= 0:
        return a[:, lo:hi]
    pad = np.zeros((a.shape[0], -lo), dtype=a.dtype)
    return np.concatenate([pad, a[:, :hi]], axis=1)


# ---------------------------------------------------------------------------
# Viterbi MLSE
# ---------------------------------------------------------------------------

def mlse_symbols_batch(
    taps: np.ndarray,
    r: np.ndarray,
    constellation: Constellation,
    state_cap: int = DEFAULT_STATE_CAP,
    counter: OpCounter | None = None,
) -> np.ndarray:
    """Exact Viterbi minimizer of ||r - H s||^2 over the symbol alphabet.

    States encode the last L-1 symbol indices (most recent in the lowest
    digit); symbols outside the frame contribute nothing (zero-padded tail
    and start).
    """
    _check_frame(taps, r)
    B, L, N = taps.shape
    points = constellation.points
    M = points.shape[0]
    S = M ** (L - 1)
    if S > state_cap:
        raise StateSpaceTooLarge(f"{S} states exceed cap {state_cap}")

    # branch c = sigma_prev * M + a: digit 0 is the new symbol index a,
    # digits 1..L-1 are the predecessor state; the successor state is
    # c mod M^(L-1) and the dropped oldest digit is c // M^(L-1)
    c_idx = np.arange(S * M)
    sym_window = np.empty((S * M, L), dtype=complex)
    for l in range(L):
        sym_window[:, l] = points[(c_idx // (M ** l)) % M]

    # branches grouped by successor: c = h * S + sigma' ranges over all
    # predecessors h for fixed sigma' when reshaped (M, S)
    pm = np.zeros((B, S))
    bp = np.empty((N, B, S), dtype=np.int8 if M * M <= 127 else np.int16)
    coeff = np.zeros((B, L), dtype=complex)
    for t in range(N):
        coeff[:] = 0
        lmax = min(L - 1, t)
        for l in range(lmax + 1):
            coeff[:, l] = taps[:, l, t - l]
        pred = coeff @ sym_window.T  # (B, S*M)
        bm = np.abs(r[:, t, None] - pred) ** 2
        tot = pm[:, c_idx // M] + bm  # (B, S*M), branch-indexed
        # regroup by successor state: the branch into sigma' whose dropped
        # oldest digit is h sits at c = h * S + sigma'
        tot_by_succ = tot[:, _succ_order(S, M)].reshape(B, S, M)
        h_star = np.argmin(tot_by_succ, axis=2)
        pm = np.take_along_axis(tot_by_succ, h_star[:, :, None], axis=2)[:, :, 0]
        bp[t] = h_star
    # zero-padded tail: times N..N+L-2 depend only on the final state
    if L > 1:
        state_sym = np.empty((S, L - 1), dtype=complex)
        sidx = np.arange(S)
        for i in range(L - 1):
            state_sym[:, i] = points[(sidx // (M ** i)) % M]
        for tau in range(N, N + L - 1):
            coeff_t = np.zeros((B, L - 1), dtype=complex)
            for l in range(tau - N + 1, L):
                i = N - 1 - tau + l
                coeff_t[:, i] = taps[:, l, tau - l]
            pred = coeff_t @ state_sym.T
            pm += np.abs(r[:, tau, None] - pred) ** 2

    if counter is not None:
        counter.add(mults=(N + L - 1) * S * M * (L + 1), adds=(N + L - 1) * S * M * (L + 1))

    # traceback
    state = np.argmin(pm, axis=1)
    out = np.empty((B, N), dtype=complex)
    rows = np.arange(B)
    for t in range(N - 1, -1, -1):
        c = bp[t][rows, state] * S + state  # surviving branch into this state
        out[:, t] = points[c % M]  # digit 0 of the branch is the symbol at t
        state = c // M  # predecessor state
    return out


_SUCC_CACHE: dict[tuple[int, int], np.ndarray] = {}


def _succ_order(S: int, M: int) -> np.ndarray:
    """Branch indices ordered as (successor state, oldest symbol digit)."""
    key = (S, M)
    if key not in _SUCC_CACHE:
        # position (sigma', h) <- branch c = h * S + sigma'
        _SUCC_CACHE[key] = np.add.outer(np.arange(S), np.arange(M) * S).ravel()
    return _SUCC_CACHE[key]


# ---------------------------------------------------------------------------
# MMSE detectors
# ---------------------------------------------------------------------------

def lmmse_symbols_batch(
    taps: np.ndarray,
    r: np.ndarray,
    forward_len: int,
    sigma2: float,
    constellation: Constellation,
    counter: OpCounter | None = None,
) -> np.ndarray:
    """Sliding-window linear MMSE detection (decision delay 0)."""
    _check_frame(taps, r)
    B, L, N = taps.shape
    Lf = forward_len
    if Lf < L:
        raise DimensionMismatch(f"forward length {Lf} must be >= L={L}")
    Lb = L - 1
    pattern = _ColumnPattern(Lf, Lb, L)
    eye = np.eye(Lf)
    out = np.empty((B, N), dtype=complex)
    for k in range(N):
        row0 = min(k, N + L - 1 - Lf)
        ct = k - row0 + Lb
        win = pattern.gather(taps, row0, N)
        a = win @ win.conj().transpose(0, 2, 1) + sigma2 * eye
        w = _chol_solve_batch(a, win[:, :, ct][:, :, None])[:, :, 0]
        est = np.einsum("bw,bw->b", w.conj(), r[:, row0:row0 + Lf])
        out[:, k] = constellation.hard_decision(est)
        if counter is not None:
            nc = Lb + Lf
            counter.add(mults=Lf * Lf * nc + Lf, adds=Lf * Lf * nc + Lf)
            counter.cholesky(Lf)
            counter.triangular_solve_pair(Lf)
            counter.inner_product(Lf)
    return out


def mmse_dfe_symbols_batch(
    taps: np.ndarray,
    r: np.ndarray,
    forward_len: int,
    backward_len: int,
    sigma2: float,
    constellation: Constellation,
    genie_symbols: np.ndarray | None = None,
    counter: OpCounter | None = None,
) -> np.ndarray:
    """Sliding-window MMSE-DFE: forward Wiener filter computed under the
    perfect-cancellation assumption for the last ``backward_len`` symbols,
    backward taps from the filtered channel, sequential decisions."""
    _check_frame(taps, r)
    B, L, N = taps.shape
    Lf = forward_len
    if Lf < L:
        raise DimensionMismatch(f"forward length {Lf} must be >= L={L}")
    if backward_len < 1:
        raise DimensionMismatch("backward length must be >= 1")
    Lb = L - 1
    nb = min(backward_len, Lb)  # feedback taps beyond L-1 are structurally 0
    pattern = _ColumnPattern(Lf, Lb, L)
    eye = np.eye(Lf)
    decided = np.zeros((B, N), dtype=complex)
    feedback = genie_symbols if genie_symbols is not None else decided
    for k in range(N):
        row0 = min(k, N + L - 1 - Lf)
        ct = k - row0 + Lb
        win = pattern.gather(taps, row0, N)
        fut = win[:, :, ct:]
        a = fut @ fut.conj().transpose(0, 2, 1) + sigma2 * eye
        w = _chol_solve_batch(a, win[:, :, ct][:, :, None])[:, :, 0]
        est = np.einsum("bw,bw->b", w.conj(), r[:, row0:row0 + Lf])
        if nb:
            past = win[:, :, ct - nb:ct]  # columns k-nb .. k-1
            bc = np.einsum("bw,bwc->bc", w.conj(), past)
            est -= np.einsum("bc,bc->b", bc, _padded_slice(feedback, k - nb, k))
        decided[:, k] = constellation.hard_decision(est)
        if counter is not None:
            nc = Lf + Lb - ct
            counter.add(mults=Lf * Lf * nc + Lf, adds=Lf * Lf * nc + Lf)
            counter.cholesky(Lf)
            counter.triangular_solve_pair(Lf)
            counter.inner_product(Lf, count=1 + nb)
            counter.add(mults=nb, adds=nb)
    return decided


# ---------------------------------------------------------------------------
# exhaustive oracle
# ---------------------------------------------------------------------------

def exhaustive_ml(
    h: ChannelMatrix,
    r: np.ndarray,
    constellation: Constellation,
    search_cap: int = DEFAULT_SEARCH_CAP,
) -> np.ndarray:
    """argmin over all A^N of ||r - H s||^2; ties break to the
    lexicographically smallest symbol-index vector."""
    L, N = h.band
    M = constellation.order
    total = M ** N
    if total > search_cap:
        raise SearchSpaceTooLarge(f"{M}^{N} sequences exceed cap {search_cap}")
    r = np.asarray(r, dtype=complex)
    if r.shape != (N + L - 1,):
        raise DimensionMismatch(f"received frame {r.shape}, expected {(N + L - 1,)}")
    best_cost = np.inf
    best_seq = None
    chunk = 1 << 14
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total))
        digits = np.stack(
            [(idx // (M ** (N - 1 - j))) % M for j in range(N)], axis=1
        )  # lexicographic enumeration, first symbol most significant
        seqs = constellation.points[digits]
        resid = r[None, :] - seqs @ h.h.T
        cost = np.einsum("ij,ij->i", resid, resid.conj()).real
        i = int(np.argmin(cost))
        if cost[i] < best_cost:
            best_cost = cost[i]
            best_seq = seqs[i]
    return best_seq


# ---------------------------------------------------------------------------
# single-frame public API
# ---------------------------------------------------------------------------

def _result(
    symbols: np.ndarray,
    constellation: Constellation,
    counter: OpCounter,
    gamma: np.ndarray | None = None,
) -> DetectionResult:
    return DetectionResult(
        symbols=symbols,
        bits=constellation.demodulate(symbols),
        op_count=counter.as_tuple(),
        diagnostics=gamma,
    )


def amldfbe_detect(
    h: ChannelMatrix,
    r: np.ndarray,
    cfg: AmlDfbeConfig,
    constellation: Constellation,
    sigma2: float,
    genie_symbols: np.ndarray | None = None,
    want_gamma: bool = False,
) -> DetectionResult:
    """Decision-feedback block equalization of one frame (true or estimated H)."""
    if sigma2 <= 0:
        raise ValueError("sigma2 must be positive")
    taps = h.taps()[None]
    counter = OpCounter()
    genie = None if genie_symbols is None else np.asarray(genie_symbols)[None]
    sym, gamma = amldfbe_symbols_batch(
        taps,
        np.asarray(r, dtype=complex)[None],
        cfg.forward_len,
        sigma2,
        constellation,
        use_matched_filter=cfg.use_matched_filter,
        genie_symbols=genie,
        want_gamma=want_gamma,
        counter=counter,
    )
    return _result(sym[0], constellation, counter, None if gamma is None else gamma[0])


def amldfbe_detect_no_mf(
    h: ChannelMatrix,
    r: np.ndarray,
    cfg: AmlDfbeConfig,
    constellation: Constellation,
    sigma2: float,
    genie_symbols: np.ndarray | None = None,
) -> DetectionResult:
    """Matched-filter ablation: the window sees raw received samples."""
    cfg = AmlDfbeConfig(cfg.forward_len, cfg.backward_len, use_matched_filter=False)
    return amldfbe_detect(h, r, cfg, constellation, sigma2, genie_symbols)


def mlse_detect(
    real: ChannelRealization,
    r: np.ndarray,
    constellation: Constellation,
    state_cap: int = DEFAULT_STATE_CAP,
) -> DetectionResult:
    counter = OpCounter()
    sym = mlse_symbols_batch(
        real.taps[None], np.asarray(r, dtype=complex)[None], constellation,
        state_cap=state_cap, counter=counter,
    )
    return _result(sym[0], constellation, counter)


def linear_mmse_detect(
    h: ChannelMatrix,
    r: np.ndarray,
    constellation: Constellation,
    sigma2: float,
    forward_len: int,
) -> DetectionResult:
    counter = OpCounter()
    sym = lmmse_symbols_batch(
        h.taps()[None], np.asarray(r, dtype=complex)[None], forward_len, sigma2,
        constellation, counter=counter,
    )
    return _result(sym[0], constellation, counter)


def mmse_dfe_detect(
    h: ChannelMatrix,
    r: np.ndarray,
    constellation: Constellation,
    sigma2: float,
    forward_len: int,
    backward_len: int,
    genie_symbols: np.ndarray | None = None,
) -> DetectionResult:
    counter = OpCounter()
    genie = None if genie_symbols is None else np.asarray(genie_symbols)[None]
    sym = mmse_dfe_symbols_batch(
        h.taps()[None], np.asarray(r, dtype=complex)[None], forward_len,
        backward_len, sigma2, constellation, genie_symbols=genie, counter=counter,
    )
    return _result(sym[0], constellation, counter)


DETECTOR_IDS = ("amldfbe", "amldfbe-nomf", "mlse", "lmmse", "mmse-dfe", "exhaustive")


def batched_detect(
    detector_id: str,
    taps: np.ndarray,
    r: np.ndarray,
    sigma2: float,
    constellation: Constellation,
    forward_len: int,
    backward_len: int | None = None,
    genie_symbols: np.ndarray | None = None,
    counter: OpCounter | None = None,
) -> np.ndarray:
    """Uniform batched entry point keyed by detector id (harness interface)."""
    L = taps.shape[1]
    if detector_id == "amldfbe":
        return amldfbe_symbols_batch(
            taps, r, forward_len, sigma2, constellation,
            genie_symbols=genie_symbols, counter=counter,
        )[0]
    if detector_id == "amldfbe-nomf":
        return amldfbe_symbols_batch(
            taps, r, forward_len, sigma2, constellation,
            use_matched_filter=False, genie_symbols=genie_symbols, counter=counter,
        )[0]
    if detector_id == "mlse":
        return mlse_symbols_batch(taps, r, constellation, counter=counter)
    if detector_id == "lmmse":
        return lmmse_symbols_batch(taps, r, forward_len, sigma2, constellation, counter=counter)
    if detector_id == "mmse-dfe":
        lb = backward_len if backward_len is not None else max(L - 1, 1)
        return mmse_dfe_symbols_batch(
            taps, r, forward_len, lb, sigma2, constellation,
            genie_symbols=genie_symbols, counter=counter,
        )
    if detector_id == "exhaustive":
        from .channel import build_channel_matrix, ChannelRealization

        out = np.empty((taps.shape[0], taps.shape[2]), dtype=complex)
        for b in range(taps.shape[0]):
            hm = build_channel_matrix(ChannelRealization(taps[b], params=None))
            out[b] = exhaustive_ml(hm, r[b], constellation)
        return out
    raise ValueError(f"unknown detector id {detector_id!r}")
