"""Complex dense linear algebra and fixed-order quadrature.

Vectors and matrices are plain numpy arrays (complex128). Everything here is
pure: same inputs give bit-identical outputs, and nothing mutates its
arguments, so values are freely shareable across workers.

Operation counting: detectors account their work in complex multiplications
and additions through :class:`OpCounter`. The convention follows Golub/Van
Loan flop counting with one "flop" split into its multiply and add halves:
a length-n inner product is n multiplications and n-1 additions, a Cholesky
factorization of an n x n Hermitian matrix is n^3/3 multiplications and
n^3/3 additions, and a forward/backward triangular solve pair is n^2
multiplications and n^2 additions per right-hand side.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg


class NotPositiveDefinite(ValueError):
    """Raised when a matrix required to be Hermitian PD fails factorization."""


class ConvergenceFailure(RuntimeError):
    """Raised when an eigensolver does not converge."""


# Relative eigenvalue floor below which a matrix is treated as singular.
PD_EIGENVALUE_FLOOR = 1e-14

# Fixed quadrature order used for all SER integrals.
DEFAULT_QUAD_NODES = 64


class OpCounter:
    """Accumulator for complex multiplication/addition counts."""

    __slots__ = ("mults", "adds")

    def __init__(self) -> None:
        self.mults = 0
        self.adds = 0

    def add(self, mults: int | float = 0, adds: int | float = 0) -> None:
        self.mults += int(mults)
        self.adds += int(adds)

    def cholesky(self, n: int) -> None:
        self.add(mults=n**3 // 3, adds=n**3 // 3)

    def triangular_solve_pair(self, n: int, nrhs: int = 1) -> None:
        self.add(mults=nrhs * n * n, adds=nrhs * n * n)

    def inner_product(self, n: int, count: int = 1) -> None:
        self.add(mults=count * n, adds=count * max(n - 1, 0))

    def matmul(self, m: int, n: int, p: int) -> None:
        self.add(mults=m * p * n, adds=m * p * max(n - 1, 0))

    def as_tuple(self) -> tuple[int, int]:
        return (self.mults, self.adds)


def hermitian_transpose(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose of a 2-D array."""
    a = np.asarray(a)
    return a.conj().T.copy()


def check_hermitian(a: np.ndarray, rtol: float = 1e-12) -> np.ndarray:
    """Validate that ``a`` is square and Hermitian to within ``rtol``."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    scale = np.linalg.norm(a)
    if scale > 0 and np.linalg.norm(a - a.conj().T) > rtol * scale * a.shape[0]:
        raise ValueError("matrix is not Hermitian within tolerance")
    return a


def solve_hermitian_pd(
    a: np.ndarray, b: np.ndarray, counter: OpCounter | None = None
) -> np.ndarray:
    """Solve a x = b for Hermitian positive definite ``a``.

    Uses a Cholesky factorization; never forms an explicit inverse.

    Raises:
        NotPositiveDefinite: if the factorization hits a non-positive pivot.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    n = a.shape[0]
    if a.shape != (n, n) or b.shape[0] != n:
        raise ValueError(f"dimension mismatch: a {a.shape}, b {b.shape}")
    try:
        c, low = scipy.linalg.cho_factor(a, lower=True, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from exc
    if counter is not None:
        counter.cholesky(n)
        counter.triangular_solve_pair(n, nrhs=1 if b.ndim == 1 else b.shape[1])
    return scipy.linalg.cho_solve((c, low), b, check_finite=False)


def eigh(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns (eigenvalues ascending, unitary eigenvector matrix U) with
    a = U diag(w) U^H.
    """
    a = check_hermitian(a)
    try:
        w, u = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    return w, u


def inv_sqrt_pd(a: np.ndarray) -> np.ndarray:
    """Unique Hermitian PD inverse square root of a Hermitian PD matrix.

    Raises:
        NotPositiveDefinite: if any eigenvalue falls at or below
            ``PD_EIGENVALUE_FLOOR`` times the spectral radius.
    """
    w, u = eigh(a)
    if w[-1] <= 0 or w[0] <= PD_EIGENVALUE_FLOOR * w[-1]:
        raise NotPositiveDefinite(
            f"eigenvalue {w[0]:.3e} below floor relative to {w[-1]:.3e}"
        )
    return (u * (1.0 / np.sqrt(w))) @ u.conj().T


def integrate_fixed(f, lo: float, hi: float, nodes: int = DEFAULT_QUAD_NODES) -> float:
    """Gauss-Legendre quadrature of ``f`` on [lo, hi] with ``nodes`` points.

    Deterministic for fixed inputs; ``f`` must be finite on the interval and
    accept numpy arrays.
    """
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    if nodes < 2:
        raise ValueError("nodes must be >= 2")
    x, w = np.polynomial.legendre.leggauss(nodes)
    t = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
    return float(0.5 * (hi - lo) * np.sum(w * f(t)))
