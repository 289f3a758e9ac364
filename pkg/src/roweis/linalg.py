"""Dense symmetric eigensolvers, PSD factorization, and truncated SVD.

This is the numerical substrate for every other module. All inputs are plain
float64 numpy arrays. Eigenpairs come back sorted by non-increasing
eigenvalue, and eigenvector signs are fixed deterministically: the entry of
largest absolute value in each column is made positive. The generalized
solver factors the constraint matrix with a Cholesky decomposition,
regularizing its diagonal only when the factorization fails, so that the
returned basis satisfies ``U.T @ B' @ U = I`` for the (possibly shifted)
constraint ``B'``.

Everything here is pure and thread-safe.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._util import as_matrix, as_square, sym
from .exceptions import ConfigError, NumericalError

# Absolute tolerance for accepting a matrix as symmetric.
SYMMETRY_ATOL = 1e-10

# Eigenvalues of a nominally PSD matrix may dip this far below zero before
# the matrix is rejected: anything >= -PSD_ABS_TOL is always tolerated, and
# beyond that the dip must stay within PSD_REL_TOL of the Frobenius norm.
PSD_ABS_TOL = 1e-10
PSD_REL_TOL = 1e-6

# Eigenvalues below this fraction of the largest are solver noise on a
# rank-deficient matrix; square roots would inflate them to ~1e-8 relative,
# so PSD square-root factorizations zero them instead.
EIG_NOISE_RTOL = 1e-13

# A constraint matrix counts as numerically singular (and gets shifted) when
# its condition number exceeds this; past it the Cholesky back-transform
# cannot hold the 1e-8 residual contract in double precision.
CONSTRAINT_COND_MAX = 1e6


@dataclass(frozen=True)
class RegPolicy:
    """Diagonal-loading schedule for singular constraint matrices.

    A shift of ``scale * trace(B) / m`` is added to the diagonal only after a
    plain Cholesky factorization fails, starting at ``base_scale`` and growing
    by ``growth`` per retry up to ``max_scale``. When the matrix has zero
    trace the unit falls back to 1.0 so that a usable absolute shift exists.
    """

    base_scale: float = 1e-8
    max_scale: float = 1e-2
    growth: float = 10.0

    def unit(self, b: np.ndarray) -> float:
        mean_diag = float(np.trace(b)) / b.shape[0]
        return mean_diag if mean_diag > 0.0 else 1.0


@dataclass(frozen=True)
class EigPair:
    """Eigenvectors (columns) with non-increasing eigenvalues.

    ``shift`` records the diagonal loading that was actually applied to the
    constraint matrix by :func:`generalized_eig`; it is 0.0 for the plain
    symmetric problem or when no regularization was needed.
    """

    vectors: np.ndarray
    values: np.ndarray
    shift: float = 0.0


@dataclass(frozen=True)
class SvdFactor:
    """Truncated singular value decomposition ``W ~ left @ diag(singular) @ right.T``."""

    left: np.ndarray
    singular: np.ndarray
    right: np.ndarray


def centering_matrix(n: int) -> np.ndarray:
    """Return the n x n matrix that subtracts the mean, I - (1/n) 11'.

    Idempotent, symmetric, and annihilates constant vectors.
    """
    if n < 1:
        raise ConfigError(f"centering matrix needs n >= 1, got {n}")
    return np.eye(n) - np.full((n, n), 1.0 / n)


def require_symmetric(a: np.ndarray, atol: float = SYMMETRY_ATOL, name: str = "matrix") -> None:
    gap = float(np.max(np.abs(a - a.T))) if a.size else 0.0
    if gap > atol:
        raise ConfigError(f"{name} is not symmetric: max |A - A.T| = {gap:.3e} > {atol:.1e}")


def _fix_signs(vectors: np.ndarray, companion: np.ndarray | None = None):
    """Make the largest-magnitude entry of each column positive.

    ``companion`` gets the same flips applied (used to keep an SVD product
    invariant when the left factor is re-signed).
    """
    if vectors.shape[1] == 0:
        return (vectors, companion) if companion is not None else vectors
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0.0] = 1.0
    flipped = vectors * signs
    if companion is not None:
        return flipped, companion * signs
    return flipped


def symmetric_eig(a) -> EigPair:
    """Full spectrum of a symmetric matrix, leading eigenvalue first."""
    a = as_square(a, "A")
    require_symmetric(a, name="A")
    values, vectors = np.linalg.eigh(sym(a))
    values = values[::-1].copy()
    vectors = _fix_signs(vectors[:, ::-1].copy())
    return EigPair(vectors=vectors, values=values)


def _check_psd_spectrum(values: np.ndarray, norm: float, name: str) -> None:
    lo = float(values.min()) if values.size else 0.0
    if lo < -PSD_ABS_TOL and lo < -PSD_REL_TOL * norm:
        raise NumericalError(
            f"{name} is not positive semidefinite: min eigenvalue {lo:.3e}"
        )


def generalized_eig(a, b, reg: RegPolicy | None = None) -> EigPair:
    """Solve ``A U = B' U diag(values)`` with ``U.T @ B' @ U = I``.

    ``B' = B + shift * I`` where the shift follows ``reg`` and is applied only
    when the Cholesky factorization of B fails. The solve goes through the
    symmetrized problem on ``L^{-1} A L^{-T}`` (B' = L L'), which is stabler
    than explicitly inverting B.
    """
    reg = reg or RegPolicy()
    a = as_square(a, "A")
    b = as_square(b, "B")
    if a.shape != b.shape:
        raise ConfigError(f"dimension mismatch: A is {a.shape}, B is {b.shape}")
    require_symmetric(a, name="A")
    require_symmetric(b, name="B")
    a_s = sym(a)
    b_s = sym(b)

    b_vals = np.linalg.eigvalsh(b_s)
    _check_psd_spectrum(b_vals, float(np.linalg.norm(b_s, "fro")), "constraint matrix B")
    lam_min, lam_max = float(b_vals[0]), float(b_vals[-1])

    unit = reg.unit(b_s)
    candidates = [0.0]
    shift = reg.base_scale * unit
    while shift <= reg.max_scale * unit * (1.0 + 1e-12):
        candidates.append(shift)
        shift *= reg.growth

    def healthy(s: float) -> bool:
        if s == candidates[-1] and s > 0.0:
            return True  # the cap is used even if the bound is not met
        return lam_min + s > max(lam_max + s, 0.0) / CONSTRAINT_COND_MAX

    chol = None
    shift = 0.0
    for candidate in candidates:
        if not healthy(candidate):
            continue
        try:
            target = b_s if candidate == 0.0 else b_s + candidate * np.eye(b_s.shape[0])
            chol = np.linalg.cholesky(target)
            shift = candidate
            break
        except np.linalg.LinAlgError:
            continue
    if chol is None:
        raise NumericalError(
            "constraint matrix stayed singular up to the maximum "
            f"diagonal shift {reg.max_scale * unit:.3e}"
        )

    # C = L^{-1} A L^{-T}; A symmetric makes the second solve valid on Y.T.
    y = np.linalg.solve(chol, a_s)
    c = sym(np.linalg.solve(chol, y.T))
    values, q = np.linalg.eigh(c)
    values = values[::-1].copy()
    vectors = np.linalg.solve(chol.T, q[:, ::-1])
    vectors = _fix_signs(vectors)
    return EigPair(vectors=vectors, values=values, shift=shift)


def psd_factor(s) -> np.ndarray:
    """Factor a PSD matrix as ``delta.T @ delta = S``.

    Small negative eigenvalues from round-off are clamped to zero; a genuine
    negative eigenvalue raises NumericalError.
    """
    s = as_square(s, "S")
    require_symmetric(s, name="S")
    values, vectors = np.linalg.eigh(sym(s))
    _check_psd_spectrum(values, float(np.linalg.norm(s, "fro")), "S")
    values = np.clip(values, 0.0, None)
    if values.size and values[-1] > 0.0:
        values[values < EIG_NOISE_RTOL * values[-1]] = 0.0
    return (vectors * np.sqrt(values)).T


def incomplete_svd(w, k: int) -> SvdFactor:
    """Rank-k truncated SVD of a rectangular matrix.

    Exact reconstruction when k >= rank(W).
    """
    w = as_matrix(w, "W")
    limit = min(w.shape)
    if not 1 <= k <= limit:
        raise ConfigError(f"k must be in [1, {limit}] for shape {w.shape}, got {k}")
    left, singular, right_t = np.linalg.svd(w, full_matrices=False)
    left = left[:, :k].copy()
    singular = singular[:k].copy()
    right = right_t[:k].T.copy()
    left, right = _fix_signs(left, right)
    return SvdFactor(left=left, singular=singular, right=right)
