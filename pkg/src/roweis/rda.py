"""Primal two-factor subspace learning.

The method maximizes tr(U' R1 U) subject to U' R2 U = I, where

    R1 = Xc P Xc'          with  P = r1 * K_y + (1 - r1) * I,
    R2 = r2 * S_W + (1 - r2) * I,

Xc is the train-mean-centered data, K_y a kernel over the labels, and S_W the
within-class scatter. The two mixing factors r1, r2 in [0, 1] control how the
labels enter the objective and the constraint:

    r1 = 0, r2 = 0   plain PCA (total scatter, orthonormal basis)
    r1 = 0, r2 = 1   Fisher discriminant analysis
    r1 = 1, r2 = 0   supervised PCA (label-dependence objective)
    r1 = 1, r2 = 1   double supervised discriminant analysis

Everything in between is a valid method; (r1 + r2) / 2 measures how strongly
the labels are used. Fitting solves the generalized eigenproblem (R1, R2).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from . import kernels, scatter
from ._util import as_matrix, as_square, sym
from .exceptions import ConfigError, NumericalError
from .linalg import RegPolicy, generalized_eig, require_symmetric, symmetric_eig

# Cumulative eigenvalue mass treated as the reliable part of a spectrum when
# repairing a near-singular constraint matrix.
SPECTRUM_MASS = 0.98

DEFAULT_VALID_EIG_THRESHOLD = 1e-9
DEFAULT_AUTO_DIM_RATIO = 0.01


@dataclass(frozen=True)
class RoweisConfig:
    """Fit configuration: mixing factors, target dimension, kernels, policies.

    p=None selects the dimensionality automatically from the eigenvalue
    ratios (threshold ``auto_dim_ratio``). label_kernel=None picks the
    equality kernel for class labels and an RBF with the median-heuristic
    bandwidth for real-valued targets.
    """

    r1: float = 0.0
    r2: float = 0.0
    p: int | None = None
    label_kernel: kernels.KernelSpec | None = None
    robust: bool = False
    reg: RegPolicy = RegPolicy()
    valid_eig_threshold: float = DEFAULT_VALID_EIG_THRESHOLD
    auto_dim_ratio: float = DEFAULT_AUTO_DIM_RATIO

    def __post_init__(self):
        for name in ("r1", "r2"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1], got {value}")
        if self.p is not None and self.p < 1:
            raise ConfigError(f"p must be a positive integer, got {self.p}")
        if self.valid_eig_threshold <= 0:
            raise ConfigError("valid_eig_threshold must be positive")


@dataclass(frozen=True)
class RdaModel:
    """Fitted projection basis plus the statistics needed out of sample."""

    basis: np.ndarray
    eigvals: np.ndarray
    mean: np.ndarray
    config: RoweisConfig
    shift: float = 0.0
    notes: tuple = ()

    @property
    def n_features(self) -> int:
        return int(self.basis.shape[0])

    @property
    def n_components(self) -> int:
        return int(self.basis.shape[1])


def supervision_level(r1: float, r2: float) -> float:
    """How strongly the labels are used, on a 0 (unsupervised) to 1 scale."""
    for name, value in (("r1", r1), ("r2", r2)):
        if not 0.0 <= value <= 1.0:
            raise ConfigError(f"{name} must lie in [0, 1], got {value}")
    return (r1 + r2) / 2.0


def blend_label_kernel(k_y, r1: float) -> np.ndarray:
    """P = r1 * K_y + (1 - r1) * I; the label side of the objective."""
    k_y = as_square(k_y, "K_y")
    if not 0.0 <= r1 <= 1.0:
        raise ConfigError(f"r1 must lie in [0, 1], got {r1}")
    if r1 == 0.0:
        return np.eye(k_y.shape[0])
    if r1 == 1.0:
        return sym(k_y)
    return sym(r1 * k_y + (1.0 - r1) * np.eye(k_y.shape[0]))


def objective_matrix(x, p) -> np.ndarray:
    """R1 = Xc P Xc' with Xc centered by its own mean. Reduces to the total
    scatter when P = I."""
    x = as_matrix(x, "X")
    p = as_square(p, "P")
    if p.shape[0] != x.shape[1]:
        raise ConfigError(f"P must be n x n with n={x.shape[1]}, got {p.shape}")
    centered = x - x.mean(axis=1, keepdims=True)
    return sym(centered @ p @ centered.T)


def constraint_matrix(s_w, r2: float) -> np.ndarray:
    """R2 = r2 * S_W + (1 - r2) * I; the label side of the constraint."""
    s_w = as_square(s_w, "S_W")
    if not 0.0 <= r2 <= 1.0:
        raise ConfigError(f"r2 must lie in [0, 1], got {r2}")
    if r2 == 0.0:
        return np.eye(s_w.shape[0])
    if r2 == 1.0:
        return sym(s_w)
    return sym(r2 * s_w + (1.0 - r2) * np.eye(s_w.shape[0]))


def robustify(s, reg: RegPolicy | None = None) -> np.ndarray:
    """Repair a near-singular PSD matrix by flattening its eigenvalue tail.

    The leading eigenvalues carrying SPECTRUM_MASS of the total are kept; the
    remaining ones are replaced by their mean, which makes the result full
    rank whenever the tail still carries mass. An all-zero spectrum returns a
    small multiple of the identity instead.
    """
    reg = reg or RegPolicy()
    s = as_square(s, "S")
    require_symmetric(s, name="S")
    pair = symmetric_eig(s)
    values = np.clip(pair.values, 0.0, None)
    total = float(values.sum())
    if total <= 0.0:
        return reg.base_scale * np.eye(s.shape[0])
    ratios = np.cumsum(values) / total
    head = int(np.searchsorted(ratios, SPECTRUM_MASS) + 1)
    if head >= values.size:
        return sym(s)
    tail_mean = float(values[head:].mean())
    repaired = values.copy()
    repaired[head:] = tail_mean
    return sym((pair.vectors * repaired) @ pair.vectors.T)


def choose_dimensionality(eigvals, ratio_threshold: float) -> int:
    """Number of eigenvalues whose share of the total is at least the threshold."""
    values = np.asarray(eigvals, dtype=float)
    if np.any(values < 0):
        raise ConfigError("eigenvalues must be non-negative")
    total = float(values.sum())
    if total <= 0.0:
        raise NumericalError("spectrum has no positive eigenvalues")
    p = int(np.count_nonzero(values / total >= ratio_threshold))
    return max(p, 1)


def default_label_kernel(labels) -> kernels.KernelSpec:
    """Equality kernel for class labels, RBF over the targets otherwise."""
    if kernels.is_categorical(labels):
        return kernels.KernelSpec(family="delta")
    return kernels.KernelSpec(family="rbf")


def _resolved_label_kernel(config: RoweisConfig, labels) -> kernels.KernelSpec:
    spec = config.label_kernel or default_label_kernel(labels)
    return kernels.resolve_label_kernel(spec, labels)


def count_valid(values: np.ndarray, threshold: float) -> int:
    """Eigenvalues above threshold * largest; 0 for an empty or non-positive spectrum."""
    if values.size == 0 or values[0] <= 0.0:
        return 0
    return int(np.count_nonzero(values > threshold * values[0]))


def _select_dimension(values, valid, cap, config) -> tuple[int, list]:
    notes = []
    if config.p is not None:
        p = config.p
        if p > cap:
            notes.append(f"requested p={p} exceeds the rank bound {cap}; truncated")
            p = cap
    else:
        usable = max(min(valid, cap), 1)
        p = min(choose_dimensionality(np.clip(values, 0.0, None), config.auto_dim_ratio), usable)
    return p, notes


def fit(x, labels, config: RoweisConfig) -> RdaModel:
    """Fit the projection basis for the given mixing factors.

    Labels are required as soon as r1 > 0 or r2 > 0, and must be class ids
    (not real targets) when r2 > 0, because the within-class scatter needs a
    hard partition of the samples.
    """
    x = as_matrix(x, "X")
    d, n = x.shape
    if n < 2:
        raise ConfigError(f"fitting needs at least 2 samples, got {n}")
    r1, r2 = config.r1, config.r2
    if (r1 > 0 or r2 > 0) and labels is None:
        raise ConfigError("labels are required when r1 > 0 or r2 > 0")
    if labels is not None:
        labels = np.asarray(labels)
        if labels.shape != (n,):
            raise ConfigError(f"labels must have length n={n}, got shape {labels.shape}")
    if r2 > 0 and not kernels.is_categorical(labels):
        raise ConfigError(
            "r2 > 0 uses the within-class scatter, which needs class labels; "
            "got real-valued targets"
        )

    mean = x.mean(axis=1)
    centered = x - mean[:, None]

    resolved_spec = None
    if r1 > 0:
        resolved_spec = _resolved_label_kernel(config, labels)
        k_y = kernels.label_gram(resolved_spec, labels, labels)
        p_mat = blend_label_kernel(k_y, r1)
        r1_mat = sym(centered @ p_mat @ centered.T)
    else:
        r1_mat = sym(centered @ centered.T)

    if r2 > 0:
        part = scatter.ClassPartition.from_labels(labels)
        r2_mat = constraint_matrix(scatter.within_scatter(x, part), r2)
    else:
        r2_mat = np.eye(d)
    if config.robust:
        r2_mat = robustify(r2_mat, config.reg)

    pair = generalized_eig(r1_mat, r2_mat, config.reg)
    valid = count_valid(pair.values, config.valid_eig_threshold)
    if valid == 0:
        raise NumericalError("no positive eigenvalues; the data carry no variance")
    cap = min(d, n - 1)
    p, notes = _select_dimension(pair.values, valid, cap, config)

    fitted = dataclasses.replace(config, p=p, label_kernel=resolved_spec or config.label_kernel)
    return RdaModel(
        basis=pair.vectors[:, :p].copy(),
        eigvals=pair.values[:p].copy(),
        mean=mean,
        config=fitted,
        shift=pair.shift,
        notes=tuple(notes),
    )


def _check_width(model: RdaModel, x: np.ndarray) -> None:
    if x.shape[0] != model.n_features:
        raise ConfigError(
            f"model expects {model.n_features} features, data has {x.shape[0]}"
        )


def project(model: RdaModel, x_any) -> np.ndarray:
    """Embed columns of x_any: U' (x - training mean)."""
    x_any = as_matrix(x_any, "X")
    _check_width(model, x_any)
    return model.basis.T @ (x_any - model.mean[:, None])


def reconstruct(model: RdaModel, x_any) -> np.ndarray:
    """Map back from the subspace: U U' (x - mean) + mean."""
    x_any = as_matrix(x_any, "X")
    _check_width(model, x_any)
    centered = x_any - model.mean[:, None]
    return model.basis @ (model.basis.T @ centered) + model.mean[:, None]
