"""Kernel functions, Gram matrices, and centering.

Data matrices store samples column-wise (d x n). Gram matrices follow the
same convention: ``gram(spec, A, B)[i, j]`` is the kernel between column i of
A and column j of B. The RBF bandwidth defaults to the median heuristic,
gamma = 1 / (2 * median^2) over pairwise training distances; resolve it once
on the training side (:func:`resolve_gamma`) so that out-of-sample Gram
matrices reuse the training bandwidth.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ._util import as_matrix, as_square
from .exceptions import ConfigError

FAMILIES = ("linear", "rbf", "polynomial", "delta")


@dataclass(frozen=True)
class KernelSpec:
    """Kernel family plus hyperparameters.

    gamma applies to rbf (None means "median heuristic, not yet resolved"),
    degree and offset apply to polynomial. The delta family compares labels
    for equality and is only valid through :func:`delta_kernel` /
    :func:`label_gram`.
    """

    family: str = "linear"
    gamma: float | None = None
    degree: int = 2
    offset: float = 1.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown kernel family {self.family!r}, expected one of {FAMILIES}")
        if self.gamma is not None and self.gamma <= 0:
            raise ConfigError(f"gamma must be positive, got {self.gamma}")
        if self.family == "polynomial" and self.degree < 1:
            raise ConfigError(f"polynomial degree must be >= 1, got {self.degree}")

    def to_dict(self) -> dict:
        out = {"family": self.family}
        if self.family == "rbf":
            out["gamma"] = self.gamma
        if self.family == "polynomial":
            out["degree"] = self.degree
            out["offset"] = self.offset
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "KernelSpec":
        return cls(
            family=data.get("family", "linear"),
            gamma=data.get("gamma"),
            degree=int(data.get("degree", 2)),
            offset=float(data.get("offset", 1.0)),
        )


def squared_distances(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    sq = (
        np.sum(a * a, axis=0)[:, None]
        + np.sum(b * b, axis=0)[None, :]
        - 2.0 * (a.T @ b)
    )
    return np.clip(sq, 0.0, None)


def median_heuristic_gamma(x) -> float:
    """gamma = 1 / (2 * median^2) over pairwise distances of the columns of x.

    Falls back to 1.0 when no strictly positive distance exists.
    """
    x = as_matrix(x, "X")
    n = x.shape[1]
    if n < 2:
        return 1.0
    d2 = squared_distances(x, x)
    iu = np.triu_indices(n, k=1)
    dists = np.sqrt(d2[iu])
    positive = dists[dists > 0.0]
    if positive.size == 0:
        return 1.0
    med = float(np.median(positive))
    return 1.0 / (2.0 * med * med)


def resolve_gamma(spec: KernelSpec, x) -> KernelSpec:
    """Pin an unresolved RBF bandwidth to the median heuristic over x."""
    if spec.family == "rbf" and spec.gamma is None:
        return replace(spec, gamma=median_heuristic_gamma(x))
    return spec


def gram(spec: KernelSpec, a, b) -> np.ndarray:
    """Gram matrix between the columns of a and the columns of b."""
    a = as_matrix(a, "A")
    b = as_matrix(b, "B")
    if a.shape[0] != b.shape[0]:
        raise ConfigError(f"dimension mismatch: A has d={a.shape[0]}, B has d={b.shape[0]}")
    if spec.family == "linear":
        return a.T @ b
    if spec.family == "rbf":
        if spec.gamma is None:
            raise ConfigError("rbf gamma is unresolved; call resolve_gamma on the training data first")
        return np.exp(-spec.gamma * squared_distances(a, b))
    if spec.family == "polynomial":
        return (a.T @ b + spec.offset) ** spec.degree
    raise ConfigError("delta kernels compare labels; use delta_kernel or label_gram")


def is_categorical(labels) -> bool:
    """True when a label vector holds class ids rather than real targets.

    Integers, booleans, and strings are categorical; floats only when every
    value is a whole number.
    """
    arr = np.asarray(labels)
    if arr.dtype.kind in "iub":
        return True
    if arr.dtype.kind in "USO":
        return True
    if arr.dtype.kind == "f":
        return bool(np.all(np.isfinite(arr)) and np.all(arr == np.rint(arr)))
    return False


def delta_kernel(y1, y2) -> np.ndarray:
    """Label-equality kernel: entry (i, j) is 1 when y1[i] == y2[j]."""
    y1 = np.asarray(y1)
    y2 = np.asarray(y2)
    if y1.ndim != 1 or y2.ndim != 1:
        raise ConfigError("delta_kernel expects 1-D label vectors")
    for y in (y1, y2):
        if not is_categorical(y):
            raise ConfigError("delta_kernel needs categorical labels, got real-valued targets")
    return (y1[:, None] == y2[None, :]).astype(float)


def label_gram(spec: KernelSpec, y1, y2) -> np.ndarray:
    """Kernel matrix over label vectors, treating each label as a 1-D point."""
    if spec.family == "delta":
        return delta_kernel(y1, y2)
    a = np.asarray(y1, dtype=float)[None, :]
    b = np.asarray(y2, dtype=float)[None, :]
    return gram(spec, a, b)


def resolve_label_kernel(spec: KernelSpec, labels) -> KernelSpec:
    if spec.family == "rbf" and spec.gamma is None:
        return replace(spec, gamma=median_heuristic_gamma(np.asarray(labels, dtype=float)[None, :]))
    return spec


def double_center(k) -> np.ndarray:
    """Pre- and post-multiply by the centering matrix: H K H.

    Computed through row/column means so every row and column of the result
    sums to zero to round-off.
    """
    k = as_square(k, "K")
    row = k.mean(axis=1, keepdims=True)
    col = k.mean(axis=0, keepdims=True)
    return k - row - col + k.mean()


def center_test_kernel(k_train, k_test) -> np.ndarray:
    """Center a train-vs-test kernel with training statistics.

    For an explicit feature map phi this reproduces the inner products of the
    train-mean-centered features, phi_c(X).T @ phi_c(X_t).
    """
    k_train = as_square(k_train, "K_train")
    k_test = as_matrix(k_test, "K_test")
    if k_test.shape[0] != k_train.shape[0]:
        raise ConfigError(
            f"shape mismatch: K_train is {k_train.shape}, K_test has {k_test.shape[0]} rows"
        )
    col_test = k_test.mean(axis=0, keepdims=True)
    row_train = k_train.mean(axis=1, keepdims=True)
    return k_test - col_test - row_train + k_train.mean()
