"""Two-factor generalized subspace learning.

A single pair of mixing factors (r1, r2) in [0, 1]^2 interpolates between
PCA, Fisher discriminant analysis, supervised PCA, and the doubly supervised
corner, in both the input space and a kernel feature space.
"""

__version__ = "0.1.0"

from .dual import DualRdaModel, fit_dual, project_dual, reconstruct_dual
from .exceptions import ConfigError, DataError, NumericalError, RoweisError
from .kernel_rda import KernelRdaModel, fit_direct, fit_kernel_pca, fit_kernel_spca
from .kernel_rda import project as project_kernel
from .kernels import KernelSpec
from .linalg import RegPolicy
from .persist import load_model, save_model
from .rda import RdaModel, RoweisConfig, fit, project, reconstruct, supervision_level

__all__ = [
    "ConfigError",
    "DataError",
    "DualRdaModel",
    "KernelRdaModel",
    "KernelSpec",
    "NumericalError",
    "RdaModel",
    "RegPolicy",
    "RoweisConfig",
    "RoweisError",
    "fit",
    "fit_direct",
    "fit_dual",
    "fit_kernel_pca",
    "fit_kernel_spca",
    "load_model",
    "project",
    "project_dual",
    "project_kernel",
    "reconstruct",
    "reconstruct_dual",
    "save_model",
    "supervision_level",
    "__version__",
]
