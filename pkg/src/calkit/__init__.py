"""Exact operator algebra and numeric verification for singular oscillators.

The package splits along the exact/approximate seam: ``exactcore``,
``operators``, ``su11``, ``kernels`` and ``coherent`` work entirely in exact
rational arithmetic; ``numerics`` carries the floating-point special functions
and finite-difference residual checks; ``cli`` wraps both in a reporting tool.
"""

__version__ = "0.1.0"

from .coherent import CoherentSeries, build_coherent_series, closed_form_params
from .exactcore import (
    DimensionMismatch,
    DivisibilityError,
    ExactMatrix,
    Poly,
    exact_divide,
    is_symmetric,
    nullspace,
    sym_basis,
)
from .kernels import KernelBasis, kernel_basis, raising_matrix
from .operators import (
    Model,
    ModelParams,
    apply_cartan,
    apply_lowering,
    apply_raising,
    exp_raising,
)
from .su11 import (
    RadialTower,
    casimir_apply,
    casimir_scalar,
    closure_residuals,
    conjugate_ladder_residual,
)

__all__ = [
    "__version__",
    "CoherentSeries",
    "DimensionMismatch",
    "DivisibilityError",
    "ExactMatrix",
    "KernelBasis",
    "Model",
    "ModelParams",
    "Poly",
    "RadialTower",
    "apply_cartan",
    "apply_lowering",
    "apply_raising",
    "build_coherent_series",
    "casimir_apply",
    "casimir_scalar",
    "closed_form_params",
    "closure_residuals",
    "conjugate_ladder_residual",
    "exact_divide",
    "exp_raising",
    "is_symmetric",
    "kernel_basis",
    "nullspace",
    "raising_matrix",
    "sym_basis",
]
