"""Gradients, Hessians, Hessian-vector products and higher-order derivative
tensors of black-box functions from function values alone."""
from .bounds import BoundInputs, diag_bound, gcsh_bound, gsh_bound, hvp_bound, offdiag_bound, row_bound
from .directions import (
    DirectionFamily,
    DirectionMatrix,
    SchemeSpec,
    build_diag,
    build_full_gcsh_minimal,
    build_full_gsh_minimal,
    build_hvp,
    build_off_diag,
    build_row,
    radii,
)
from .estimators import (
    EstimatorResult,
    approximate,
    cshd,
    delta_s,
    gcsh,
    gsg,
    gsh,
    gst,
    hvp,
    simplex_derivative_tensor,
    tensor_mul,
    tensor_transpose,
)
from .linalg import hadamard, partial_diagonal_info, pinv, pinv_partial_diagonal, spectral_norm
from .projections import extract_diag, extract_strict_upper, proj_st, proj_vec, row_mask
from .sampling import EvalCache, SamplePlan, enumerate_plan, evaluate

__all__ = [
    "BoundInputs",
    "DirectionFamily",
    "DirectionMatrix",
    "EstimatorResult",
    "EvalCache",
    "SamplePlan",
    "SchemeSpec",
    "approximate",
    "build_diag",
    "build_full_gcsh_minimal",
    "build_full_gsh_minimal",
    "build_hvp",
    "build_off_diag",
    "build_row",
    "cshd",
    "delta_s",
    "diag_bound",
    "enumerate_plan",
    "evaluate",
    "extract_diag",
    "extract_strict_upper",
    "gcsh",
    "gcsh_bound",
    "gsg",
    "gsh",
    "gsh_bound",
    "gst",
    "hadamard",
    "hvp",
    "hvp_bound",
    "offdiag_bound",
    "partial_diagonal_info",
    "pinv",
    "pinv_partial_diagonal",
    "proj_st",
    "proj_vec",
    "radii",
    "row_bound",
    "row_mask",
    "simplex_derivative_tensor",
    "spectral_norm",
    "tensor_mul",
    "tensor_transpose",
]

__version__ = "0.1.0"
