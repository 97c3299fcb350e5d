"""Interpolating tensor-product multiresolution analysis toolkit.

Filter construction, scaling-function evaluation, n-dimensional forward
and inverse interpolating wavelet transforms on dyadic grids, Besov-norm
estimation from coefficients, and verifiers for the identities the
construction satisfies.
"""

from .besov import (
    BesovParams,
    NormReport,
    coeff_norm,
    equivalence_probe,
    holder_estimate,
    modulus_of_continuity,
    projection_error_check,
    unconditionality_probe,
    wavelet_norm,
)
from .errors import ImraError
from .filters import (
    FilterBank,
    IndexedFilter,
    bank_from_id,
    bank_from_text,
    bank_to_text,
    custom_bank_validate,
    dd_bank,
    dd_scaling_filter,
    derive_bank,
)
from .gridio import read_grid, read_pyramid, write_grid, write_pyramid
from .ordering import CubeOrdering, cube_ordering_iter, plane_ordering, verify_ordering
from .scaling import (
    DyadicFunctionTable,
    cover_number,
    phi_at,
    polynomial_reproduction_check,
    psi_at,
    refine_scaling,
    refine_wavelet,
    tensor_point_eval,
)
from .tensor import TensorFilterView, filter_duality_check, orientations, tensor_coeff
from .transform import (
    GridFunction,
    WaveletPyramid,
    analyze_level,
    decompose,
    interior_box,
    project_eval,
    reconstruct,
    sample_grid,
    subdivide,
    synthesize_level,
    threshold,
)

__version__ = "0.1.0"

__all__ = [
    "BesovParams",
    "CubeOrdering",
    "DyadicFunctionTable",
    "FilterBank",
    "GridFunction",
    "ImraError",
    "IndexedFilter",
    "NormReport",
    "TensorFilterView",
    "WaveletPyramid",
    "analyze_level",
    "bank_from_id",
    "bank_from_text",
    "bank_to_text",
    "coeff_norm",
    "cover_number",
    "cube_ordering_iter",
    "custom_bank_validate",
    "dd_bank",
    "dd_scaling_filter",
    "decompose",
    "derive_bank",
    "equivalence_probe",
    "filter_duality_check",
    "holder_estimate",
    "interior_box",
    "modulus_of_continuity",
    "orientations",
    "phi_at",
    "plane_ordering",
    "polynomial_reproduction_check",
    "project_eval",
    "projection_error_check",
    "psi_at",
    "read_grid",
    "read_pyramid",
    "reconstruct",
    "refine_scaling",
    "refine_wavelet",
    "sample_grid",
    "subdivide",
    "synthesize_level",
    "tensor_coeff",
    "tensor_point_eval",
    "threshold",
    "unconditionality_probe",
    "verify_ordering",
    "wavelet_norm",
    "write_grid",
    "write_pyramid",
]
