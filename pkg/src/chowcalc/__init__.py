"""Exact Chow ring computations for projective bundles, blowups and correspondences."""
# ruff: noqa: F401
from .errors import ChowError, InvariantViolation, NotProperError, UsageError
from .polyring import GradedPolynomial, VariableTable, apply_map, invert_unit_series
from .sheaves import (
    SheafClass,
    cotangent_twist_chern,
    direct_sum,
    dual,
    line,
    quotient,
    segre,
    tensor_line,
    trivial,
)
from .spaces import (
    Blowup,
    ChowClass,
    EmbeddingDatum,
    FormalBase,
    Point,
    ProjBundle,
    Space,
    StructuralMap,
    TotalSpace,
    basis,
    blowup,
    formal_base,
    integrate,
    intersection_matrix,
    multiply,
    normalize,
    point,
    proj_bundle,
    proj_project,
    projective_space,
    pullback,
    pushforward,
    total_space,
    validate_embedding,
)
from .correspondences import (
    Correspondence,
    DecompositionModel,
    FlipSetting,
    RelativeProduct,
    VirtualFlipSetting,
    build_decomposition_model,
    convolve,
    diagonal_class,
    flip_phi,
    rank_generating_check,
    relative_product,
)
from .report import Report, ReportItem
from .suites import SUITES, run_suite
from .dsl import parse, format_program
from .runner import run

__all__ = [name for name in dir() if not name.startswith("_")]
