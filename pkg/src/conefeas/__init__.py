"""Feasibility solver for homogeneous conic systems A x = 0, x interior,
over products of rank-1, second-order, and PSD cones."""

from .cones import (
    BlockSpec,
    ConeError,
    ConeSpec,
    DegenerateInputError,
    Element,
    NumericalError,
    ShapeMismatchError,
    SingularElementError,
    identity,
    zeros,
)
from .algebra import (
    SpectralDecomposition,
    block_trace,
    cone_one_inf,
    det,
    in_cone,
    inner,
    inv_sqrt,
    inverse,
    is_interior,
    jordan_product,
    lambda_min,
    norm,
    norm2,
    quad_apply,
    quad_matrix,
    spectral_decomposition,
    sqrt,
    trace,
)
from .projection import ProblemInstance, Projector, build_projector, project
from .config import SolverConfig
from .basic import BasicBudgetError, BasicOutcome, run_basic
from .rescale import (
    beta_from_rho,
    block_scaling,
    block_scaling_inverse,
    build_w,
    phi,
    rho_for_block,
    volume_delta,
)
from .solver import (
    Certificate,
    ScalingState,
    SolveStats,
    map_dual,
    map_primal,
    solve,
    verify,
)
from .instances import generate
from .fileio import (
    load_certificate,
    load_problem,
    save_certificate,
    save_problem,
)

__all__ = [
    "BasicBudgetError",
    "BasicOutcome",
    "BlockSpec",
    "Certificate",
    "ConeError",
    "ConeSpec",
    "DegenerateInputError",
    "Element",
    "NumericalError",
    "ProblemInstance",
    "Projector",
    "ScalingState",
    "ShapeMismatchError",
    "SingularElementError",
    "SolveStats",
    "SolverConfig",
    "SpectralDecomposition",
    "beta_from_rho",
    "block_scaling",
    "block_scaling_inverse",
    "block_trace",
    "build_projector",
    "build_w",
    "cone_one_inf",
    "det",
    "generate",
    "identity",
    "in_cone",
    "inner",
    "inv_sqrt",
    "inverse",
    "is_interior",
    "jordan_product",
    "lambda_min",
    "load_certificate",
    "load_problem",
    "map_dual",
    "map_primal",
    "norm",
    "norm2",
    "phi",
    "project",
    "quad_apply",
    "quad_matrix",
    "rho_for_block",
    "run_basic",
    "save_certificate",
    "save_problem",
    "solve",
    "spectral_decomposition",
    "sqrt",
    "trace",
    "verify",
    "volume_delta",
    "zeros",
]

__version__ = "0.1.0"
