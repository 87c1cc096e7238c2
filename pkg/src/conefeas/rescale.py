"""Volumetric rescaling machinery: per-block step ratios, the shifted
combination w_k, the guaranteed log-volume decrease rate, and the cone
automorphisms realizing one rescaling step."""

from __future__ import annotations

import math

import numpy as np

from .algebra import (
    _eigvals_block,
    _recombine_block,
    quad_matrix,
)
from .cones import (
    BlockSpec,
    DegenerateInputError,
    SingularElementError,
    identity_block,
)
from .algebra import block_trace, norm2


def phi(rho):
    """Log-volume decrease rate 2 - 1/rho - sqrt(3 - 2/rho), rho >= 1.

    phi(1) = 0, phi is strictly increasing, and exp(-phi(2)) < 0.918.
    """
    if rho < 1.0:
        raise DegenerateInputError("phi needs rho >= 1")
    return 2.0 - 1.0 / rho - math.sqrt(3.0 - 2.0 / rho)


def _minimizer_gap(rho):
    """The gap r_k - beta_k: 1/rho - 1/sqrt(rho(3 rho - 2))."""
    return 1.0 / rho - 1.0 / math.sqrt(rho * (3.0 * rho - 2.0))


def beta_from_rho(rho, r_k):
    """Shift beta_k = r_k - (1/rho - 1/sqrt(rho(3 rho - 2))), rho > 1."""
    if rho <= 1.0:
        raise DegenerateInputError("beta_from_rho needs rho > 1")
    return float(r_k) - _minimizer_gap(rho)


def rho_for_block(y, z, k, spec):
    """Step ratio ||y_k||_1 / (r_k ||z|| sqrt(ell)) for a cone element y
    and its nonzero projection z."""
    nz = norm2(z)
    if nz <= 0.0:
        raise DegenerateInputError(
            "projection is zero: a dual certificate should have been emitted"
        )
    r_k = spec.blocks[k].rank
    return block_trace(y, k) / (r_k * nz * math.sqrt(spec.ell))


def build_w(y_k, rho_k, block):
    """Interior combination w_k = gap * rho_k * r_k * y_k / <y_k, e_k>
    + beta_k * e_k used to squeeze one block."""
    if rho_k <= 1.0:
        raise DegenerateInputError("build_w needs rho_k > 1")
    y_k = np.asarray(y_k, dtype=float)
    tr = _block_trace_raw(block, y_k)
    if tr == 0.0:
        raise DegenerateInputError("build_w needs <y_k, e_k> != 0")
    r_k = block.rank
    gap = _minimizer_gap(rho_k)
    beta = r_k - gap
    return (gap * rho_k * r_k / tr) * y_k + beta * identity_block(block)


def _block_trace_raw(block, a):
    if block.kind == "rank1":
        return float(a[0])
    if block.kind == "soc":
        return 2.0 * float(a[0])
    n = block.size
    pos, tr = 0, 0.0
    for j in range(n):
        tr += a[pos + j]
        pos += j + 1
    return float(tr)


def volume_delta(w_k, block):
    """Ledger increment log r_k - (1/r_k) * sum(log eigenvalues(w_k));
    at most -phi(2)/r_k whenever the step ratio was >= 2."""
    w_k = np.asarray(w_k, dtype=float)
    vals = _eigvals_block(block, w_k)
    if vals.min() <= 0.0:
        raise SingularElementError(
            f"volume_delta needs an interior element (eigenvalue {vals.min():.3e})",
            eigenvalue=float(vals.min()),
        )
    r_k = block.rank
    return math.log(r_k) - float(np.log(vals).sum()) / r_k


def block_scaling(w_k, block):
    """Matrix of the automorphism Q_{w_k^(-1/2) sqrt(r_k)} on block
    coordinates; symmetric positive definite."""
    return quad_matrix(w_k, math.sqrt(block.rank), block)


def block_scaling_inverse(w_k, block):
    """Matrix of the inverse automorphism Q_{w_k^(1/2) / sqrt(r_k)},
    built spectrally rather than by matrix inversion."""
    w_k = np.asarray(w_k, dtype=float)
    vals = _eigvals_block(block, w_k)
    if vals.min() <= 0.0:
        raise SingularElementError(
            f"block_scaling_inverse needs an interior element "
            f"(eigenvalue {vals.min():.3e})",
            eigenvalue=float(vals.min()),
        )
    inv = _recombine_block(block, w_k, lambda v: 1.0 / v)
    return quad_matrix(inv, 1.0 / math.sqrt(block.rank), block)
