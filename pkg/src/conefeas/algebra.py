"""Jordan algebra kernel for products of rank1, soc, and psd blocks.

Every operation works blockwise: products, spectral decompositions,
determinants, inverses, square roots, spectral norms, and quadratic
representations. All functions are pure; elements are never mutated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cones import (
    SQRT2,
    BlockSpec,
    ConeSpec,
    Element,
    NumericalError,
    ShapeMismatchError,
    SingularElementError,
    identity,
    identity_block,
)

TOL_SINGULAR = 1e-12
TOL_INTERIOR = 1e-10

NORM_KINDS = ("two", "one", "inf", "one_inf", "inf_one")

_SVEC_CACHE = {}


def _svec_indices(n):
    """Row/column index arrays and sqrt(2) scaling for the column-major
    upper-triangle vectorization of an n x n symmetric matrix."""
    if n not in _SVEC_CACHE:
        rows, cols = [], []
        for j in range(n):
            for i in range(j + 1):
                rows.append(i)
                cols.append(j)
        rows = np.array(rows, dtype=int)
        cols = np.array(cols, dtype=int)
        scale = np.where(rows == cols, 1.0, SQRT2)
        _SVEC_CACHE[n] = (rows, cols, scale)
    return _SVEC_CACHE[n]


def svec(mat):
    """Isometric vectorization: svec(X) . svec(Y) = tr(XY)."""
    n = mat.shape[0]
    rows, cols, scale = _svec_indices(n)
    return mat[rows, cols] * scale


def smat(vec, n):
    """Inverse of :func:`svec`."""
    rows, cols, scale = _svec_indices(n)
    mat = np.zeros((n, n))
    vals = vec / scale
    mat[rows, cols] = vals
    mat[cols, rows] = vals
    return mat


# ---------------------------------------------------------------------------
# block-level primitives
# ---------------------------------------------------------------------------


def _prod_block(block, a, b):
    if block.kind == "rank1":
        return a * b
    if block.kind == "soc":
        out = np.empty_like(a)
        out[0] = a @ b
        out[1:] = a[0] * b[1:] + b[0] * a[1:]
        return out
    n = block.size
    ma, mb = smat(a, n), smat(b, n)
    mab = ma @ mb
    return svec((mab + mab.T) / 2.0)


def _trace_block(block, a):
    if block.kind == "rank1":
        return float(a[0])
    if block.kind == "soc":
        return 2.0 * float(a[0])
    rows, cols, _ = _svec_indices(block.size)
    return float(a[rows == cols].sum())


def _det_block(block, a):
    if block.kind == "rank1":
        return float(a[0])
    if block.kind == "soc":
        return float(a[0] ** 2 - a[1:] @ a[1:])
    return float(np.prod(_eigvals_block(block, a)))


def _eigvals_block(block, a):
    """Eigenvalues of one block, descending."""
    if block.kind == "rank1":
        return np.array([a[0]])
    if block.kind == "soc":
        nrm = float(np.linalg.norm(a[1:]))
        return np.array([a[0] + nrm, a[0] - nrm])
    vals = _eigh_block(block, a)[0]
    return vals


def _eigh_block(block, a, want_vectors=False):
    """Dense symmetric eigendecomposition of a psd-block element with
    eigenvalues descending and a fixed eigenvector sign convention."""
    n = block.size
    try:
        if want_vectors:
            vals, vecs = np.linalg.eigh(smat(a, n))
        else:
            return np.linalg.eigvalsh(smat(a, n))[::-1].copy(), None
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver failed on psd block: {exc}") from exc
    order = np.argsort(vals)[::-1]
    vals = vals[order]
    vecs = vecs[:, order]
    for j in range(n):
        v = vecs[:, j]
        nz = np.nonzero(np.abs(v) > 1e-12)[0]
        if nz.size and v[nz[0]] < 0:
            vecs[:, j] = -v
    return vals, vecs


def _frame_block(block, a):
    """Eigenvalues (descending) and primitive idempotents of one block,
    as rows of an (r_k, d_k) array."""
    if block.kind == "rank1":
        return np.array([a[0]]), np.array([[1.0]])
    if block.kind == "soc":
        xbar = a[1:]
        nrm = float(np.linalg.norm(xbar))
        if nrm > 0.0:
            u = xbar / nrm
        else:
            u = np.zeros(block.size - 1)
            u[0] = 1.0  # deterministic degenerate frame
        c1 = np.concatenate(([0.5], 0.5 * u))
        c2 = np.concatenate(([0.5], -0.5 * u))
        return np.array([a[0] + nrm, a[0] - nrm]), np.vstack([c1, c2])
    vals, vecs = _eigh_block(block, a, want_vectors=True)
    idem = np.vstack([svec(np.outer(vecs[:, j], vecs[:, j])) for j in range(block.size)])
    return vals, idem


def _recombine_block(block, a, func):
    """Apply a scalar function to the spectrum of one block."""
    if block.kind == "rank1":
        return np.array([func(a[0])])
    if block.kind == "soc":
        vals, idem = _frame_block(block, a)
        return func(vals[0]) * idem[0] + func(vals[1]) * idem[1]
    vals, vecs = _eigh_block(block, a, want_vectors=True)
    return svec((vecs * np.array([func(v) for v in vals])) @ vecs.T)


def _quad_block(block, w, x):
    """Quadratic representation of one block applied to x."""
    if block.kind == "rank1":
        return w * w * x
    if block.kind == "soc":
        wbar, xbar = w[1:], x[1:]
        dot = float(wbar @ xbar)
        detw = float(w[0] ** 2 - wbar @ wbar)
        out = np.empty_like(x)
        out[0] = (w @ w) * x[0] + 2.0 * w[0] * dot
        out[1:] = 2.0 * w[0] * x[0] * wbar + detw * xbar + 2.0 * dot * wbar
        return out
    n = block.size
    mw = smat(w, n)
    return svec(mw @ smat(x, n) @ mw)


def _quad_operator_block(block, u):
    """Dense matrix of the quadratic representation of u on block
    coordinates."""
    if block.kind == "rank1":
        return np.array([[u[0] ** 2]])
    if block.kind == "soc":
        ubar = u[1:]
        detu = float(u[0] ** 2 - ubar @ ubar)
        m = np.empty((block.size, block.size))
        m[0, 0] = u @ u
        m[0, 1:] = 2.0 * u[0] * ubar
        m[1:, 0] = m[0, 1:]
        m[1:, 1:] = detu * np.eye(block.size - 1) + 2.0 * np.outer(ubar, ubar)
        return m
    n = block.size
    mu = smat(u, n)
    cols = []
    for p in range(block.dim):
        basis = np.zeros(block.dim)
        basis[p] = 1.0
        cols.append(svec(mu @ smat(basis, n) @ mu))
    return np.column_stack(cols)


# ---------------------------------------------------------------------------
# element-level operations
# ---------------------------------------------------------------------------


def jordan_product(x, y):
    """Blockwise Jordan product; bilinear and commutative."""
    if x.spec != y.spec:
        raise ShapeMismatchError("jordan_product needs conforming elements")
    out = np.empty(x.spec.dim)
    for k, b in enumerate(x.spec.blocks):
        out[x.spec.slice(k)] = _prod_block(b, x.block(k), y.block(k))
    return Element(x.spec, out)


def inner(x, y):
    """Trace inner product <x, y> = tr(x o y), summed over blocks."""
    if x.spec != y.spec:
        raise ShapeMismatchError("inner needs conforming elements")
    return float((x.data * x.spec.weights) @ y.data)


def norm2(x):
    """Norm induced by the trace inner product."""
    return float(np.sqrt(max(inner(x, x), 0.0)))


def trace(x):
    return sum(_trace_block(b, x.block(k)) for k, b in enumerate(x.spec.blocks))


def det(x):
    """Determinant of the full element: product of the block determinants."""
    out = 1.0
    for k, b in enumerate(x.spec.blocks):
        out *= _det_block(b, x.block(k))
    return out


def block_trace(x, k):
    """<x_k, e_k> for one block."""
    return _trace_block(x.spec.blocks[k], x.block(k))


def block_eigenvalues(x):
    """Per-block eigenvalue arrays, each descending."""
    return [_eigvals_block(b, x.block(k)) for k, b in enumerate(x.spec.blocks)]


@dataclass
class BlockFrame:
    """Spectral data of one block: eigenvalues (descending) and the
    matching primitive idempotents as rows (r_k, d_k)."""

    eigenvalues: np.ndarray
    idempotents: np.ndarray


@dataclass
class SpectralDecomposition:
    """Per-block Jordan frames of an element."""

    spec: ConeSpec
    frames: list

    def reconstruct(self):
        """Sum of eigenvalue-weighted idempotents; equals the input."""
        data = np.empty(self.spec.dim)
        for k, frame in enumerate(self.frames):
            data[self.spec.slice(k)] = frame.eigenvalues @ frame.idempotents
        return Element(self.spec, data)


def spectral_decomposition(x):
    frames = []
    for k, b in enumerate(x.spec.blocks):
        try:
            vals, idem = _frame_block(b, x.block(k))
        except NumericalError as exc:
            raise NumericalError(f"block {k}: {exc}", block=k) from exc
        frames.append(BlockFrame(vals, idem))
    return SpectralDecomposition(x.spec, frames)


def lambda_min(x):
    """Global minimum eigenvalue and a primitive idempotent attaining it.

    Returns ``(value, c)`` with c embedded in the full space (zero on the
    other blocks), <e, c> = 1 and <x, c> = value. Ties across blocks go to
    the lowest block index; ties inside a block to the first frame member.
    """
    best_val = None
    best_k = -1
    best_idem = None
    for k, b in enumerate(x.spec.blocks):
        vals, idem = _frame_block(b, x.block(k))
        j = int(np.argmin(vals))
        if best_val is None or vals[j] < best_val:
            best_val = float(vals[j])
            best_k = k
            best_idem = idem[j]
    data = np.zeros(x.spec.dim)
    data[x.spec.slice(best_k)] = best_idem
    return best_val, Element(x.spec, data)


def _spectral_map(x, func, check):
    out = np.empty(x.spec.dim)
    for k, b in enumerate(x.spec.blocks):
        vals = _eigvals_block(b, x.block(k))
        check(k, vals)
        out[x.spec.slice(k)] = _recombine_block(b, x.block(k), func)
    return Element(x.spec, out)


def inverse(x, tol=TOL_SINGULAR):
    """Spectral inverse; requires every |eigenvalue| > tol."""

    def check(k, vals):
        small = np.abs(vals).min()
        if small <= tol:
            raise SingularElementError(
                f"block {k} is singular (|eigenvalue| = {small:.3e})",
                block=k,
                eigenvalue=float(vals[np.abs(vals).argmin()]),
            )

    return _spectral_map(x, lambda v: 1.0 / v, check)


def sqrt(x, tol=TOL_SINGULAR):
    """Spectral square root; requires x in the cone up to tol."""

    def check(k, vals):
        if vals.min() < -tol * max(1.0, np.abs(vals).max()):
            raise SingularElementError(
                f"block {k} has a negative eigenvalue ({vals.min():.3e})",
                block=k,
                eigenvalue=float(vals.min()),
            )

    return _spectral_map(x, lambda v: np.sqrt(max(v, 0.0)), check)


def inv_sqrt(x, tol=TOL_SINGULAR):
    """Spectral inverse square root; requires x interior."""

    def check(k, vals):
        if vals.min() <= tol:
            raise SingularElementError(
                f"block {k} is not interior (eigenvalue {vals.min():.3e})",
                block=k,
                eigenvalue=float(vals.min()),
            )

    return _spectral_map(x, lambda v: 1.0 / np.sqrt(v), check)


def norm(x, kind="two"):
    """Spectral norms.

    ``two``     sqrt of sum of squared eigenvalues (trace norm),
    ``one``     sum of |eigenvalues| over all blocks,
    ``inf``     max |eigenvalue|,
    ``one_inf`` max over blocks of the block 1-norms,
    ``inf_one`` sum over blocks of the block inf-norms.
    """
    if kind not in NORM_KINDS:
        raise ValueError(f"unknown norm kind {kind!r}")
    if kind == "two":
        return norm2(x)
    per_block = block_eigenvalues(x)
    if kind == "one":
        return float(sum(np.abs(v).sum() for v in per_block))
    if kind == "inf":
        return float(max(np.abs(v).max() for v in per_block))
    if kind == "one_inf":
        return float(max(np.abs(v).sum() for v in per_block))
    return float(sum(np.abs(v).max() for v in per_block))


def cone_one_inf(x):
    """max_k <x_k, e_k>: equals norm(x, "one_inf") for x in the cone,
    computed from block traces alone (no eigensolves)."""
    return max(block_trace(x, k) for k in range(x.spec.ell))


def quad_apply(w, x):
    """Blockwise quadratic representation of w applied to x."""
    if w.spec != x.spec:
        raise ShapeMismatchError("quad_apply needs conforming elements")
    out = np.empty(x.spec.dim)
    for k, b in enumerate(x.spec.blocks):
        out[x.spec.slice(k)] = _quad_block(b, w.block(k), x.block(k))
    return Element(x.spec, out)


def quad_operator(block, u):
    """Dense matrix of the quadratic representation of a block element."""
    return _quad_operator_block(block, np.asarray(u, dtype=float))


def quad_matrix(w_block, scale, block):
    """Matrix of the quadratic representation of w^(-1/2) * scale on one
    block's coordinates; w must be interior."""
    w_block = np.asarray(w_block, dtype=float)
    u = _recombine_block_checked_inv_sqrt(block, w_block) * float(scale)
    return _quad_operator_block(block, u)


def _recombine_block_checked_inv_sqrt(block, a, tol=TOL_SINGULAR):
    vals = _eigvals_block(block, a)
    if vals.min() <= tol:
        raise SingularElementError(
            f"quad_matrix needs an interior element (eigenvalue {vals.min():.3e})",
            eigenvalue=float(vals.min()),
        )
    return _recombine_block(block, a, lambda v: 1.0 / np.sqrt(v))


def is_interior(x, tol=TOL_INTERIOR):
    """True iff lambda_min(x) > tol * max(1, ||x||_inf)."""
    per_block = block_eigenvalues(x)
    lo = min(v.min() for v in per_block)
    hi = max(np.abs(v).max() for v in per_block)
    return bool(lo > tol * max(1.0, hi))


def in_cone(x, tol=TOL_INTERIOR):
    """True iff lambda_min(x) >= -tol * max(1, ||x||_inf)."""
    per_block = block_eigenvalues(x)
    lo = min(v.min() for v in per_block)
    hi = max(np.abs(v).max() for v in per_block)
    return bool(lo >= -tol * max(1.0, hi))
