"""Orthogonal projection onto ker A with respect to the trace inner product.

With W the diagonal Gram matrix of the trace inner product in natural
coordinates, the projector is P = I - W^-1 A^T (A W^-1 A^T)^-1 A, realized
through a pivoted Cholesky factorization of A W^-1 A^T that also detects
and drops dependent rows of A.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_triangular
from scipy.linalg.lapack import dpstrf

from .cones import ConeSpec, Element, NumericalError, ShapeMismatchError

DROP_TOL = 1e-12


@dataclass
class ProblemInstance:
    """A dense m x d system acting on natural element coordinates."""

    spec: ConeSpec
    a: np.ndarray

    def __post_init__(self):
        self.a = np.asarray(self.a, dtype=float)
        if self.a.ndim != 2 or self.a.shape[1] != self.spec.dim:
            raise ShapeMismatchError(
                f"A must be m x {self.spec.dim}, got {self.a.shape}"
            )
        if not np.all(np.isfinite(self.a)):
            raise ShapeMismatchError("A must have finite entries")

    @property
    def m(self):
        return self.a.shape[0]


@dataclass
class Projector:
    """Factorized projector onto ker A; immutable once built."""

    spec: ConeSpec
    rows: np.ndarray                  # retained independent row indices
    a_rows: np.ndarray                # A restricted to those rows (k x d)
    factor: np.ndarray                # upper Cholesky factor of A_R W^-1 A_R^T
    winv_at: np.ndarray               # W^-1 A_R^T (d x k)

    @property
    def is_identity(self):
        return self.rows.size == 0

    def apply_vector(self, v):
        if self.is_identity:
            return v.copy()
        t = self.a_rows @ v
        s = solve_triangular(self.factor, t, trans="T", lower=False)
        s = solve_triangular(self.factor, s, lower=False)
        return v - self.winv_at @ s

    def apply(self, x):
        if x.spec != self.spec:
            raise ShapeMismatchError("element does not match the projector's cone")
        return Element(self.spec, self.apply_vector(x.data))


def build_projector(inst, drop_tol=DROP_TOL):
    """Factor the projector onto ker A.

    Dependent rows are detected by pivoted Cholesky on A W^-1 A^T with
    drop tolerance ``drop_tol * max(diag)`` and removed; A = 0 (or m = 0)
    yields the identity projector.
    """
    spec, a = inst.spec, inst.a
    w = spec.weights
    empty = Projector(
        spec,
        rows=np.zeros(0, dtype=int),
        a_rows=np.zeros((0, spec.dim)),
        factor=np.zeros((0, 0)),
        winv_at=np.zeros((spec.dim, 0)),
    )
    if inst.m == 0:
        return empty
    gram = (a / w) @ a.T
    gram = 0.5 * (gram + gram.T)
    max_diag = float(gram.diagonal().max(initial=0.0))
    if max_diag <= 0.0:
        return empty
    c, piv, rank, info = dpstrf(gram, tol=drop_tol * max_diag, lower=0)
    if info < 0:
        raise NumericalError(f"pivoted Cholesky failed (lapack info={info})")
    if rank == 0:
        return empty
    rows = np.asarray(piv[:rank], dtype=int) - 1  # piv is 1-based
    factor = np.triu(c)[:rank, :rank]
    a_rows = a[rows].copy()
    return Projector(
        spec,
        rows=rows,
        a_rows=a_rows,
        factor=factor,
        winv_at=(a_rows / w).T.copy(),
    )


def project(projector, x):
    """Apply the projector to an element."""
    return projector.apply(x)
