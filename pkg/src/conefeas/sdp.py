"""Direct dense-matrix path for PSD-only problems.

Mirrors the generic solver with pure matrix arithmetic on one PSD block
of order n: the quadratic representation is x -> w x w, the projected
iterate lives in S^n under the Frobenius inner product, and each
rescaling substitutes every constraint matrix a_i by
n * (w^(-1/2) a_i w^(-1/2)). Exists as an independently checkable route
for the generic solver on PSD-only instances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_triangular
from scipy.linalg.lapack import dpstrf

from .cones import NumericalError
from .config import SolverConfig
from .rescale import _minimizer_gap


def _eigh_sorted(mat):
    """Descending eigendecomposition with the shared sign convention."""
    vals, vecs = np.linalg.eigh(mat)
    order = np.argsort(vals)[::-1]
    vals = vals[order]
    vecs = vecs[:, order]
    for j in range(mat.shape[0]):
        v = vecs[:, j]
        nz = np.nonzero(np.abs(v) > 1e-12)[0]
        if nz.size and v[nz[0]] < 0:
            vecs[:, j] = -v
    return vals, vecs


def _sqrt_pair_psd(mat):
    """(w^(1/2), w^(-1/2)) from one eigendecomposition."""
    vals, vecs = _eigh_sorted(mat)
    if vals.min() <= 0.0:
        raise NumericalError("matrix is not positive definite")
    root = np.sqrt(vals)
    return (vecs * root) @ vecs.T, (vecs / root) @ vecs.T


class _MatrixProjector:
    """Frobenius-orthogonal projector onto {x : tr(a_i x) = 0}."""

    def __init__(self, mats, drop_tol=1e-12):
        m = len(mats)
        self.mats = mats
        gram = np.array([[float(np.tensordot(a, b)) for b in mats] for a in mats])
        gram = 0.5 * (gram + gram.T)
        max_diag = float(gram.diagonal().max(initial=0.0)) if m else 0.0
        if m == 0 or max_diag <= 0.0:
            self.rows = np.zeros(0, dtype=int)
            self.factor = np.zeros((0, 0))
            return
        c, piv, rank, info = dpstrf(gram, tol=drop_tol * max_diag, lower=0)
        if info < 0:
            raise NumericalError(f"pivoted Cholesky failed (lapack info={info})")
        self.rows = np.asarray(piv[:rank], dtype=int) - 1
        self.factor = np.triu(c)[:rank, :rank]

    def apply(self, x):
        if self.rows.size == 0:
            return x.copy()
        t = np.array([float(np.tensordot(self.mats[i], x)) for i in self.rows])
        s = solve_triangular(self.factor, t, trans="T", lower=False)
        s = solve_triangular(self.factor, s, lower=False)
        out = x.copy()
        for coef, i in zip(s, self.rows):
            out -= coef * self.mats[i]
        return out


@dataclass
class SdpResult:
    status: str                       # primal | dual | eps_infeasible | budget_exceeded
    point: np.ndarray | None = None   # x (primal) or y (dual)
    u: np.ndarray | None = None
    eps_value: float | None = None
    threshold: float | None = None
    bp_iterations: int = 0
    rescale_iterations: int = 0
    records: list = field(default_factory=list)


def _run_basic_sdp(projector, n, y, cfg):
    threshold = 1.0 / (2.0 * n)
    budget = cfg.max_bp_iters if cfg.max_bp_iters is not None else 4 * n * n
    y = y / np.trace(y)
    z = projector.apply(y)
    iterations = 0
    while True:
        nz = float(np.linalg.norm(z))
        scale = max(1.0, float(np.linalg.norm(y)))
        if cfg.bp_stop == "z_zero":
            if nz <= cfg.tol_zero * scale:
                return "dual", y, None, iterations
        else:
            gap = y - z
            if float(np.linalg.norm(gap)) <= cfg.tol_zero * scale:
                return "primal", z, None, iterations
            gvals = np.linalg.eigvalsh(gap)
            if gvals.min() >= -cfg.tol_int * max(1.0, np.abs(gvals).max()):
                return "dual", gap, None, iterations
        zvals = np.linalg.eigvalsh(z)
        if zvals.min() > cfg.tol_int * max(1.0, np.abs(zvals).max()):
            return "primal", z, None, iterations
        if nz <= threshold * np.trace(y):
            return "threshold", y, z, iterations

        if iterations >= budget:
            return "budget", y, None, iterations
        iterations += 1

        vals, vecs = _eigh_sorted(z)
        v = vecs[:, int(np.argmin(vals))]
        c = np.outer(v, v)
        p = projector.apply(c)
        npn = float(np.linalg.norm(p))
        if npn <= cfg.tol_zero:
            return "dual", c, None, iterations
        pvals = np.linalg.eigvalsh(p)
        if pvals.min() > cfg.tol_int * max(1.0, np.abs(pvals).max()):
            return "primal", p, None, iterations
        if npn <= threshold:
            return "threshold", c, p, iterations

        diff = z - p
        denom = float(np.tensordot(diff, diff))
        if denom <= 0.0 or not np.isfinite(denom):
            raise NumericalError("degenerate update step in the matrix path")
        alpha = float(np.tensordot(p, p - z)) / denom
        y = alpha * y + (1.0 - alpha) * c
        y = y / np.trace(y)
        z = projector.apply(y)


def solve_psd(mats, cfg=None):
    """Solve tr(a_i x) = 0, x positive definite, on matrices alone.

    ``mats`` is a sequence of n x n symmetric constraint matrices.
    Records one dict per rescaling round (basic-procedure output y, step
    ratio, w, ledger) so the run can be compared iterate-by-iterate
    against the generic path.
    """
    cfg = cfg if cfg is not None else SolverConfig()
    mats = [np.asarray(a, dtype=float) for a in mats]
    n = mats[0].shape[0] if mats else 0
    if n == 0:
        raise ValueError("solve_psd needs at least one constraint matrix")
    if cfg.eps >= 1.0 / n:
        return SdpResult(
            "eps_infeasible",
            eps_value=0.0,
            threshold=math.log(n) + math.log(cfg.eps),
        )
    phi2 = 1.5 - math.sqrt(2.0)
    rescale_budget = (
        cfg.max_rescale_iters
        if cfg.max_rescale_iters is not None
        else math.ceil(n / phi2 * math.log(1.0 / cfg.eps)) + 8
    )

    current = [a.copy() for a in mats]
    sqrt_factors = []      # s_j = w_j^(-1/2) sqrt(n), applied innermost-last
    inv_factors = []       # t_j = w_j^(1/2) / sqrt(n)
    eps_ledger = 0.0
    bp_total = 0
    records = []
    result = SdpResult("budget_exceeded")

    while True:
        projector = _MatrixProjector(current)
        status, point, projected, iters = _run_basic_sdp(
            projector, n, np.eye(n) / n, cfg
        )
        bp_total += iters

        if status == "primal":
            x = point
            for s in reversed(sqrt_factors):
                x = s @ x @ s
            result = SdpResult("primal", point=x)
            break
        if status == "dual":
            y = point
            for t in reversed(inv_factors):
                y = t @ y @ t
            gram = np.array([float(np.tensordot(a, y)) for a in mats])
            basis = np.array(
                [[float(np.tensordot(a, b)) for b in mats] for a in mats]
            )
            u, *_ = np.linalg.lstsq(basis, gram, rcond=None)
            result = SdpResult("dual", point=y, u=u)
            break
        if status == "budget":
            result = SdpResult("budget_exceeded")
            break

        if len(records) >= rescale_budget:
            result = SdpResult("budget_exceeded")
            break

        y, z = point, projected
        rho = float(np.trace(y)) / (n * float(np.linalg.norm(z)))
        gap = _minimizer_gap(rho)
        beta = n - gap
        w = (gap * rho * n / float(np.trace(y))) * y + beta * np.eye(n)
        wvals = np.linalg.eigvalsh(w)
        if wvals.min() <= 0.0:
            raise NumericalError("rescaling produced a non-interior w")
        eps_ledger += math.log(n) - float(np.log(wvals).sum()) / n
        records.append(
            {
                "iteration": len(records) + 1,
                "y": y.copy(),
                "bp_iterations": iters,
                "rho": rho,
                "w": w.copy(),
                "eps": eps_ledger,
            }
        )
        if eps_ledger < math.log(n) + math.log(cfg.eps):
            result = SdpResult(
                "eps_infeasible",
                eps_value=eps_ledger,
                threshold=math.log(n) + math.log(cfg.eps),
            )
            break

        w_sqrt, w_inv_sqrt = _sqrt_pair_psd(w)
        current = [n * (w_inv_sqrt @ a @ w_inv_sqrt) for a in current]
        sqrt_factors.append(w_inv_sqrt * math.sqrt(n))
        inv_factors.append(w_sqrt / math.sqrt(n))

    result.bp_iterations = bp_total
    result.rescale_iterations = len(records)
    result.records = records
    return result
