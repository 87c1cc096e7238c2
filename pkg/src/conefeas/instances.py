"""Random instance generation with known feasibility status.

Feasible instances hide an interior witness x0 in ker A by
orthogonalizing every row against x0 under the trace inner product;
infeasible instances plant an interior y0 inside range(A*) (first row =
the functional <y0, .>), which by the Gordan-Stiemke alternative rules
out interior kernel points.
"""

from __future__ import annotations

import numpy as np

from .algebra import norm
from .cones import Element, identity
from .projection import ProblemInstance


def random_interior(spec, rng, margin=0.5):
    """Identity plus a bounded random perturbation; lambda_min >= 1 - margin."""
    pert = Element(spec, rng.standard_normal(spec.dim))
    scale = norm(pert, "inf")
    if scale == 0.0:
        return identity(spec)
    return identity(spec) + (margin / scale) * pert


def generate(spec, m, kind, seed):
    """Draw an instance of known status.

    Returns ``(instance, witness)``: the witness is the interior x0 with
    A x0 = 0 for ``kind="feasible"``, or ``(y0, u)`` with y0 = A* u
    interior for ``kind="infeasible"``.
    """
    rng = np.random.default_rng(seed)
    if kind == "feasible":
        if not m < spec.dim:
            raise ValueError("feasible generation needs m < d")
        x0 = random_interior(spec, rng)
        rows = rng.standard_normal((m, spec.dim))
        image = spec.weights * x0.data  # the functional <x0, .>
        denom = float(x0.data @ image)
        for i in range(m):
            rows[i] -= ((rows[i] @ x0.data) / denom) * image
        return ProblemInstance(spec, rows), x0
    if kind == "infeasible":
        if m < 1:
            raise ValueError("infeasible generation needs m >= 1")
        y0 = random_interior(spec, rng)
        rows = rng.standard_normal((m, spec.dim))
        rows[0] = spec.weights * y0.data
        u = np.zeros(m)
        u[0] = 1.0
        return ProblemInstance(spec, rows), (y0, u)
    raise ValueError(f"unknown kind {kind!r}")
