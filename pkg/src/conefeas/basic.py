"""Basic procedure: drive the projected iterate toward zero, an interior
point, or the rescaling threshold.

Starting from an interior y with <e, y> = 1, each step projects the
idempotent c attaining lambda_min(P y) and replaces y by the convex
combination alpha*y + (1-alpha)*c that minimizes ||P y'||. The loop ends
with a primal point (projection interior), a dual certificate (projection
zero, equivalently a cone point in range A*), or an iterate whose
projection is below ||y||_{1,inf} / (2 r_max sqrt(ell)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import (
    cone_one_inf,
    in_cone,
    inner,
    is_interior,
    lambda_min,
    norm2,
)
from .cones import ConeError, Element, NumericalError, identity


class BasicBudgetError(ConeError):
    """Iteration budget exhausted; carries the last iterate."""

    def __init__(self, message, last_y, iterations):
        super().__init__(message)
        self.last_y = last_y
        self.iterations = iterations


@dataclass
class BasicOutcome:
    """Result of one basic-procedure run.

    ``status`` is one of:

    * ``"primal"``    - ``point`` is interior with A point = 0
    * ``"dual"``      - ``point`` is a nonzero cone element in range A*
    * ``"threshold"`` - ``point`` is the iterate y, ``projected`` its
      projection z with ||z|| <= ||y||_{1,inf} / (2 r_max sqrt(ell))
    """

    status: str
    point: Element
    projected: Element | None
    iterations: int


def run_basic(projector, spec, y_init, cfg, trace=None):
    """Run the basic procedure from ``y_init`` (interior, <e, y> = 1).

    ``cfg.bp_stop`` picks the zero test: ``"z_zero"`` stops on z = 0 with
    a dual point y; ``"y_minus_z"`` stops as soon as y - z enters the cone
    (y - z is always in range A*), which surfaces dual certificates
    without waiting for z to vanish. ``trace``, when a list, receives one
    dict per executed update with the step diagnostics.

    Raises :class:`BasicBudgetError` after ``cfg.bp_budget(spec)`` updates.
    """
    e = identity(spec)
    threshold = 1.0 / (2.0 * spec.rank_max * math.sqrt(spec.ell))
    budget = cfg.bp_budget(spec)

    y = y_init / inner(e, y_init)
    z = projector.apply(y)
    iterations = 0
    while True:
        nz = norm2(z)
        scale = max(1.0, norm2(y))
        if cfg.bp_stop == "z_zero":
            if nz <= cfg.tol_zero * scale:
                return BasicOutcome("dual", y, None, iterations)
        else:
            gap = y - z
            if norm2(gap) <= cfg.tol_zero * scale:
                # y = z: the projection itself is interior
                return BasicOutcome("primal", z, None, iterations)
            if in_cone(gap, cfg.tol_int):
                return BasicOutcome("dual", gap, None, iterations)
        if is_interior(z, cfg.tol_int):
            return BasicOutcome("primal", z, None, iterations)
        if nz <= threshold * cone_one_inf(y):
            return BasicOutcome("threshold", y, z, iterations)

        if iterations >= budget:
            raise BasicBudgetError(
                f"basic procedure exceeded {budget} iterations", y, iterations
            )
        iterations += 1

        lam, c = lambda_min(z)
        p = projector.apply(c)
        npn = norm2(p)
        if npn <= cfg.tol_zero:
            return BasicOutcome("dual", c, None, iterations)
        if is_interior(p, cfg.tol_int):
            return BasicOutcome("primal", p, None, iterations)
        if npn <= threshold:  # ||c||_{1,inf} = 1 for a primitive idempotent
            return BasicOutcome("threshold", c, p, iterations)

        diff = z - p
        denom = inner(diff, diff)
        if denom <= 0.0 or not np.isfinite(denom):
            raise NumericalError("degenerate update step: ||z - p|| vanished")
        alpha = inner(p, p - z) / denom
        y = alpha * y + (1.0 - alpha) * c
        y = y / inner(e, y)
        z = projector.apply(y)
        if trace is not None:
            trace.append(
                {
                    "iteration": iterations,
                    "alpha": float(alpha),
                    "lambda_min_z": float(lam),
                    "norm_z_before": float(nz),
                    "norm_z_after": float(norm2(z)),
                    "one_inf_y": float(cone_one_inf(y)),
                }
            )
