"""Solver configuration shared by the basic procedure and the main loop."""

from __future__ import annotations

import math
from dataclasses import dataclass

BP_STOP_RULES = ("z_zero", "y_minus_z")


@dataclass
class SolverConfig:
    """Knobs for one solve run.

    ``eps`` is the minimum-eigenvalue resolution of the infeasibility
    certificate; budgets default to the analytic iteration bounds when
    left as None (they depend on the cone, so they are resolved at solve
    time).
    """

    eps: float = 1e-6
    max_bp_iters: int | None = None
    max_rescale_iters: int | None = None
    bp_stop: str = "z_zero"
    tol_zero: float = 1e-12
    tol_int: float = 1e-10
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.eps < 1.0:
            raise ValueError("eps must lie in (0, 1)")
        if self.bp_stop not in BP_STOP_RULES:
            raise ValueError(f"bp_stop must be one of {BP_STOP_RULES}")
        if self.tol_zero < 0 or self.tol_int < 0:
            raise ValueError("tolerances must be nonnegative")

    def bp_budget(self, spec):
        """Default 4 * ell^3 * r_max^2, the basic-procedure step bound."""
        if self.max_bp_iters is not None:
            return int(self.max_bp_iters)
        return 4 * spec.ell**3 * spec.rank_max**2

    def rescale_budget(self, spec):
        """Default ceil(r / phi(2) * ln(1/eps)) + 8."""
        if self.max_rescale_iters is not None:
            return int(self.max_rescale_iters)
        phi2 = 1.5 - math.sqrt(2.0)
        return math.ceil(spec.rank / phi2 * math.log(1.0 / self.eps)) + 8
