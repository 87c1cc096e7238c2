"""Main loop: alternate the basic procedure with per-block rescalings,
track the log-volume ledger, map certificates back to the original
problem, and verify them.

Each rescaling replaces A by A Q with Q a block-diagonal cone
automorphism; the accumulated forward map sends solutions of the current
scaled system to solutions of the original one, and the transpose of the
accumulated inverse carries dual certificates back into range(A*).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    _eigvals_block,
    block_eigenvalues,
    in_cone,
    inner,
    lambda_min,
    norm2,
)
from .basic import BasicBudgetError, run_basic
from .cones import ConeSpec, Element, NumericalError, identity
from .config import SolverConfig
from .projection import ProblemInstance, build_projector
from .rescale import (
    block_scaling,
    block_scaling_inverse,
    build_w,
    phi,
    rho_for_block,
    volume_delta,
)

RHO_GOOD = 2.0
RHO_SLACK = 1e-9


@dataclass
class ScalingState:
    """Accumulated per-block automorphisms and the log-volume ledger.

    ``forward[k]`` is the composed matrix Q^1_k ... Q^i_k, ``inverse[k]``
    its matrix inverse (maintained alongside, never recomputed), and
    ``eps[k]`` the summed ledger increments for block k.
    """

    spec: ConeSpec
    forward: list
    inverse: list
    eps: np.ndarray
    iteration: int = 0

    @classmethod
    def identity(cls, spec):
        return cls(
            spec,
            forward=[np.eye(b.dim) for b in spec.blocks],
            inverse=[np.eye(b.dim) for b in spec.blocks],
            eps=np.zeros(spec.ell),
        )

    def push(self, k, q, q_inv):
        self.forward[k] = self.forward[k] @ q
        self.inverse[k] = q_inv @ self.inverse[k]


def map_primal(state, z):
    """Forward map: a solution of the current scaled system becomes a
    solution of the original one."""
    data = np.empty(state.spec.dim)
    for k in range(state.spec.ell):
        data[state.spec.slice(k)] = state.forward[k] @ z.block(k)
    return Element(state.spec, data)


def map_dual(state, c):
    """Adjoint-inverse map: carries range((A Q^1...Q^i)*) cap K back to
    range(A*) cap K. Uses inverse[k]^T, the composition of the inverse
    automorphisms in forward order (each factor is symmetric)."""
    data = np.empty(state.spec.dim)
    for k in range(state.spec.ell):
        data[state.spec.slice(k)] = state.inverse[k].T @ c.block(k)
    return Element(state.spec, data)


@dataclass
class SolveStats:
    bp_iterations: int = 0
    rescale_iterations: int = 0
    eps_ledger: np.ndarray | None = None
    transcript: list = field(default_factory=list)


@dataclass
class Certificate:
    """Tagged solve outcome.

    ``status`` is ``"primal"`` (x interior, A x = 0), ``"dual"`` (y in the
    cone, y = A* u, y != 0), ``"eps_infeasible"`` (the ledger of ``block``
    fell below log r_k + log eps, so no scaled-feasible point has
    lambda_min >= eps), or ``"budget_exceeded"``.
    """

    status: str
    x: Element | None = None
    y: Element | None = None
    u: np.ndarray | None = None
    block: int | None = None
    eps_value: float | None = None
    threshold: float | None = None
    note: str | None = None
    stats: SolveStats = field(default_factory=SolveStats)


def _fit_dual_multiplier(inst, y):
    """Least-squares u with A* u ~ y in the trace inner product."""
    w = inst.spec.weights
    sw = np.sqrt(w)
    design = inst.a.T / sw[:, None]
    rhs = sw * y.data
    u, *_ = np.linalg.lstsq(design, rhs, rcond=None)
    return u


def solve(inst, cfg=None, on_iteration=None):
    """Run the main algorithm on an instance.

    Returns a :class:`Certificate`. ``on_iteration``, when given, is
    called after every rescaling round with a dict carrying the round's
    iterate y, projection z, per-block step ratios, the updated ledger,
    and the (pre-update) scaling state; copy anything you retain.
    """
    cfg = cfg if cfg is not None else SolverConfig()
    spec = inst.spec
    stats = SolveStats(eps_ledger=np.zeros(spec.ell))

    for k, b in enumerate(spec.blocks):
        if cfg.eps >= 1.0 / b.rank:
            return Certificate(
                "eps_infeasible",
                block=k,
                eps_value=0.0,
                threshold=math.log(b.rank) + math.log(cfg.eps),
                note=(
                    f"eps >= 1/r_k for block {k}: every scaled-feasible x has "
                    f"lambda_min(x) <= 1/{b.rank} <= eps, so no eps-feasible "
                    "solution exists"
                ),
                stats=stats,
            )

    state = ScalingState.identity(spec)
    a = inst.a.copy()
    y_start = identity(spec) / spec.rank
    rescale_budget = cfg.rescale_budget(spec)

    while True:
        projector = build_projector(ProblemInstance(spec, a))
        try:
            outcome = run_basic(projector, spec, y_start, cfg)
        except BasicBudgetError as err:
            stats.bp_iterations += err.iterations
            stats.eps_ledger = state.eps.copy()
            return Certificate(
                "budget_exceeded",
                note="basic procedure iteration budget exhausted",
                stats=stats,
            )
        stats.bp_iterations += outcome.iterations

        if outcome.status == "primal":
            stats.eps_ledger = state.eps.copy()
            return Certificate("primal", x=map_primal(state, outcome.point), stats=stats)

        if outcome.status == "dual":
            y = map_dual(state, outcome.point)
            stats.eps_ledger = state.eps.copy()
            return Certificate(
                "dual", y=y, u=_fit_dual_multiplier(inst, y), stats=stats
            )

        if stats.rescale_iterations >= rescale_budget:
            stats.eps_ledger = state.eps.copy()
            return Certificate(
                "budget_exceeded",
                note="rescaling iteration budget exhausted",
                stats=stats,
            )
        stats.rescale_iterations += 1

        y, z = outcome.point, outcome.projected
        rho = np.array([rho_for_block(y, z, k, spec) for k in range(spec.ell)])
        if rho.max() < RHO_GOOD - RHO_SLACK:
            raise NumericalError(
                "threshold exit without any block reaching step ratio 2"
            )
        good = [k for k in range(spec.ell) if rho[k] >= RHO_GOOD - RHO_SLACK]

        record = {
            "iteration": stats.rescale_iterations,
            "y": y,
            "z": z,
            "rho": rho,
            "good_blocks": good,
            "state": state,
            "w_blocks": {},
            "eps": state.eps,
        }
        scalings = {}
        eps_cert = None
        for k, b in enumerate(spec.blocks):
            if rho[k] <= 1.0:
                continue
            w_k = build_w(y.block(k), rho[k], b)
            delta = volume_delta(w_k, b)
            state.eps[k] += delta
            record["w_blocks"][k] = w_k
            stats.transcript.append(
                {
                    "iteration": stats.rescale_iterations,
                    "block": k,
                    "rho": float(rho[k]),
                    "w_eigenvalues": [float(v) for v in _eigvals_block(b, w_k)],
                    "delta": float(delta),
                }
            )
            if state.eps[k] < math.log(b.rank) + math.log(cfg.eps):
                eps_cert = Certificate(
                    "eps_infeasible",
                    block=k,
                    eps_value=float(state.eps[k]),
                    threshold=math.log(b.rank) + math.log(cfg.eps),
                    stats=stats,
                )
                break
            scalings[k] = (
                block_scaling(w_k, b),
                block_scaling_inverse(w_k, b),
            )
        if on_iteration is not None:
            on_iteration(record)
        if eps_cert is not None:
            stats.eps_ledger = state.eps.copy()
            return eps_cert

        for k, (q, q_inv) in scalings.items():
            sl = spec.slice(k)
            a[:, sl] = a[:, sl] @ q
            state.push(k, q, q_inv)
        state.iteration += 1


# ---------------------------------------------------------------------------
# certificate verification
# ---------------------------------------------------------------------------


@dataclass
class CheckResult:
    name: str
    ok: bool
    residual: float | None = None
    detail: str = ""


@dataclass
class VerifyReport:
    status: str
    checks: list

    @property
    def ok(self):
        return all(c.ok for c in self.checks)

    def summary(self):
        lines = [f"certificate status: {self.status}"]
        for c in self.checks:
            mark = "pass" if c.ok else "FAIL"
            res = "" if c.residual is None else f" residual={c.residual:.3e}"
            lines.append(f"  [{mark}] {c.name}{res} {c.detail}".rstrip())
        return "\n".join(lines)


def verify(inst, cert, tol=1e-8):
    """Re-check every certificate invariant from scratch.

    Residuals, eigenvalues, and (for eps-infeasibility) the whole ledger
    are recomputed; nothing from the solve run is trusted beyond the
    certificate payload itself. Never mutates its inputs.
    """
    checks = []
    spec = inst.spec

    if cert.status == "primal":
        x = cert.x
        a_norm = float(np.linalg.norm(inst.a))
        x_norm = norm2(x)
        res = float(np.linalg.norm(inst.a @ x.data))
        denom = a_norm * x_norm
        rel = res / denom if denom > 0 else res
        checks.append(
            CheckResult("primal.kernel_residual", rel <= tol, rel, "||A x|| / (||A|| ||x||)")
        )
        lam = min(v.min() for v in block_eigenvalues(x))
        checks.append(
            CheckResult("primal.interior", lam > 0.0, float(lam), "lambda_min(x)")
        )
    elif cert.status == "dual":
        y = cert.y
        y_norm = norm2(y)
        checks.append(CheckResult("dual.nonzero", y_norm > 0.0, y_norm, "||y||"))
        member = in_cone(y, tol)
        lam = min(v.min() for v in block_eigenvalues(y))
        checks.append(
            CheckResult("dual.cone_membership", member, float(lam), "lambda_min(y)")
        )
        u = cert.u if cert.u is not None else _fit_dual_multiplier(inst, y)
        fit = Element(spec, (inst.a.T @ u) / spec.weights)
        rel = norm2(y - fit) / y_norm if y_norm > 0 else float("inf")
        checks.append(
            CheckResult("dual.range_residual", rel <= tol, rel, "||y - A* u|| / ||y||")
        )
    elif cert.status == "eps_infeasible":
        k = cert.block
        r_k = spec.blocks[k].rank
        if cert.note is not None and not cert.stats.transcript:
            # trivial large-eps case: threshold = log r_k + log eps >= 0
            checks.append(
                CheckResult(
                    "eps.trivial_case",
                    cert.threshold >= 0.0,
                    cert.threshold,
                    "log r_k + log eps >= 0 iff eps >= 1/r_k",
                )
            )
        else:
            checks.append(
                CheckResult(
                    "eps.below_threshold",
                    cert.eps_value < cert.threshold,
                    cert.eps_value - cert.threshold,
                    "eps_k - (log r_k + log eps)",
                )
            )
            replay = 0.0
            entries_ok = True
            phi2 = phi(2.0)
            for entry in cert.stats.transcript:
                if entry["block"] != k:
                    continue
                vals = np.asarray(entry["w_eigenvalues"])
                delta = math.log(r_k) - float(np.log(vals).sum()) / r_k
                replay += delta
                if not entry["rho"] > 1.0:
                    entries_ok = False
                if abs(delta - entry["delta"]) > 1e-10:
                    entries_ok = False
                if entry["rho"] >= RHO_GOOD and delta > -phi2 / r_k + 1e-12:
                    entries_ok = False
            gap = abs(replay - cert.eps_value)
            checks.append(
                CheckResult("eps.ledger_replay", gap <= tol, gap, "|replayed - stored|")
            )
            checks.append(
                CheckResult(
                    "eps.transcript_entries",
                    entries_ok,
                    None,
                    "rho > 1, stored deltas, phi(2)/r_k decrease on rho >= 2",
                )
            )
    elif cert.status == "budget_exceeded":
        checks.append(
            CheckResult(
                "budget.no_certificate",
                True,
                None,
                "budget exhaustion carries no claim to check",
            )
        )
    else:
        checks.append(CheckResult("unknown_status", False, None, cert.status))

    return VerifyReport(cert.status, checks)
