"""Command-line entry points.

Subcommands: ``solve``, ``verify``, ``generate``, ``phi-curve``.
Exit codes: 0 primal (and generic success), 1 dual, 2 eps-infeasible,
3 budget exceeded, 64 usage or parse error, 65 verification failure.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from .cones import ConeError, DegenerateInputError
from .config import SolverConfig
from .fileio import (
    FileFormatError,
    cone_list_to_spec,
    load_certificate,
    load_problem,
    save_certificate,
    save_problem,
)
from .instances import generate
from .rescale import phi
from .solver import solve, verify

EXIT_CODES = {"primal": 0, "dual": 1, "eps_infeasible": 2, "budget_exceeded": 3}
EXIT_USAGE = 64
EXIT_VERIFY_FAILED = 65


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def phi_curve(rho_min, rho_max, steps):
    """Tabulate (rho, exp(-phi(rho))) on an even grid."""
    if rho_min < 1.0:
        raise DegenerateInputError("phi-curve needs rho_min >= 1")
    if not rho_min < rho_max:
        raise DegenerateInputError("phi-curve needs rho_min < rho_max")
    if steps < 1:
        raise DegenerateInputError("phi-curve needs at least one step")
    grid = np.linspace(rho_min, rho_max, steps)
    return [(float(r), math.exp(-phi(float(r)))) for r in grid]


def format_phi_csv(rows):
    lines = ["rho,exp_neg_phi"]
    lines.extend(f"{r:.12g},{v:.12g}" for r, v in rows)
    return "\n".join(lines) + "\n"


def parse_inline_cone(text):
    """Parse 'nonneg:2,soc:3,psd:2' into a file-style cone list."""
    out = []
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            continue
        if ":" not in piece:
            raise UsageError(f"bad cone segment {piece!r}, expected kind:size")
        kind, _, num = piece.partition(":")
        try:
            size = int(num)
        except ValueError as exc:
            raise UsageError(f"bad cone size in {piece!r}") from exc
        if kind == "nonneg":
            out.append({"type": "nonneg", "count": size})
        elif kind == "soc":
            out.append({"type": "soc", "dim": size})
        elif kind == "psd":
            out.append({"type": "psd", "order": size})
        else:
            raise UsageError(f"unknown cone kind {kind!r}")
    if not out:
        raise UsageError("empty cone description")
    return out


def _build_parser():
    parser = _Parser(prog="conefeas", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve a problem file")
    p_solve.add_argument("problem")
    p_solve.add_argument("--eps", type=float, default=1e-6)
    p_solve.add_argument("--max-bp-iters", type=int, default=None)
    p_solve.add_argument("--max-rescale-iters", type=int, default=None)
    p_solve.add_argument("--bp-stop", choices=["z-zero", "y-minus-z"], default="z-zero")
    p_solve.add_argument("--tol-interior", type=float, default=1e-10)
    p_solve.add_argument("--tol-zero", type=float, default=1e-12)
    p_solve.add_argument("--out", default=None, help="write the certificate JSON here")

    p_verify = sub.add_parser("verify", help="re-check a certificate against a problem")
    p_verify.add_argument("problem")
    p_verify.add_argument("certificate")
    p_verify.add_argument("--tol", type=float, default=1e-8)

    p_gen = sub.add_parser("generate", help="draw an instance of known status")
    p_gen.add_argument("specfile", nargs="?", default=None,
                       help="JSON file with a 'cone' entry")
    p_gen.add_argument("--cone", default=None,
                       help="inline cone, e.g. nonneg:2,soc:3,psd:2")
    p_gen.add_argument("--kind", choices=["feasible", "infeasible"], required=True)
    p_gen.add_argument("--m", type=int, required=True)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", required=True)

    p_phi = sub.add_parser("phi-curve", help="emit the volume-rate curve as CSV")
    p_phi.add_argument("--min", type=float, default=1.0)
    p_phi.add_argument("--max", type=float, default=10.0)
    p_phi.add_argument("--steps", type=int, default=100)
    p_phi.add_argument("--out", default=None)
    return parser


def _cmd_solve(args):
    inst = load_problem(args.problem)
    cfg = SolverConfig(
        eps=args.eps,
        max_bp_iters=args.max_bp_iters,
        max_rescale_iters=args.max_rescale_iters,
        bp_stop=args.bp_stop.replace("-", "_"),
        tol_zero=args.tol_zero,
        tol_int=args.tol_interior,
    )
    cert = solve(inst, cfg)
    print(f"status: {cert.status}")
    print(f"basic-procedure iterations: {cert.stats.bp_iterations}")
    print(f"rescaling iterations: {cert.stats.rescale_iterations}")
    if cert.status == "eps_infeasible":
        print(
            f"block {cert.block}: ledger {cert.eps_value:.6f} "
            f"< threshold {cert.threshold:.6f}"
        )
    if cert.note:
        print(f"note: {cert.note}")
    if args.out:
        save_certificate(args.out, cert)
        print(f"certificate written to {args.out}")
    return EXIT_CODES[cert.status]


def _cmd_verify(args):
    inst = load_problem(args.problem)
    cert = load_certificate(args.certificate, inst.spec)
    report = verify(inst, cert, tol=args.tol)
    print(report.summary())
    return 0 if report.ok else EXIT_VERIFY_FAILED


def _cmd_generate(args):
    if (args.specfile is None) == (args.cone is None):
        raise UsageError("generate needs exactly one of: a spec file or --cone")
    if args.specfile is not None:
        import json

        with open(args.specfile, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
        cone = obj.get("cone") if isinstance(obj, dict) else None
        if cone is None:
            raise UsageError("spec file needs a 'cone' entry")
    else:
        cone = parse_inline_cone(args.cone)
    spec = cone_list_to_spec(cone)
    inst, witness = generate(spec, args.m, args.kind, args.seed)
    save_problem(args.out, inst)
    print(f"wrote {args.kind} instance ({spec.describe()}, m={args.m}) to {args.out}")
    if args.kind == "feasible":
        print("witness: interior x0 with A x0 = 0 (not stored)")
    else:
        print("witness: interior y0 = A* u with u = e_1 (not stored)")
    return 0


def _cmd_phi_curve(args):
    rows = phi_curve(args.min, args.max, args.steps)
    text = format_phi_csv(rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "generate":
            return _cmd_generate(args)
        return _cmd_phi_curve(args)
    except (UsageError, FileFormatError, DegenerateInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
