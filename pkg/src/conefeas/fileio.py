"""Problem and certificate serialization.

Problem files store human-readable coordinates: ``nonneg`` groups with a
count, ``soc`` blocks by dimension, and ``psd`` blocks as the raw
upper-triangle entries (column-major, no sqrt(2) scaling). The loader
expands nonneg groups into rank1 blocks and moves the sqrt(2) isometry
onto elements (x sqrt(2)) and A columns (/ sqrt(2)) so that A x is
preserved exactly.
"""

from __future__ import annotations

import json

import numpy as np

from .cones import SQRT2, BlockSpec, ConeError, ConeSpec, Element
from .projection import ProblemInstance
from .solver import Certificate, SolveStats


class FileFormatError(ConeError):
    """Malformed problem or certificate file; carries the field path."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path


def _expect(cond, path, message):
    if not cond:
        raise FileFormatError(path, message)


def cone_list_to_spec(cone, path="cone"):
    """Expand a file cone description into a ConeSpec (nonneg counts
    become that many rank1 blocks)."""
    _expect(isinstance(cone, list) and cone, path, "must be a nonempty list")
    blocks = []
    for i, entry in enumerate(cone):
        here = f"{path}[{i}]"
        _expect(isinstance(entry, dict), here, "must be an object")
        kind = entry.get("type")
        if kind == "nonneg":
            count = entry.get("count")
            _expect(isinstance(count, int) and count >= 1, f"{here}.count", "needs an int >= 1")
            blocks.extend(BlockSpec.rank1() for _ in range(count))
        elif kind == "soc":
            dim = entry.get("dim")
            _expect(isinstance(dim, int) and dim >= 2, f"{here}.dim", "needs an int >= 2")
            blocks.append(BlockSpec.soc(dim))
        elif kind == "psd":
            order = entry.get("order")
            _expect(isinstance(order, int) and order >= 1, f"{here}.order", "needs an int >= 1")
            blocks.append(BlockSpec.psd(order))
        else:
            raise FileFormatError(f"{here}.type", f"unknown block type {kind!r}")
    return ConeSpec(blocks)


def spec_to_cone_list(spec):
    """Collapse consecutive rank1 blocks back into nonneg groups."""
    out = []
    run = 0
    for b in spec.blocks:
        if b.kind == "rank1":
            run += 1
            continue
        if run:
            out.append({"type": "nonneg", "count": run})
            run = 0
        if b.kind == "soc":
            out.append({"type": "soc", "dim": b.size})
        else:
            out.append({"type": "psd", "order": b.size})
    if run:
        out.append({"type": "nonneg", "count": run})
    return out


def _file_scale(spec):
    """Per-coordinate factor s with x_internal = s * x_file (sqrt(2) on
    psd off-diagonal coordinates, 1 elsewhere)."""
    s = np.ones(spec.dim)
    for k, b in enumerate(spec.blocks):
        if b.kind != "psd":
            continue
        sl = spec.slice(k)
        local = np.full(b.dim, SQRT2)
        pos = 0
        for j in range(b.size):
            local[pos + j] = 1.0
            pos += j + 1
        s[sl] = local
    return s


def element_to_file(x):
    return (x.data / _file_scale(x.spec)).tolist()


def element_from_file(spec, values, path="payload"):
    values = np.asarray(values, dtype=float)
    _expect(values.shape == (spec.dim,), path, f"needs {spec.dim} coordinates")
    return Element(spec, values * _file_scale(spec))


def load_problem(path):
    """Read a problem file into internal coordinates."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FileFormatError("$", f"invalid JSON: {exc}") from exc
    _expect(isinstance(obj, dict), "$", "top level must be an object")
    spec = cone_list_to_spec(obj.get("cone"), "cone")
    amat = obj.get("A")
    _expect(isinstance(amat, dict), "A", "must be an object")
    rows, cols = amat.get("rows"), amat.get("cols")
    _expect(isinstance(rows, int) and rows >= 0, "A.rows", "needs an int >= 0")
    _expect(cols == spec.dim, "A.cols", f"must equal the cone dimension {spec.dim}")
    data = amat.get("data")
    _expect(isinstance(data, list), "A.data", "must be a list")
    _expect(len(data) == rows * cols, "A.data", f"needs rows*cols = {rows * cols} entries")
    a = np.asarray(data, dtype=float).reshape(rows, cols)
    _expect(bool(np.all(np.isfinite(a))), "A.data", "entries must be finite")
    return ProblemInstance(spec, a / _file_scale(spec)[None, :])


def save_problem(path, inst):
    """Write a problem file (internal -> file coordinates)."""
    a_file = inst.a * _file_scale(inst.spec)[None, :]
    obj = {
        "cone": spec_to_cone_list(inst.spec),
        "A": {
            "rows": int(inst.m),
            "cols": int(inst.spec.dim),
            "data": [float(v) for v in a_file.ravel()],
        },
    }
    _dump(path, obj)


def _dump(path, obj):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def certificate_to_json(cert):
    stats = {
        "bp_iterations": int(cert.stats.bp_iterations),
        "rescale_iterations": int(cert.stats.rescale_iterations),
        "eps_ledger": [float(v) for v in (cert.stats.eps_ledger
                                          if cert.stats.eps_ledger is not None else [])],
    }
    if cert.status == "primal":
        payload = {"x": element_to_file(cert.x)}
    elif cert.status == "dual":
        payload = {
            "y": element_to_file(cert.y),
            "u": [float(v) for v in cert.u],
        }
    elif cert.status == "eps_infeasible":
        payload = {
            "block": int(cert.block),
            "eps_k": float(cert.eps_value),
            "threshold": float(cert.threshold),
            "ledger": stats["eps_ledger"],
            "transcript": cert.stats.transcript,
        }
        if cert.note is not None:
            payload["note"] = cert.note
    elif cert.status == "budget_exceeded":
        payload = {} if cert.note is None else {"note": cert.note}
    else:
        raise ValueError(f"cannot serialize certificate status {cert.status!r}")
    return {"type": cert.status, "payload": payload, "stats": stats}


def save_certificate(path, cert):
    _dump(path, certificate_to_json(cert))


def load_certificate(path, spec):
    """Read a certificate file back into internal coordinates."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FileFormatError("$", f"invalid JSON: {exc}") from exc
    _expect(isinstance(obj, dict), "$", "top level must be an object")
    status = obj.get("type")
    payload = obj.get("payload")
    _expect(isinstance(payload, dict), "payload", "must be an object")
    raw_stats = obj.get("stats", {})
    _expect(isinstance(raw_stats, dict), "stats", "must be an object")
    stats = SolveStats(
        bp_iterations=int(raw_stats.get("bp_iterations", 0)),
        rescale_iterations=int(raw_stats.get("rescale_iterations", 0)),
        eps_ledger=np.asarray(raw_stats.get("eps_ledger", []), dtype=float),
    )
    if status == "primal":
        return Certificate(
            "primal", x=element_from_file(spec, payload.get("x"), "payload.x"), stats=stats
        )
    if status == "dual":
        u = payload.get("u")
        _expect(isinstance(u, list), "payload.u", "must be a list")
        return Certificate(
            "dual",
            y=element_from_file(spec, payload.get("y"), "payload.y"),
            u=np.asarray(u, dtype=float),
            stats=stats,
        )
    if status == "eps_infeasible":
        block = payload.get("block")
        _expect(
            isinstance(block, int) and 0 <= block < spec.ell,
            "payload.block",
            "needs a valid block index",
        )
        stats.transcript = payload.get("transcript", [])
        return Certificate(
            "eps_infeasible",
            block=block,
            eps_value=float(payload.get("eps_k")),
            threshold=float(payload.get("threshold")),
            note=payload.get("note"),
            stats=stats,
        )
    if status == "budget_exceeded":
        return Certificate("budget_exceeded", note=payload.get("note"), stats=stats)
    raise FileFormatError("type", f"unknown certificate type {status!r}")
