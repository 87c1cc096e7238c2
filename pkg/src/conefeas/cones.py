"""Cone descriptions and block-structured elements.

A cone is an ordered product of simple blocks: half-lines (``rank1``),
second-order cones (``soc``), and real symmetric PSD cones (``psd``).
Elements are flat float64 vectors in natural per-block coordinates;
PSD blocks use the isometric upper-triangle vectorization (column-major
order, off-diagonal entries carry a factor of sqrt(2)) so that the
coordinate dot product on a PSD block equals the matrix trace inner
product.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

SQRT2 = float(np.sqrt(2.0))


class ConeError(Exception):
    """Base class for errors raised by this package."""


class ShapeMismatchError(ConeError):
    """Operands do not conform to the same cone layout."""


class SingularElementError(ConeError):
    """An element required to be invertible (or interior) is not."""

    def __init__(self, message, block=None, eigenvalue=None):
        super().__init__(message)
        self.block = block
        self.eigenvalue = eigenvalue


class DegenerateInputError(ConeError):
    """An input sits on a degenerate locus the operation cannot handle."""


class NumericalError(ConeError):
    """A numerical routine failed to produce a usable result."""

    def __init__(self, message, block=None):
        super().__init__(message)
        self.block = block


@dataclass(frozen=True)
class BlockSpec:
    """One simple block: ``rank1``, ``soc`` (size = ambient dim >= 2), or
    ``psd`` (size = matrix order >= 1)."""

    kind: str
    size: int = 1

    def __post_init__(self):
        if self.kind == "rank1":
            if self.size != 1:
                raise ValueError("rank1 blocks have size 1")
        elif self.kind == "soc":
            if self.size < 2:
                raise ValueError("soc blocks need dimension >= 2")
        elif self.kind == "psd":
            if self.size < 1:
                raise ValueError("psd blocks need order >= 1")
        else:
            raise ValueError(f"unknown block kind {self.kind!r}")

    @classmethod
    def rank1(cls):
        return cls("rank1", 1)

    @classmethod
    def soc(cls, dim):
        return cls("soc", int(dim))

    @classmethod
    def psd(cls, order):
        return cls("psd", int(order))

    @property
    def rank(self):
        if self.kind == "rank1":
            return 1
        if self.kind == "soc":
            return 2
        return self.size

    @property
    def dim(self):
        if self.kind == "rank1":
            return 1
        if self.kind == "soc":
            return self.size
        return self.size * (self.size + 1) // 2


@dataclass(frozen=True)
class ConeSpec:
    """Ordered product of simple blocks with derived totals."""

    blocks: tuple

    def __init__(self, blocks):
        object.__setattr__(self, "blocks", tuple(blocks))
        if not self.blocks:
            raise ValueError("a cone needs at least one block")
        for b in self.blocks:
            if not isinstance(b, BlockSpec):
                raise TypeError("blocks must be BlockSpec instances")

    @property
    def ell(self):
        """Number of simple blocks."""
        return len(self.blocks)

    @cached_property
    def rank(self):
        return sum(b.rank for b in self.blocks)

    @cached_property
    def dim(self):
        return sum(b.dim for b in self.blocks)

    @cached_property
    def rank_max(self):
        return max(b.rank for b in self.blocks)

    @cached_property
    def offsets(self):
        """Start offset of each block in the flat coordinate vector."""
        out = np.zeros(self.ell + 1, dtype=int)
        for k, b in enumerate(self.blocks):
            out[k + 1] = out[k] + b.dim
        return out

    def slice(self, k):
        return slice(int(self.offsets[k]), int(self.offsets[k + 1]))

    @cached_property
    def weights(self):
        """Diagonal Gram matrix of the trace inner product in natural
        coordinates: 1 on rank1 and (isometric) psd coordinates, 2 on
        every soc coordinate."""
        w = np.ones(self.dim)
        for k, b in enumerate(self.blocks):
            if b.kind == "soc":
                w[self.slice(k)] = 2.0
        return w

    def describe(self):
        return "x".join(
            b.kind if b.kind == "rank1" else f"{b.kind}{b.size}" for b in self.blocks
        )


@dataclass
class Element:
    """Block-structured vector in natural per-block coordinates."""

    spec: ConeSpec
    data: np.ndarray

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=float)
        if self.data.shape != (self.spec.dim,):
            raise ShapeMismatchError(
                f"expected {self.spec.dim} coordinates, got {self.data.shape}"
            )
        if not np.all(np.isfinite(self.data)):
            raise ShapeMismatchError("element coordinates must be finite")

    def block(self, k):
        """View of the k-th block's coordinates."""
        return self.data[self.spec.slice(k)]

    def copy(self):
        return Element(self.spec, self.data.copy())

    def _check_mate(self, other):
        if self.spec != other.spec:
            raise ShapeMismatchError("elements belong to different cones")

    def __add__(self, other):
        self._check_mate(other)
        return Element(self.spec, self.data + other.data)

    def __sub__(self, other):
        self._check_mate(other)
        return Element(self.spec, self.data - other.data)

    def __neg__(self):
        return Element(self.spec, -self.data)

    def __mul__(self, scalar):
        return Element(self.spec, self.data * float(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return Element(self.spec, self.data / float(scalar))


def zeros(spec):
    return Element(spec, np.zeros(spec.dim))


def identity(spec):
    """The identity element e; satisfies <e, e> = total rank."""
    data = np.zeros(spec.dim)
    for k, b in enumerate(spec.blocks):
        data[spec.slice(k)] = identity_block(b)
    return Element(spec, data)


def identity_block(block):
    """Identity coordinates of a single block."""
    if block.kind == "rank1":
        return np.array([1.0])
    if block.kind == "soc":
        e = np.zeros(block.size)
        e[0] = 1.0
        return e
    n = block.size
    e = np.zeros(block.dim)
    # diagonal svec positions are at column starts + column index
    pos = 0
    for j in range(n):
        e[pos + j] = 1.0
        pos += j + 1
    return e
