"""Shared test helpers: cone families and seeded random element draws."""

import numpy as np

import conefeas as cf


def family_specs():
    """One representative cone per family plus a heterogeneous product."""
    return {
        "rank1": cf.ConeSpec([cf.BlockSpec.rank1() for _ in range(5)]),
        "soc": cf.ConeSpec([cf.BlockSpec.soc(4), cf.BlockSpec.soc(3)]),
        "psd": cf.ConeSpec([cf.BlockSpec.psd(3), cf.BlockSpec.psd(2)]),
        "mixed": cf.ConeSpec(
            [
                cf.BlockSpec.rank1(),
                cf.BlockSpec.soc(3),
                cf.BlockSpec.psd(3),
                cf.BlockSpec.rank1(),
            ]
        ),
    }


def single_block_specs(max_psd_order=4):
    """Simple one-block cones, one per kind (several sizes)."""
    out = [cf.ConeSpec([cf.BlockSpec.rank1()])]
    out += [cf.ConeSpec([cf.BlockSpec.soc(n)]) for n in (2, 3, 5)]
    out += [cf.ConeSpec([cf.BlockSpec.psd(n)]) for n in range(1, max_psd_order + 1)]
    return out


def random_element(spec, rng, scale=1.0):
    return cf.Element(spec, scale * rng.standard_normal(spec.dim))


def random_cone_element(spec, rng, scale=1.0):
    """A point of the cone: the square of a random element."""
    x = random_element(spec, rng, scale)
    return cf.jordan_product(x, x)


def random_interior_element(spec, rng, margin=0.1, scale=1.0):
    """A strictly interior point: a square plus margin * identity."""
    return random_cone_element(spec, rng, scale) + margin * cf.identity(spec)


def rel_err(a, b):
    gap = cf.norm2(a - b)
    return gap / max(1.0, cf.norm2(a), cf.norm2(b))
