"""Jordan algebra kernel: examples, axioms, spectral and norm identities."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import conefeas as cf
from conefeas.algebra import smat, svec
from conftest import (
    family_specs,
    random_cone_element,
    random_element,
    random_interior_element,
    rel_err,
    single_block_specs,
)

SOC3 = cf.ConeSpec([cf.BlockSpec.soc(3)])
SOC2 = cf.ConeSpec([cf.BlockSpec.soc(2)])
PSD2 = cf.ConeSpec([cf.BlockSpec.psd(2)])
R2 = cf.ConeSpec([cf.BlockSpec.rank1(), cf.BlockSpec.rank1()])


def psd2_element(mat):
    return cf.Element(PSD2, svec(np.asarray(mat, dtype=float)))


# ---------------------------------------------------------------------------
# products and inner products
# ---------------------------------------------------------------------------


def test_jordan_product_identity_soc3():
    e = cf.identity(SOC3)
    assert cf.norm2(cf.jordan_product(e, e) - e) == 0.0


def test_jordan_product_soc2_example():
    x = cf.Element(SOC2, [2.0, 1.0])
    y = cf.Element(SOC2, [3.0, 2.0])
    out = cf.jordan_product(x, y)
    np.testing.assert_allclose(out.data, [8.0, 7.0])


def test_jordan_product_psd2_example():
    x = psd2_element([[0.0, 1.0], [1.0, 0.0]])
    y = psd2_element([[1.0, 0.0], [0.0, -1.0]])
    out = cf.jordan_product(x, y)
    np.testing.assert_allclose(out.data, 0.0, atol=1e-15)


def test_jordan_product_shape_mismatch():
    with pytest.raises(cf.ShapeMismatchError):
        cf.jordan_product(cf.identity(SOC3), cf.identity(SOC2))


def test_inner_identity_gives_rank():
    for spec in family_specs().values():
        e = cf.identity(spec)
        assert cf.inner(e, e) == pytest.approx(spec.rank)


def test_inner_soc_doubles_coordinate_dot():
    x = cf.Element(SOC2, [1.0, 0.0])
    assert cf.inner(x, x) == pytest.approx(2.0)


def test_inner_rank1_is_euclidean():
    x = cf.Element(R2, [1.0, 2.0])
    y = cf.Element(R2, [3.0, 4.0])
    assert cf.inner(x, y) == pytest.approx(11.0)


def test_jordan_axioms_on_random_elements():
    rng = np.random.default_rng(7)
    for spec in family_specs().values():
        for _ in range(200):
            x = random_element(spec, rng)
            y = random_element(spec, rng)
            z = random_element(spec, rng)
            assert rel_err(cf.jordan_product(x, y), cf.jordan_product(y, x)) <= 1e-10
            x2 = cf.jordan_product(x, x)
            lhs = cf.jordan_product(x, cf.jordan_product(x2, y))
            rhs = cf.jordan_product(x2, cf.jordan_product(x, y))
            assert rel_err(lhs, rhs) <= 1e-10
            a = cf.inner(cf.jordan_product(x, y), z)
            b = cf.inner(x, cf.jordan_product(y, z))
            assert abs(a - b) <= 1e-10 * max(1.0, abs(a), abs(b))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-10, 10), min_size=6, max_size=6))
def test_soc_axiom_hypothesis(coords):
    spec = SOC3
    x = cf.Element(spec, coords[:3])
    y = cf.Element(spec, coords[3:])
    x2 = cf.jordan_product(x, x)
    lhs = cf.jordan_product(x, cf.jordan_product(x2, y))
    rhs = cf.jordan_product(x2, cf.jordan_product(x, y))
    assert rel_err(lhs, rhs) <= 1e-9


# ---------------------------------------------------------------------------
# spectral decompositions
# ---------------------------------------------------------------------------


def test_spectral_soc3_closed_form():
    x = cf.Element(SOC3, [2.0, 1.0, 0.0])
    sd = cf.spectral_decomposition(x)
    frame = sd.frames[0]
    np.testing.assert_allclose(frame.eigenvalues, [3.0, 1.0])
    np.testing.assert_allclose(frame.idempotents[0], [0.5, 0.5, 0.0])
    np.testing.assert_allclose(frame.idempotents[1], [0.5, -0.5, 0.0])


def test_spectral_identity_eigenvalues_are_one():
    for spec in family_specs().values():
        sd = cf.spectral_decomposition(cf.identity(spec))
        for frame in sd.frames:
            np.testing.assert_allclose(frame.eigenvalues, 1.0)


def test_spectral_psd2_example():
    x = psd2_element([[0.0, 1.0], [1.0, 0.0]])
    sd = cf.spectral_decomposition(x)
    np.testing.assert_allclose(sd.frames[0].eigenvalues, [1.0, -1.0], atol=1e-14)


def test_soc_degenerate_frame_is_deterministic():
    x = cf.Element(SOC3, [2.0, 0.0, 0.0])
    sd = cf.spectral_decomposition(x)
    np.testing.assert_allclose(sd.frames[0].idempotents[0], [0.5, 0.5, 0.0])


def test_spectral_invariants_random():
    rng = np.random.default_rng(11)
    for spec in family_specs().values():
        e = cf.identity(spec)
        for _ in range(100):
            x = random_element(spec, rng)
            sd = cf.spectral_decomposition(x)
            assert rel_err(sd.reconstruct(), x) <= 1e-10
            for k, frame in enumerate(sd.frames):
                block = spec.blocks[k]
                idem = frame.idempotents
                for i in range(block.rank):
                    ci = cf.zeros(spec)
                    ci.data[spec.slice(k)] = idem[i]
                    assert abs(cf.inner(ci, ci) - 1.0) <= 1e-10
                    assert rel_err(cf.jordan_product(ci, ci), ci) <= 1e-10
                    for j in range(i + 1, block.rank):
                        cj = cf.zeros(spec)
                        cj.data[spec.slice(k)] = idem[j]
                        prod = cf.jordan_product(ci, cj)
                        assert cf.norm2(prod) <= 1e-10
                np.testing.assert_allclose(
                    idem.sum(axis=0),
                    cf.identity(spec).block(k),
                    atol=1e-12,
                )
            assert all(
                np.all(np.diff(f.eigenvalues) <= 1e-12) for f in sd.frames
            ), "eigenvalues must come out descending"
            del e


# ---------------------------------------------------------------------------
# lambda_min
# ---------------------------------------------------------------------------


def test_lambda_min_identity_uses_first_frame_member():
    spec = cf.ConeSpec([cf.BlockSpec.soc(3), cf.BlockSpec.rank1()])
    val, c = cf.lambda_min(cf.identity(spec))
    assert val == pytest.approx(1.0)
    np.testing.assert_allclose(c.data, [0.5, 0.5, 0.0, 0.0])


def test_lambda_min_cross_block_example():
    spec = cf.ConeSpec([cf.BlockSpec.soc(3), cf.BlockSpec.rank1()])
    x = cf.Element(spec, [2.0, 1.0, 0.0, 0.5])
    val, c = cf.lambda_min(x)
    assert val == pytest.approx(0.5)
    np.testing.assert_allclose(c.data, [0.0, 0.0, 0.0, 1.0])


def test_lambda_min_psd2_eigenvector():
    x = psd2_element([[0.0, 1.0], [1.0, 0.0]])
    val, c = cf.lambda_min(x)
    assert val == pytest.approx(-1.0)
    v = np.array([1.0, -1.0]) / np.sqrt(2.0)
    np.testing.assert_allclose(smat(c.data, 2), np.outer(v, v), atol=1e-14)


def test_lambda_min_contract_random():
    rng = np.random.default_rng(13)
    for spec in family_specs().values():
        e = cf.identity(spec)
        for _ in range(100):
            x = random_element(spec, rng)
            val, c = cf.lambda_min(x)
            assert cf.inner(e, c) == pytest.approx(1.0, abs=1e-10)
            assert cf.inner(x, c) == pytest.approx(val, abs=1e-9)
            assert rel_err(cf.jordan_product(c, c), c) <= 1e-9
            lams = np.concatenate([v for v in map(np.asarray, _eigs(x))])
            assert val == pytest.approx(lams.min(), abs=1e-10)


def _eigs(x):
    from conefeas.algebra import block_eigenvalues

    return block_eigenvalues(x)


# ---------------------------------------------------------------------------
# det / trace / inverse / roots
# ---------------------------------------------------------------------------


def test_det_and_inverse_of_identity():
    for spec in family_specs().values():
        e = cf.identity(spec)
        assert cf.det(e) == pytest.approx(1.0)
        assert cf.norm2(cf.inverse(e) - e) <= 1e-14


def test_det_soc_closed_form():
    x = cf.Element(SOC3, [2.0, 1.0, 0.0])
    assert cf.det(x) == pytest.approx(3.0)


def test_inv_sqrt_soc_spectral_recombination():
    x = cf.Element(SOC3, [2.0, 1.0, 0.0])
    out = cf.inv_sqrt(x)
    expected = (1.0 / np.sqrt(3.0)) * np.array([0.5, 0.5, 0.0]) + 1.0 * np.array(
        [0.5, -0.5, 0.0]
    )
    np.testing.assert_allclose(out.data, expected)


def test_inverse_and_roots_random():
    rng = np.random.default_rng(17)
    for spec in family_specs().values():
        e = cf.identity(spec)
        for _ in range(60):
            x = random_interior_element(spec, rng)
            assert rel_err(cf.jordan_product(x, cf.inverse(x)), e) <= 1e-9
            r = cf.sqrt(x)
            assert rel_err(cf.jordan_product(r, r), x) <= 1e-9
            s = cf.inv_sqrt(x)
            assert rel_err(cf.jordan_product(s, s), cf.inverse(x)) <= 1e-9


def test_inverse_reports_singular_block():
    spec = cf.ConeSpec([cf.BlockSpec.rank1(), cf.BlockSpec.soc(3)])
    x = cf.Element(spec, [1.0, 1.0, 1.0, 0.0])  # soc block on the boundary
    with pytest.raises(cf.SingularElementError) as err:
        cf.inverse(x)
    assert err.value.block == 1


def test_sqrt_rejects_points_outside_the_cone():
    x = cf.Element(R2, [1.0, -0.5])
    with pytest.raises(cf.SingularElementError):
        cf.sqrt(x)


# ---------------------------------------------------------------------------
# norms
# ---------------------------------------------------------------------------


def test_norm_examples():
    for spec in family_specs().values():
        assert cf.norm(cf.identity(spec), "one_inf") == pytest.approx(spec.rank_max)
    x = cf.Element(SOC3, [2.0, 1.0, 0.0])
    assert cf.norm(x, "one") == pytest.approx(4.0)
    r5 = cf.ConeSpec([cf.BlockSpec.rank1() for _ in range(5)])
    y = cf.Element(r5, [1.0, -2.0, 3.0, 0.0, 1.0])
    assert cf.norm(y, "one_inf") == pytest.approx(3.0)
    assert cf.norm(y, "inf_one") == pytest.approx(7.0)


def test_cone_one_inf_matches_norm_on_cone_points():
    rng = np.random.default_rng(19)
    for spec in family_specs().values():
        for _ in range(50):
            x = random_cone_element(spec, rng)
            assert cf.cone_one_inf(x) == pytest.approx(
                cf.norm(x, "one_inf"), abs=1e-9, rel=1e-9
            )


def test_dual_norm_inequalities_random():
    rng = np.random.default_rng(23)
    for spec in family_specs().values():
        for _ in range(200):
            x = random_element(spec, rng)
            y = random_element(spec, rng)
            ip = cf.inner(x, y)
            assert ip <= cf.norm(y, "one") * cf.norm(x, "inf") + 1e-9
            assert ip <= cf.norm(y, "one_inf") * cf.norm(x, "inf_one") + 1e-9
            assert cf.norm(y, "inf_one") <= np.sqrt(spec.ell) * cf.norm2(y) + 1e-9


def test_dual_norm_attainment_witness():
    rng = np.random.default_rng(29)
    for spec in family_specs().values():
        for _ in range(50):
            y = random_element(spec, rng)
            target = cf.norm(y, "inf_one")
            sd = cf.spectral_decomposition(y)
            z = cf.zeros(spec)
            for k, frame in enumerate(sd.frames):
                hi, lo = frame.eigenvalues[0], frame.eigenvalues[-1]
                if hi >= -lo:
                    z.data[spec.slice(k)] = frame.idempotents[0]
                else:
                    z.data[spec.slice(k)] = -frame.idempotents[-1]
            assert cf.norm(z, "one_inf") == pytest.approx(1.0, abs=1e-10)
            assert cf.inner(y, z) == pytest.approx(target, rel=1e-9, abs=1e-9)
            for _ in range(5):
                zr = random_element(spec, rng)
                zr = zr / cf.norm(zr, "one_inf")
                assert cf.inner(y, zr) <= target + 1e-8


# ---------------------------------------------------------------------------
# quadratic representation
# ---------------------------------------------------------------------------


def test_quad_apply_examples():
    for spec in family_specs().values():
        rng = np.random.default_rng(1)
        x = random_element(spec, rng)
        assert rel_err(cf.quad_apply(cf.identity(spec), x), x) <= 1e-12
    one = cf.ConeSpec([cf.BlockSpec.rank1()])
    assert cf.quad_apply(cf.Element(one, [3.0]), cf.Element(one, [2.0])).data[
        0
    ] == pytest.approx(18.0)
    w = psd2_element([[2.0, 0.0], [0.0, 1.0]])
    x = psd2_element([[1.0, 1.0], [1.0, 1.0]])
    np.testing.assert_allclose(
        smat(cf.quad_apply(w, x).data, 2), [[4.0, 2.0], [2.0, 1.0]], atol=1e-14
    )


def test_quad_apply_matches_jordan_formula():
    rng = np.random.default_rng(31)
    for spec in family_specs().values():
        for _ in range(100):
            w = random_element(spec, rng)
            x = random_element(spec, rng)
            direct = cf.quad_apply(w, x)
            w2 = cf.jordan_product(w, w)
            generic = 2.0 * cf.jordan_product(w, cf.jordan_product(w, x)) - cf.jordan_product(w2, x)
            assert rel_err(direct, generic) <= 1e-10


def test_quad_identities_random():
    rng = np.random.default_rng(37)
    for spec in family_specs().values():
        e = cf.identity(spec)
        for _ in range(60):
            w = random_interior_element(spec, rng)
            assert rel_err(cf.quad_apply(w, e), cf.jordan_product(w, w)) <= 1e-9
            assert rel_err(cf.quad_apply(w, cf.inverse(w)), w) <= 1e-9
            x = random_interior_element(spec, rng)
            assert cf.is_interior(cf.quad_apply(w, x), 1e-12)


def test_quad_matrix_examples():
    for block in [cf.BlockSpec.rank1(), cf.BlockSpec.soc(4), cf.BlockSpec.psd(3)]:
        spec = cf.ConeSpec([block])
        e = cf.identity(spec)
        np.testing.assert_allclose(
            cf.quad_matrix(e.data, 1.0, block), np.eye(block.dim), atol=1e-12
        )
    r1 = cf.BlockSpec.rank1()
    np.testing.assert_allclose(cf.quad_matrix(np.array([4.0]), 1.0, r1), [[0.25]])


def test_quad_matrix_matches_quad_apply():
    rng = np.random.default_rng(41)
    for block in [cf.BlockSpec.rank1(), cf.BlockSpec.soc(2), cf.BlockSpec.soc(5), cf.BlockSpec.psd(3)]:
        spec = cf.ConeSpec([block])
        for _ in range(25):
            w = random_interior_element(spec, rng)
            scale = float(rng.uniform(0.5, 2.0))
            mat = cf.quad_matrix(w.data, scale, block)
            u = scale * cf.inv_sqrt(w)
            for p in range(block.dim):
                basis = cf.zeros(spec)
                basis.data[p] = 1.0
                np.testing.assert_allclose(
                    mat[:, p], cf.quad_apply(u, basis).data, atol=1e-9
                )


def test_quad_matrix_scaling_and_determinant():
    rng = np.random.default_rng(43)
    blocks = [cf.BlockSpec.rank1()] + [cf.BlockSpec.soc(n) for n in (2, 4, 6)] + [
        cf.BlockSpec.psd(n) for n in (2, 3, 4, 5, 6)
    ]
    for block in blocks:
        spec = cf.ConeSpec([block])
        for _ in range(10):
            w = random_interior_element(spec, rng)
            base = cf.quad_matrix(w.data, 1.0, block)
            a = float(rng.uniform(0.5, 3.0))
            np.testing.assert_allclose(
                cf.quad_matrix(w.data, a, block), a * a * base, rtol=1e-10, atol=1e-12
            )
            detq = np.linalg.det(base)
            expected = cf.det(w) ** (-block.dim / block.rank)
            assert detq == pytest.approx(expected, rel=1e-8)


def test_quad_matrix_rejects_boundary_points():
    block = cf.BlockSpec.soc(3)
    with pytest.raises(cf.SingularElementError):
        cf.quad_matrix(np.array([1.0, 1.0, 0.0]), 1.0, block)


# ---------------------------------------------------------------------------
# interiority
# ---------------------------------------------------------------------------


def test_is_interior_examples():
    for spec in family_specs().values():
        assert cf.is_interior(cf.identity(spec), 0.5)
    assert not cf.is_interior(cf.Element(SOC3, [1.0, 1.0, 0.0]), 1e-10)
    assert not cf.is_interior(cf.Element(R2, [1.0, -1e-16]), 1e-10)
