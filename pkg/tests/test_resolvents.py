"""Resolvent formulas, parameter recovery, cross-formula identities."""

import numpy as np
import pytest

import gresolv as g
import gresolv.numkernel as nk
from gresolv.fixtures import flip_dilation_isometric, flip_dilation_symmetric
from gresolv.resolvents import (DEFAULT_DISK_SAMPLES, defect_block_family,
                                membership_quantity, recover_anchored_parameter,
                                recovered_parameter_family)
from tests.conftest import random_isometric_model, random_symmetric_model


def null_param(v, fn=None, constant=None, anchor=None):
    src = g.defect_subspaces(v, 0.0).n_space
    dst = g.defect_subspaces(v, g.INFINITY).n_space
    if constant is not None:
        return g.ContractionParam.constant(src, dst, constant, anchor)
    return g.ContractionParam.callback(src, dst, fn, anchor)


def sym_param(a, anchor, fn=None, constant=None):
    src = g.defect_subspaces(a, anchor).n_space
    dst = g.defect_subspaces(a, np.conj(anchor)).n_space
    if constant is not None:
        return g.ContractionParam.constant(src, dst, constant, anchor)
    return g.ContractionParam.callback(src, dst, fn, anchor)


def identity_model(v):
    return g.ResolventModel(v.ambient_dim, "isometric", "dilation", v,
                            lambda p, b=False: np.eye(v.ambient_dim, dtype=complex))


# ------------------------------------------------------- direct-sum formula

def test_direct_sum_zero_parameter():
    v = g.IsometryOp.null(1)
    param = null_param(v, constant=np.zeros((1, 1)))
    for zeta in (0.2, -0.5j, 0.7 + 0.1j):
        np.testing.assert_allclose(g.direct_sum_resolvent(v, param, zeta), [[1.0]], atol=1e-14)


def test_direct_sum_affine_vs_dilation_oracle():
    # dual route: the affine family zeta -> [zeta] against the flip dilation
    v, model = flip_dilation_isometric()
    param = null_param(v, fn=lambda z: np.array([[z]]))
    oracle = g.ResolventModel.from_dilation(model)
    for zeta in (0.25, 0.6j, -0.8, 1.0 / 0.3, 2.0 - 1.5j):
        lhs = g.direct_sum_resolvent(v, param, zeta)
        np.testing.assert_allclose(lhs, oracle(zeta), atol=1e-12)
        np.testing.assert_allclose(lhs, [[1.0 / (1.0 - zeta**2)]], atol=1e-12)


def test_direct_sum_unitary_is_fredholm(rng):
    v = g.IsometryOp.random(3, 3, rng)
    param = null_param(v, constant=np.zeros((0, 0)))
    full = v.full_matrix()
    for zeta in (0.4, 2.5j):
        expected = nk.inv(np.eye(3) - zeta * full)
        np.testing.assert_allclose(g.direct_sum_resolvent(v, param, zeta), expected, atol=1e-12)


def test_direct_sum_rejects_boundary_by_default():
    v, _ = flip_dilation_isometric()
    param = null_param(v, constant=np.zeros((1, 1)))
    with pytest.raises(g.PointExcluded):
        g.direct_sum_resolvent(v, param, np.exp(0.3j))
    value = g.direct_sum_resolvent(v, param, np.exp(0.3j), boundary_ok=True)
    np.testing.assert_allclose(value, [[1.0]], atol=1e-12)


# --------------------------------------------------------- anchored formula

def test_anchored_coincides_with_direct_sum_at_zero_anchor(rng):
    # 200 random (V, constant C, zeta) triples
    worst = 0.0
    for _ in range(20):
        n = int(rng.integers(1, 7))
        d = int(rng.integers(0, n))
        v = g.IsometryOp.random(n, d, rng)
        k = n - d
        c = nk.haar_unitary(k, rng) * rng.random()
        param = null_param(v, constant=c)
        for _ in range(10):
            zeta = complex(rng.uniform(-0.9, 0.9), rng.uniform(-0.9, 0.9))
            if abs(zeta) >= 0.95:
                continue
            diff = nk.op_norm(g.anchored_resolvent(v, param, 0.0, zeta)
                              - g.direct_sum_resolvent(v, param, zeta))
            worst = max(worst, diff)
    assert worst < 1e-12


def test_anchored_scalar_formula():
    v = g.IsometryOp.null(1)
    z0, c = 0.4, 0.25 - 0.3j
    src = g.defect_subspaces(v, z0).n_space
    dst = g.defect_subspaces(v, 1.0 / np.conj(z0)).n_space
    param = g.ContractionParam.constant(src, dst, np.array([[c]]))
    for zeta in (0.3, -0.2 + 0.6j):
        expected = 1.0 / (1.0 - zeta * (c + np.conj(z0)) / (1.0 + z0 * c))
        np.testing.assert_allclose(g.anchored_resolvent(v, param, z0, zeta),
                                   [[expected]], atol=1e-12)


def test_anchored_at_origin_is_identity(rng):
    v = g.IsometryOp.random(3, 1, rng)
    src = g.defect_subspaces(v, 0.2j).n_space
    dst = g.defect_subspaces(v, 1.0 / np.conj(0.2j)).n_space
    param = g.ContractionParam.constant(src, dst, 0.5 * nk.haar_unitary(2, rng))
    np.testing.assert_allclose(g.anchored_resolvent(v, param, 0.2j, 0.0), np.eye(3), atol=1e-14)


# ---------------------------------------------------------------- dilation

def test_dilation_unitary_scalar():
    v = g.IsometryOp.null(1)
    u = np.array([[0, 1j], [1j, 0]], dtype=complex)
    model = g.ExitSpaceModel(1, 1, "unitary", u, v)
    zeta = 1.0 / 3.0
    np.testing.assert_allclose(g.dilation_resolvent(model, zeta),
                               [[1.0 / (1.0 + zeta**2)]], atol=1e-14)


def test_dilation_hermitian_scalar():
    _, model, _, _ = flip_dilation_symmetric()
    np.testing.assert_allclose(g.dilation_resolvent(model, 2j), [[2j / 5]], atol=1e-14)


def test_dilation_no_exit_is_plain_resolvent(rng):
    v = g.IsometryOp.random(3, 3, rng)
    model = g.ExitSpaceModel(3, 0, "unitary", v.full_matrix(), v)
    zeta = 0.3 - 0.2j
    expected = nk.inv(np.eye(3) - zeta * v.full_matrix())
    np.testing.assert_allclose(g.dilation_resolvent(model, zeta), expected, atol=1e-12)


def test_dilation_raises_on_spectrum():
    v, model = flip_dilation_isometric()
    with pytest.raises(g.SingularSystem):
        g.dilation_resolvent(model, 1.0)


# ---------------------------------------------------------------- recovery

def test_recover_parameter_fixture():
    _, model = flip_dilation_isometric()
    r = g.ResolventModel.from_dilation(model)
    for zeta in (0.2, 0.5j, -0.7 + 0.1j):
        np.testing.assert_allclose(g.recover_parameter(r, zeta), [[zeta]], atol=1e-12)


def test_recover_parameter_identity_resolvent():
    v = g.IsometryOp.null(2)
    r = identity_model(v)
    np.testing.assert_allclose(g.recover_parameter(r, 0.4), np.zeros((2, 2)), atol=1e-12)


def test_recover_roundtrip_random(rng):
    # oracle equivalence on a small scale; the acceptance suite runs the full one
    for _ in range(10):
        v, model = random_isometric_model(rng, n_max=6, m_max=6)
        r = g.ResolventModel.from_dilation(model)
        fam = recovered_parameter_family(r)
        for zeta in (0.3 + 0.1j, -0.6j, 1.9, 3.0 + 1.0j):
            np.testing.assert_allclose(g.direct_sum_resolvent(v, fam, zeta), r(zeta), atol=1e-9)


def test_recovered_family_limit_at_zero():
    _, model = flip_dilation_isometric()
    fam = recovered_parameter_family(g.ResolventModel.from_dilation(model))
    np.testing.assert_allclose(fam(0.0), [[0.0]], atol=1e-9)


# ---------------------------------------------------------------- axioms

def test_axioms_pass_for_direct_sum_family(rng):
    v = g.IsometryOp.random(4, 2, rng)
    param = null_param(v, constant=0.7 * nk.haar_unitary(2, rng))
    r = g.ResolventModel.from_direct_sum(v, param)
    report = g.verify_resolvent_axioms(r, v)
    assert report.all_passed


def test_axioms_fail_for_identity_resolvent(rng):
    v = g.IsometryOp.random(3, 2, rng)
    report = g.verify_resolvent_axioms(identity_model(v), v)
    assert not report.check("domain-identity").passed


def test_axioms_fail_for_halved_resolvent():
    v, model = flip_dilation_isometric()
    base = g.ResolventModel.from_dilation(model)
    halved = g.ResolventModel(1, "isometric", "dilation", v,
                              lambda p, b=False: 0.5 * base(p, b))
    report = g.verify_resolvent_axioms(halved, v)
    assert not report.check("normalization-at-zero").passed


# ---------------------------------------------------------------- transfer

def test_cayley_transfer_fixture_numbers():
    _, model, anchor, _ = flip_dilation_symmetric()
    r_s = g.ResolventModel.from_dilation(model)
    value = g.cayley_transfer(r_s, anchor, "sym->iso", 1.0 / 3.0)
    np.testing.assert_allclose(value, [[0.9]], atol=1e-12)


def test_cayley_transfer_roundtrip(rng):
    a, model, _ = random_symmetric_model(rng, n_max=5, m_max=4)
    r_s = g.ResolventModel.from_dilation(model)
    z = 1j
    points = [complex(re, im) for re in (-2.0, -0.7, 0.3, 1.1, 2.4)
              for im in (0.01, 0.5, 2.0, -1.5)]
    assert len(points) == 20
    for lam in points:
        zeta = (lam - z) / (lam - np.conj(z))
        via = g.cayley_transfer(r_s, z, "sym->iso", zeta)
        wrapped = g.ResolventModel(a.ambient_dim, "isometric", "dilation", a,
                                   lambda p, b=False, v=via: v)
        back = g.cayley_transfer(wrapped, z, "iso->sym", lam)
        np.testing.assert_allclose(back, r_s(lam), atol=1e-10)


def test_cayley_transfer_self_adjoint_matches_fredholm(rng):
    h = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    h = (h + h.conj().T) / 2.0
    a = g.SymmetricOp(3, g.Subspace.full(3), h)
    model = g.ExitSpaceModel(3, 0, "hermitian", h, a)
    r_s = g.ResolventModel.from_dilation(model)
    z = 1j
    u = g.cayley_transform(a, z, "forward").full_matrix()
    for zeta in (0.4, -0.3 + 0.2j):
        transferred = g.cayley_transfer(r_s, z, "sym->iso", zeta)
        np.testing.assert_allclose(transferred, nk.inv(np.eye(3) - zeta * u), atol=1e-10)


def test_cayley_transfer_excluded_points():
    _, model, anchor, _ = flip_dilation_symmetric()
    r_s = g.ResolventModel.from_dilation(model)
    with pytest.raises(g.PointExcluded):
        g.cayley_transfer(r_s, anchor, "sym->iso", 0.0)
    with pytest.raises(g.PointExcluded):
        g.cayley_transfer(r_s, anchor, "iso->sym", anchor)


# ------------------------------------------------- extension-family formula

def test_extension_resolvent_constant_parameter():
    a = g.SymmetricOp.null(1)
    param = sym_param(a, 1j, constant=np.array([[-1.0]]))
    np.testing.assert_allclose(g.extension_resolvent(a, param, 1j, 2j), [[0.5j]], atol=1e-13)


def test_extension_resolvent_matches_dilation_fixture():
    a, model, anchor, _ = flip_dilation_symmetric()
    param = sym_param(a, anchor, fn=lambda lam: np.array([[-(lam - 1j) / (lam + 1j)]]))
    oracle = g.ResolventModel.from_dilation(model)
    for lam in (2j, 0.7 + 0.9j, -3 + 0.2j):
        np.testing.assert_allclose(g.extension_resolvent(a, param, anchor, lam),
                                   oracle(lam), atol=1e-12)
    # conjugate half-plane goes through the adjoint family
    for lam in (-2j, 1 - 1j):
        np.testing.assert_allclose(g.extension_resolvent(a, param, anchor, lam),
                                   oracle(lam), atol=1e-12)


def test_extension_resolvent_rejects_forbidden_parameter():
    a = g.SymmetricOp.null(1)
    param = sym_param(a, 1j, constant=np.array([[1.0]]))
    with pytest.raises(g.NotAdmissible):
        g.extension_resolvent(a, param, 1j, 2j)


# ---------------------------------------------------------------- generating_extension / defect_block

def test_generating_extension_fixture():
    _, model, _, _ = flip_dilation_symmetric()
    r = g.ResolventModel.from_dilation(model)
    for lam in (2j, 1 + 1j, -0.5 - 2j):
        np.testing.assert_allclose(g.generating_extension(r, lam).full_matrix(), [[1.0 / lam]], atol=1e-12)


def test_generating_extension_adjoint_pairing(rng):
    a, model, _ = random_symmetric_model(rng, n_max=5, m_max=4)
    r = g.ResolventModel.from_dilation(model)
    for lam in (2j, 0.5 + 1.5j, -1 - 1j):
        lhs = g.generating_extension(r, lam).full_matrix().conj().T
        rhs = g.generating_extension(r, np.conj(lam)).full_matrix()
        assert nk.op_norm(lhs - rhs) < 1e-10 * max(1.0, nk.op_norm(rhs))


def test_generating_extension_sign_classification(rng):
    a, model, _ = random_symmetric_model(rng, n_max=5, m_max=4)
    r = g.ResolventModel.from_dilation(model)
    assert g.classify_signs(g.generating_extension(r, -1 - 2j)) in ("dissipative", "symmetric")
    assert g.classify_signs(g.generating_extension(r, 1 + 2j)) in ("accumulative", "symmetric")


def test_generating_extension_self_adjoint_is_constant(rng):
    h = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    h = (h + h.conj().T) / 2.0
    a = g.SymmetricOp(2, g.Subspace.full(2), h)
    model = g.ExitSpaceModel(2, 0, "hermitian", h, a)
    r = g.ResolventModel.from_dilation(model)
    for lam in (1j, 2 - 3j):
        np.testing.assert_allclose(g.generating_extension(r, lam).full_matrix(), h, atol=1e-10)


def test_defect_block_fixture_closed_form():
    a, model, anchor, _ = flip_dilation_symmetric()
    r = g.ResolventModel.from_dilation(model)
    np.testing.assert_allclose(g.defect_block(r, a, anchor, 2j), [[-1.0 / 3.0]], atol=1e-12)
    for lam in (0.5j, 1 + 2j, -2 + 0.7j):
        expected = -(lam - 1j) / (lam + 1j)
        np.testing.assert_allclose(g.defect_block(r, a, anchor, lam), [[expected]], atol=1e-12)


def test_defect_block_contraction_and_reassembly(rng):
    a, model, _ = random_symmetric_model(rng, n_max=5, m_max=4)
    r = g.ResolventModel.from_dilation(model)
    for lam in (2j, 0.3 + 0.8j):
        coords = g.defect_block(r, a, 1j, lam, validate=True)
        assert nk.op_norm(coords) <= 1.0 + 1e-10


def test_defect_block_self_adjoint_inner(rng):
    # a self-adjoint inner operator has a constant defect block: the unitary
    # transform restricted to the (trivial) defect space
    h = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    h = (h + h.conj().T) / 2.0
    a = g.SymmetricOp(2, g.Subspace.full(2), h)
    model = g.ExitSpaceModel(2, 0, "hermitian", h, a)
    r = g.ResolventModel.from_dilation(model)
    coords = g.defect_block(r, a, 1j, 2j)
    assert coords.shape == (0, 0)


# ---------------------------------------------------------------- characteristic function

def test_characteristic_of_null_operator():
    for m in (1, 3):
        a = g.SymmetricOp.null(m)
        value = g.characteristic_function(a, 1j, 2j)
        np.testing.assert_allclose(value, np.eye(m) / 3.0, atol=1e-12)


def test_characteristic_vanishes_at_anchor(rng):
    a = g.SymmetricOp.random(4, 2, rng)
    value = g.characteristic_function(a, 1j, 1j)
    assert nk.op_norm(value) < 1e-12


def test_characteristic_bound_saturated_for_null():
    a = g.SymmetricOp.null(2)
    for lam, anchor in ((2j, 1j), (0.5 + 0.25j, 1j), (-1 - 1j, -2j)):
        if lam.imag * anchor.imag < 0:
            continue
        value = g.characteristic_function(a, anchor, lam)
        bound = abs((lam - anchor) / (lam - np.conj(anchor)))
        assert abs(nk.op_norm(value) - bound) < 1e-12


def test_characteristic_norm_bound_random(rng):
    for _ in range(10):
        n = int(rng.integers(2, 7))
        d = int(rng.integers(0, n))
        a = g.SymmetricOp.random(n, d, rng)
        lam, anchor = complex(rng.standard_normal(), 0.5 + rng.random()), 1j
        value = g.characteristic_function(a, anchor, lam)
        bound = abs((lam - anchor) / (lam - np.conj(anchor)))
        assert nk.op_norm(value) <= bound + 1e-10


def test_defect_block_via_char_fixture():
    a, model, anchor, block = flip_dilation_symmetric()
    value = g.defect_block_via_characteristic(block, g.SymmetricOp.null(1), anchor, 2j)
    np.testing.assert_allclose(value, [[-1.0 / 3.0]], atol=1e-12)


def test_defect_block_via_char_collapses_without_coupling(rng):
    a = g.SymmetricOp.random(3, 1, rng)
    k = g.defect_subspaces(a, 1j).n_space.dim
    m = 2
    t11 = 0.8 * nk.haar_unitary(k, rng)
    for t12, t21 in ((np.zeros((k, m)), 0.1 * np.ones((m, k))),
                     (0.1 * np.ones((k, m)), np.zeros((m, k)))):
        block = g.BlockParam(t11, t12, t21, 0.3 * np.eye(m))
        value = g.defect_block_via_characteristic(block, g.SymmetricOp.null(m), 1j, 2j)
        np.testing.assert_allclose(value, t11, atol=1e-12)


def test_defect_block_via_char_matches_dilation_with_general_exit(rng):
    # the exit operator is itself a nontrivial symmetric operator here
    for _ in range(5):
        m = int(rng.integers(2, 5))
        d_e = int(rng.integers(0, m))
        exit_op = g.SymmetricOp.random(m, d_e, rng)
        a, model, block = random_symmetric_model(rng, n_max=4, m_max=4, exit_op=exit_op)
        r = g.ResolventModel.from_dilation(model)
        for lam in (2j, 0.5 + 1.2j):
            via_char = g.defect_block_via_characteristic(block, model.exit_op, model.anchor, lam)
            via_dilation = g.defect_block(r, a, model.anchor, lam, validate=False)
            assert nk.op_norm(via_char - via_dilation) < 1e-9


# ---------------------------------------------------------------- boundary limits

def test_boundary_parameter_fixture():
    a, model, anchor, _ = flip_dilation_symmetric()
    ray = g.RaySpec.imaginary(anchor)
    report = g.boundary_parameter(a, model, anchor, ray)
    dst = g.defect_subspaces(a, np.conj(anchor)).n_space
    np.testing.assert_allclose(dst.basis.conj().T @ report.direct.matrix, [[-1.0]], atol=1e-12)
    expected = np.array([2.0 / (1.0 + 10.0**k) for k in range(1, 7)])
    np.testing.assert_allclose(report.limit_errors.ravel(), expected, rtol=1e-4)
    assert report.membership.max() < 3.0


def test_boundary_parameter_no_exit_error_vanishes(rng):
    h = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    h = (h + h.conj().T) / 2.0
    a = g.SymmetricOp(2, g.Subspace.full(2), h)
    model = g.ExitSpaceModel(2, 0, "hermitian", h, a)
    report = g.boundary_parameter(a, model, 1j, g.RaySpec.imaginary(1j))
    assert report.limit_errors.size == 0 or report.limit_errors.max() < 1e-12


def test_membership_quantity_grows_for_strict_contraction():
    # a family that stays strictly contractive toward infinity has an empty
    # boundary-parameter domain; the membership quantity grows linearly
    a = g.SymmetricOp.null(1)
    param = sym_param(a, 1j, constant=np.array([[0.5]]))
    r = g.ResolventModel.from_extension_family(a, param, 1j)
    quantities = []
    for k in (2, 6):
        lam = 1j * 10.0**k
        values = g.defect_block(r, a, 1j, lam, validate=False)
        quantities.append(membership_quantity(values, lam)[0])
    assert quantities[1] >= 10.0 * quantities[0]
    assert quantities[1] > 1e5


# ---------------------------------------------------------------- admissible class

def test_admissible_class_forbidden_constant():
    a = g.SymmetricOp.null(1)
    ray = g.RaySpec.imaginary(1j)
    verdict = g.admissible_class_check(sym_param(a, 1j, constant=np.array([[1.0]])),
                                       a, 1j, ray)
    assert not verdict and verdict.exact


def test_admissible_class_fixture_family():
    a = g.SymmetricOp.null(1)
    ray = g.RaySpec.imaginary(1j)
    param = sym_param(a, 1j, fn=lambda lam: np.array([[-(lam - 1j) / (lam + 1j)]]))
    verdict = g.admissible_class_check(param, a, 1j, ray)
    assert verdict and not verdict.exact


def test_admissible_class_dense_domain(rng):
    a = g.SymmetricOp.random(3, 3, rng)
    ray = g.RaySpec.imaginary(1j)
    param = g.ContractionParam.constant(g.Subspace.empty(3), g.Subspace.empty(3),
                                        np.zeros((0, 0)), 1j)
    verdict = g.admissible_class_check(param, a, 1j, ray)
    assert verdict and verdict.exact


# ---------------------------------------------------------------- global identities

def test_first_resolvent_identity_on_shifted_range(rng):
    for _ in range(5):
        v, model = random_isometric_model(rng, n_max=6, m_max=5)
        r = g.ResolventModel.from_dilation(model)
        for z, zeta in ((0.3 + 0.1j, -0.4j), (1.7, 0.2), (2j, 3.0 + 1.0j)):
            m_zeta = g.defect_subspaces(v, zeta).m_space
            if m_zeta.dim == 0:
                continue
            f = m_zeta.basis
            lhs = z * r(z) @ f - zeta * r(zeta) @ f
            rhs = (z - zeta) * (r(z) @ (r(zeta) @ f))
            assert nk.op_norm(lhs - rhs) < 1e-9


def test_anchor_independence(rng):
    for _ in range(5):
        v, model = random_isometric_model(rng, n_max=5, m_max=5)
        r = g.ResolventModel.from_dilation(model)
        for zeta in (0.3 + 0.2j, -0.5j):
            exts = []
            for z0 in (0.0, 0.25 + 0.35j, -0.4j):
                coords = recover_anchored_parameter(r, z0, zeta)
                exts.append(g.orthogonal_extension(v, coords, z0).matrix)
            for other in exts[1:]:
                assert nk.op_norm(exts[0] - other) < 1e-9


def test_distinct_parameters_distinct_resolvents(rng):
    v = g.IsometryOp.random(4, 2, rng)
    p1 = null_param(v, constant=0.8 * nk.haar_unitary(2, rng))
    p2 = null_param(v, constant=0.8 * nk.haar_unitary(2, rng))
    assert nk.op_norm(p1.form[1] - p2.form[1]) > 1e-3
    diffs = [nk.op_norm(g.direct_sum_resolvent(v, p1, z) - g.direct_sum_resolvent(v, p2, z))
             for z in DEFAULT_DISK_SAMPLES]
    assert max(diffs) > 1e-6


def test_uniqueness_recovery_identifies_parameter(rng):
    v = g.IsometryOp.random(4, 2, rng)
    c = 0.6 * nk.haar_unitary(2, rng)
    r = g.ResolventModel.from_direct_sum(v, null_param(v, constant=c))
    np.testing.assert_allclose(g.recover_parameter(r, 0.37 - 0.11j), c, atol=1e-10)
