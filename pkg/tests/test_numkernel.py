"""Subspace calculus and normal-matrix eigenstructure."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import gresolv.numkernel as nk
from gresolv.errors import KindMismatch, Singular


def test_orthonormalize_already_orthonormal():
    sub = nk.orthonormalize(np.array([[1.0], [0.0]]))
    assert sub.dim == 1
    np.testing.assert_allclose(sub.basis, [[1.0], [0.0]], atol=1e-14)


def test_orthonormalize_rank_one():
    sub = nk.orthonormalize(np.array([[1.0, 2.0], [0.0, 0.0]]))
    assert sub.dim == 1
    np.testing.assert_allclose(sub.basis, [[1.0], [0.0]], atol=1e-14)


def test_orthonormalize_zero_matrix():
    assert nk.orthonormalize(np.zeros((2, 2))).dim == 0


def test_complement_of_e1():
    sub = nk.Subspace(2, np.array([[1.0], [0.0]], dtype=complex))
    comp = nk.orthogonal_complement(sub)
    np.testing.assert_allclose(np.abs(comp.basis), [[0.0], [1.0]], atol=1e-14)


def test_complement_of_full_space():
    assert nk.orthogonal_complement(nk.Subspace.full(2)).dim == 0


def test_complement_diagonal_direction():
    # oracle: the projector identity P_S + P_Sperp = I
    vec = np.array([[1.0], [1.0]]) / np.sqrt(2.0)
    sub = nk.orthonormalize(vec)
    comp = nk.orthogonal_complement(sub)
    np.testing.assert_allclose(nk.projector(sub) + nk.projector(comp), np.eye(2), atol=1e-12)
    # and the complement is the reflected diagonal
    expected = np.array([[1.0], [-1.0]]) / np.sqrt(2.0)
    np.testing.assert_allclose(nk.projector(comp), expected @ expected.T, atol=1e-12)


def test_projector_values():
    e1 = nk.Subspace(2, np.array([[1.0], [0.0]], dtype=complex))
    np.testing.assert_allclose(nk.projector(e1), np.diag([1.0, 0.0]), atol=1e-14)
    np.testing.assert_allclose(nk.projector(nk.Subspace.empty(2)), np.zeros((2, 2)))
    diag = nk.orthonormalize(np.array([[1.0], [1.0]]))
    np.testing.assert_allclose(nk.projector(diag), 0.5 * np.ones((2, 2)), atol=1e-12)


def test_eig_hermitian_flip():
    # by-hand 2x2 eigenproblem: eigenvalues +-1, projections (I +- X)/2
    pairs = nk.eig_normal(np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex), "hermitian")
    assert len(pairs) == 2
    (lam_m, p_m), (lam_p, p_p) = pairs
    assert abs(lam_m + 1.0) < 1e-12 and abs(lam_p - 1.0) < 1e-12
    np.testing.assert_allclose(p_p, 0.5 * np.array([[1, 1], [1, 1]]), atol=1e-12)
    np.testing.assert_allclose(p_m, 0.5 * np.array([[1, -1], [-1, 1]]), atol=1e-12)


def test_eig_unitary_diagonal():
    pairs = nk.eig_normal(np.diag([1j, 1.0]), "unitary")
    values = {complex(np.round(lam, 12)) for lam, _ in pairs}
    assert values == {1j, 1.0}
    for lam, proj in pairs:
        expected = np.diag([1.0, 0.0]) if lam == 1j else np.diag([0.0, 1.0])
        np.testing.assert_allclose(proj, expected, atol=1e-12)


def test_eig_merges_multiplicity():
    pairs = nk.eig_normal(np.eye(3, dtype=complex), "unitary")
    assert len(pairs) == 1
    lam, proj = pairs[0]
    assert abs(lam - 1.0) < 1e-12
    np.testing.assert_allclose(proj, np.eye(3), atol=1e-12)


def test_eig_kind_mismatch():
    with pytest.raises(KindMismatch):
        nk.eig_normal(np.array([[0.0, 1.0], [0.0, 0.0]]), "hermitian")
    with pytest.raises(KindMismatch):
        nk.eig_normal(np.array([[0.5, 0.0], [0.0, 0.5]]), "unitary")


def test_solve_identity_and_diagonal():
    b = np.array([[1.0, 2.0], [3.0, 4.0]], dtype=complex)
    np.testing.assert_allclose(nk.solve(np.eye(2), b), b)
    x = nk.solve(np.diag([2.0, 4.0]).astype(complex), np.eye(2))
    np.testing.assert_allclose(x, np.diag([0.5, 0.25]), atol=1e-14)


def test_solve_singular_reports_sigma():
    with pytest.raises(Singular) as exc:
        nk.solve(np.array([[1.0, 0.0], [0.0, 0.0]]), np.eye(2))
    assert exc.value.smallest_sv < 1e-14


def test_projector_idempotent_on_random_frames(rng):
    for _ in range(50):
        n = int(rng.integers(1, 10))
        k = int(rng.integers(0, n + 1))
        m = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
        p = nk.projector(nk.orthonormalize(m))
        assert nk.op_norm(p @ p - p) < 1e-10


def test_eig_reconstruction_random(rng):
    for n in (2, 5, 9, 16):
        h = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        h = (h + h.conj().T) / 2.0
        recon = sum(lam * proj for lam, proj in nk.eig_normal(h, "hermitian"))
        assert nk.op_norm(recon - h) < 1e-9
        u = nk.haar_unitary(n, rng)
        recon = sum(lam * proj for lam, proj in nk.eig_normal(u, "unitary"))
        assert nk.op_norm(recon - u) < 1e-9


def test_complement_involution(rng):
    for _ in range(25):
        n = int(rng.integers(1, 12))
        k = int(rng.integers(0, n + 1))
        sub = nk.Subspace(n, nk.haar_frame(n, k, rng))
        back = nk.orthogonal_complement(nk.orthogonal_complement(sub))
        assert nk.op_norm(nk.projector(back) - nk.projector(sub)) < 1e-10


def test_intersection_of_planes():
    a = nk.orthonormalize(np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]]))
    b = nk.orthonormalize(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))
    inter = nk.intersect(a, b)
    assert inter.dim == 1
    np.testing.assert_allclose(np.abs(inter.basis), [[0.0], [1.0], [0.0]], atol=1e-10)


@settings(max_examples=25, deadline=None)
@given(n=st.integers(1, 8), k=st.integers(0, 8), seed=st.integers(0, 2**32 - 1))
def test_orthonormalize_gives_orthonormal_frames(n, k, seed):
    k = min(k, n)
    r = np.random.default_rng(seed)
    m = r.standard_normal((n, k)) + 1j * r.standard_normal((n, k))
    sub = nk.orthonormalize(m)
    gram = sub.basis.conj().T @ sub.basis
    assert nk.op_norm(gram - np.eye(sub.dim)) < 1e-10
    # span is preserved: every original column projects to itself
    proj = nk.projector(sub)
    assert nk.op_norm(proj @ m - m) < 1e-8 * max(1.0, nk.op_norm(m))


@settings(max_examples=25, deadline=None)
@given(n=st.integers(1, 8), seed=st.integers(0, 2**32 - 1))
def test_unitary_eigenvalues_unimodular(n, seed):
    r = np.random.default_rng(seed)
    u = nk.haar_unitary(n, r)
    for lam, proj in nk.eig_normal(u, "unitary"):
        assert abs(abs(lam) - 1.0) < 1e-10
        assert nk.op_norm(proj @ proj - proj) < 1e-10
