"""Dense complex linear algebra and subspace calculus with an explicit tolerance policy.

Every matrix is a 2-D ``numpy.ndarray`` of ``complex128`` (called ``CMatrix``
throughout).  A ``Subspace`` is an orthonormal frame; all rank decisions go
through a single ``TolPolicy`` so that downstream verdicts are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import KindMismatch, Singular

CMatrix = np.ndarray

_EPS = float(np.finfo(np.float64).eps)

#: gap below which two eigenvalues of a normal matrix are merged into one atom
EIG_MERGE_GAP = 1e-8

#: validation gate for "is this frame orthonormal / this matrix unitary" checks
STRUCT_GATE = 1e-8


def as_cmatrix(entries) -> CMatrix:
    """Coerce to a finite complex128 2-D array (scalars become 1x1)."""
    m = np.atleast_2d(np.asarray(entries, dtype=np.complex128))
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got ndim={m.ndim}")
    if m.size and not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def op_norm(m: CMatrix) -> float:
    """Operator (spectral) norm; 0 for empty matrices."""
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


@dataclass(frozen=True)
class TolPolicy:
    """Tolerance policy for rank and invertibility decisions.

    ``rank_rel=None`` selects the dimension-aware default ``64 * n * eps``.
    """

    abs_floor: float = 1e-10
    rank_rel: float | None = None

    def __post_init__(self):
        if self.abs_floor < 0:
            raise ValueError("abs_floor must be nonnegative")
        if self.rank_rel is not None and self.rank_rel < 0:
            raise ValueError("rank_rel must be nonnegative")

    def rel_factor(self, n: int) -> float:
        return self.rank_rel if self.rank_rel is not None else 64.0 * max(n, 1) * _EPS

    def threshold(self, sigma_max: float, n: int) -> float:
        """Singular values at or below this are treated as zero."""
        return max(self.abs_floor, self.rel_factor(n) * sigma_max)


DEFAULT_TOL = TolPolicy()


@dataclass(frozen=True)
class Subspace:
    """A subspace of C^n held as an orthonormal column frame (k may be 0)."""

    ambient_dim: int
    basis: CMatrix

    def __post_init__(self):
        b = self.basis
        if b.shape[0] != self.ambient_dim or b.shape[1] > self.ambient_dim:
            raise ValueError(f"bad frame shape {b.shape} for ambient dim {self.ambient_dim}")
        gram = b.conj().T @ b
        if op_norm(gram - np.eye(b.shape[1])) > STRUCT_GATE:
            raise ValueError("frame columns are not orthonormal")

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @classmethod
    def empty(cls, n: int) -> "Subspace":
        return cls(n, np.zeros((n, 0), dtype=np.complex128))

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, np.eye(n, dtype=np.complex128))


def _fix_phases(q: CMatrix) -> CMatrix:
    """Rotate each column so its largest-modulus entry is real positive.

    Deterministic representative of the frame; does not change the span.
    """
    q = q.copy()
    for j in range(q.shape[1]):
        i = int(np.argmax(np.abs(q[:, j])))
        piv = q[i, j]
        if abs(piv) > 0:
            q[:, j] *= np.conj(piv) / abs(piv)
    return q


def orthonormalize(m: CMatrix, tol: TolPolicy = DEFAULT_TOL) -> Subspace:
    """Orthonormal basis of the column space of ``m``; rank set by ``tol``."""
    m = as_cmatrix(m)
    n = m.shape[0]
    if m.shape[1] == 0:
        return Subspace.empty(n)
    u, s, _ = np.linalg.svd(m, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return Subspace.empty(n)
    rank = int(np.sum(s > tol.threshold(s[0], n)))
    return Subspace(n, _fix_phases(u[:, :rank]))


def orthogonal_complement(s: Subspace, tol: TolPolicy = DEFAULT_TOL) -> Subspace:
    """Orthonormal basis of the orthogonal complement of ``s``."""
    n, k = s.ambient_dim, s.dim
    if k == 0:
        return Subspace.full(n)
    if k == n:
        return Subspace.empty(n)
    u, _, _ = np.linalg.svd(s.basis, full_matrices=True)
    return Subspace(n, _fix_phases(u[:, k:]))


def projector(s: Subspace) -> CMatrix:
    """Orthogonal projection onto ``s`` as an n x n matrix."""
    if s.dim == 0:
        return np.zeros((s.ambient_dim, s.ambient_dim), dtype=np.complex128)
    return s.basis @ s.basis.conj().T


def intersect(s1: Subspace, s2: Subspace, tol: TolPolicy = DEFAULT_TOL) -> Subspace:
    """Intersection of two subspaces via SVD of the projector product.

    Singular values of P1 P2 are cosines of principal angles; directions with
    cosine within 100*abs_floor of 1 are kept.
    """
    n = s1.ambient_dim
    if s2.ambient_dim != n:
        raise ValueError("ambient dimensions differ")
    if s1.dim == 0 or s2.dim == 0:
        return Subspace.empty(n)
    if s1.dim == n:
        return s2
    if s2.dim == n:
        return s1
    u, s, _ = np.linalg.svd(projector(s1) @ projector(s2))
    keep = s >= 1.0 - 100.0 * tol.abs_floor
    return Subspace(n, _fix_phases(u[:, : int(np.sum(keep))]))


def solve(m: CMatrix, b: CMatrix, tol: TolPolicy = DEFAULT_TOL) -> CMatrix:
    """Solve M X = B for square M, rejecting numerically singular systems."""
    m = as_cmatrix(m)
    b = as_cmatrix(b)
    n = m.shape[0]
    if m.shape[0] != m.shape[1]:
        raise ValueError("solve expects a square matrix")
    if n == 0:
        return np.zeros((0, b.shape[1]), dtype=np.complex128)
    s = np.linalg.svd(m, compute_uv=False)
    if s[-1] <= tol.threshold(s[0], n):
        raise Singular(s[-1])
    return np.linalg.solve(m, b)


def inv(m: CMatrix, tol: TolPolicy = DEFAULT_TOL) -> CMatrix:
    return solve(m, np.eye(m.shape[0], dtype=np.complex128), tol)


def _cluster_sorted(values: np.ndarray, gap: float) -> list[np.ndarray]:
    """Group indices of a sorted 1-D real array into chains with step < gap."""
    groups: list[list[int]] = []
    for i in range(values.size):
        if groups and values[i] - values[groups[-1][-1]] < gap:
            groups[-1].append(i)
        else:
            groups.append([i])
    return [np.asarray(g) for g in groups]


def _eig_hermitian(m: CMatrix) -> list[tuple[complex, CMatrix]]:
    w, v = np.linalg.eigh((m + m.conj().T) / 2.0)
    out = []
    for idx in _cluster_sorted(w, EIG_MERGE_GAP):
        block = v[:, idx]
        out.append((complex(np.mean(w[idx])), block @ block.conj().T))
    return out


def _eig_unitary(m: CMatrix) -> list[tuple[complex, CMatrix]]:
    # Two-stage Hermitian splitting: eigenspaces of the real part, refined by
    # the imaginary part.  Keeps every projection exactly orthogonal.
    cos_part = (m + m.conj().T) / 2.0
    sin_part = (m - m.conj().T) / 2.0j
    w1, v1 = np.linalg.eigh(cos_part)
    raw: list[tuple[complex, CMatrix]] = []
    for idx in _cluster_sorted(w1, EIG_MERGE_GAP):
        block = v1[:, idx]
        k = block.conj().T @ sin_part @ block
        w2, v2 = np.linalg.eigh((k + k.conj().T) / 2.0)
        for sub in _cluster_sorted(w2, EIG_MERGE_GAP):
            vec = block @ v2[:, sub]
            lam = complex(np.mean(w1[idx])) + 1j * complex(np.mean(w2[sub]))
            lam /= abs(lam)
            raw.append((lam, vec))
    # chordal merge of candidates that the cos/sin split kept apart
    raw.sort(key=lambda t: np.angle(t[0]) % (2 * np.pi))
    merged: list[tuple[complex, list[CMatrix]]] = []
    for lam, vec in raw:
        if merged and abs(lam - merged[-1][0]) < EIG_MERGE_GAP:
            merged[-1][1].append(vec)
        else:
            merged.append((lam, [vec]))
    if len(merged) > 1 and abs(merged[0][0] - merged[-1][0]) < EIG_MERGE_GAP:
        lam, vecs = merged.pop()
        merged[0] = (merged[0][0], merged[0][1] + vecs)
    out = []
    for lam, vecs in merged:
        block = np.hstack(vecs)
        out.append((lam, block @ block.conj().T))
    return out


def eig_normal(m: CMatrix, kind: str, tol: TolPolicy = DEFAULT_TOL) -> list[tuple[complex, CMatrix]]:
    """Eigenvalues and orthogonal eigenprojections of a unitary or Hermitian matrix.

    Eigenvalues closer than ``EIG_MERGE_GAP`` are merged into one projection so
    that arc/interval membership of an atom is unambiguous.  The result is
    sorted by angle in [0, 2pi) for ``kind='unitary'`` and increasing value for
    ``kind='hermitian'``.

    Raises ``KindMismatch`` if ``m`` fails the declared structure test.
    """
    m = as_cmatrix(m)
    n = m.shape[0]
    if m.shape[0] != m.shape[1]:
        raise ValueError("eig_normal expects a square matrix")
    if n == 0:
        return []
    gate = max(STRUCT_GATE, tol.abs_floor)
    if kind == "hermitian":
        if op_norm(m - m.conj().T) > gate * max(1.0, op_norm(m)):
            raise KindMismatch("matrix is not Hermitian within tolerance")
        pairs = _eig_hermitian(m)
        pairs.sort(key=lambda t: t[0].real)
        return pairs
    if kind == "unitary":
        if op_norm(m.conj().T @ m - np.eye(n)) > gate:
            raise KindMismatch("matrix is not unitary within tolerance")
        pairs = _eig_unitary(m)
        pairs.sort(key=lambda t: np.angle(t[0]) % (2 * np.pi))
        return pairs
    raise ValueError(f"unknown kind {kind!r}")


def haar_frame(n: int, k: int, rng: np.random.Generator) -> CMatrix:
    """Random n x k orthonormal frame (Haar-distributed column span)."""
    if k == 0:
        return np.zeros((n, 0), dtype=np.complex128)
    g = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
    q, r = np.linalg.qr(g)
    # make the distribution exactly Haar: absorb the phases of diag(r)
    d = np.diag(r)
    return q * (d / np.abs(d))


def haar_unitary(n: int, rng: np.random.Generator) -> CMatrix:
    return haar_frame(n, n, rng)


def symmetric_orthogonalize(q: CMatrix) -> CMatrix:
    """Closest frame with exactly orthonormal columns (polar correction)."""
    if q.shape[1] == 0:
        return q
    gram = q.conj().T @ q
    w, v = np.linalg.eigh(gram)
    w = np.maximum(w, _EPS)
    inv_sqrt = (v * (1.0 / np.sqrt(w))) @ v.conj().T
    return q @ inv_sqrt
