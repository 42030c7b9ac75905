"""
Dense complex linear algebra primitives.

Everything here works on plain ``numpy`` arrays of dtype ``complex128``;
the rest of the package never touches LAPACK directly.
"""

import numpy as np
import scipy.linalg
from scipy.stats import unitary_group

from .errors import DimensionError, InternalError, SpanError, ValidationError

#: relative singular-value cutoff used for every numerical rank decision
RANK_TOL = 1e-10

#: maximum number of redraws when sampling a full-rank random matrix
MAX_REDRAWS = 100


def as_matrix(M, name="matrix"):
    """Coerce ``M`` to a finite 2-D complex array."""
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise DimensionError(f"{name} must be a non-empty 2-D array, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValidationError(f"{name} has non-finite entries")
    return A


def operator_norm(M):
    """Largest singular value of ``M``."""
    A = np.asarray(M, dtype=complex)
    if A.size == 0:
        return 0.0
    return float(np.linalg.norm(A, 2))


def trace_norm(M):
    """Sum of the singular values of ``M``."""
    A = np.asarray(M, dtype=complex)
    if A.size == 0:
        return 0.0
    return float(np.sum(np.linalg.svd(A, compute_uv=False)))


def is_unitary(U, tol=1e-8):
    U = np.asarray(U, dtype=complex)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        return False
    return bool(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))) <= tol)


def min_hermitian_eigenvalue(M):
    """Smallest eigenvalue of the Hermitian part of a square matrix."""
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {A.shape}")
    return float(np.linalg.eigvalsh(0.5 * (A + A.conj().T))[0])


def is_positive_semidefinite(M, tol=1e-10):
    """
    Test whether ``M`` is Hermitian and positive semidefinite up to ``tol``.

    :param M: square complex matrix.
    :param tol: absolute tolerance, applied both to the entrywise
        Hermiticity defect and to the smallest eigenvalue.
    :return: True iff ``max|M - M^dag| <= tol`` and ``lambda_min >= -tol``.
    """
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {A.shape}")
    if np.max(np.abs(A - A.conj().T)) > tol:
        return False
    return min_hermitian_eigenvalue(A) >= -tol


def _gram_schmidt(M):
    # QR with R's diagonal made positive reproduces classical Gram-Schmidt on the columns
    Q, R = np.linalg.qr(M)
    phases = np.diag(R) / np.abs(np.diag(R))
    return Q * phases[np.newaxis, :]


def random_unitary(d, rng):
    """
    Random unitary built by orthonormalising the columns of a random matrix.

    Entries of the seed matrix are drawn from the unit square ``[0,1) + i[0,1)``;
    rank-deficient draws are rejected. The result is *not* Haar distributed,
    see :func:`haar_unitary` for that.

    :param d: dimension.
    :param rng: a ``numpy.random.Generator``.
    """
    if d < 1:
        raise ValidationError("dimension must be positive")
    for _ in range(MAX_REDRAWS):
        M = rng.random((d, d)) + 1j * rng.random((d, d))
        if np.linalg.matrix_rank(M) == d:
            return _gram_schmidt(M)
    raise InternalError(f"no full-rank {d}x{d} draw after {MAX_REDRAWS} attempts")


def haar_unitary(d, rng):
    """Haar-distributed ``d x d`` unitary drawn from ``rng``."""
    if d == 1:
        return np.exp(2j * np.pi * rng.random((1, 1)))
    return np.asarray(unitary_group.rvs(d, random_state=rng), dtype=complex)


def random_positive_with_inverse(d, lo, hi, rng):
    """
    Random positive matrix ``P = U D U^dag`` together with its exact inverse.

    The diagonal of ``D`` is uniform on ``(lo, hi]`` and ``U`` comes from
    :func:`random_unitary`, so the inverse ``U D^-1 U^dag`` is formed
    analytically instead of by a numerical solve.

    :return: ``(P, Q)`` with ``P @ Q ~= I``.
    """
    if not 0 <= lo < hi:
        raise ValidationError(f"need 0 <= lo < hi, got lo={lo}, hi={hi}")
    # hi - u*(hi-lo) with u in [0,1) lands in (lo, hi]
    evals = hi - rng.random(d) * (hi - lo)
    U = random_unitary(d, rng)
    Uh = U.conj().T
    P = (U * evals) @ Uh
    Q = (U / evals) @ Uh
    return P, Q


def _stack(rows):
    rows = [np.ravel(np.asarray(r, dtype=complex)) for r in rows]
    if not rows:
        return np.zeros((0, 0), dtype=complex)
    lengths = {r.size for r in rows}
    if len(lengths) != 1:
        raise DimensionError(f"vectors have differing lengths {sorted(lengths)}")
    return np.vstack(rows)


def numerical_rank(M, tol=RANK_TOL, scale=0.0):
    """
    Number of singular values above ``tol`` times the largest one.

    :param scale: optional absolute reference; the cutoff becomes
        ``tol * max(s_max, scale)``, so that a family which is tiny compared
        with ``scale`` (cancellation residue) counts as zero.
    """
    A = np.asarray(M, dtype=complex)
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    ref = max(s[0], scale)
    if ref == 0.0:
        return 0
    return int(np.sum(s > tol * ref))


def row_basis(rows, tol=RANK_TOL, scale=0.0):
    """
    Maximal linearly independent subset of a list of vectors.

    The rank is read off the singular values (relative cutoff ``tol``);
    the members are then chosen by column-pivoted QR, so the basis consists
    of input vectors and spans the same space as the input.

    :param rows: sequence of equal-length vectors (or matrices, which are flattened).
    :param scale: absolute reference norm passed to :func:`numerical_rank`.
    :return: ``(basis, rank)`` where ``basis`` is a list of 1-D arrays.
    """
    M = _stack(rows)
    r = numerical_rank(M, tol, scale)
    if r == 0:
        return [], 0
    _, _, piv = scipy.linalg.qr(M.T, mode="economic", pivoting=True)
    chosen = sorted(piv[:r])
    return [M[i].copy() for i in chosen], r


def coordinates_in_basis(v, basis, tol=1e-8, scale=0.0):
    """
    Coefficients ``c`` with ``v = sum_j c[j] * basis[j]``.

    :param scale: optional reference norm; the residual is judged against
        ``max(||v||, scale)`` so that tiny vectors from a larger family are
        not rejected for rounding noise.
    :raises SpanError: if the least-squares residual exceeds ``tol * max(||v||, scale)``.
    """
    v = np.ravel(np.asarray(v, dtype=complex))
    if len(basis) == 0:
        if np.linalg.norm(v) > 0:
            raise SpanError("non-zero vector cannot lie in the span of an empty basis")
        return np.zeros(0, dtype=complex)
    B = _stack(basis).T
    if B.shape[0] != v.size:
        raise DimensionError(f"vector length {v.size} does not match basis length {B.shape[0]}")
    c, *_ = np.linalg.lstsq(B, v, rcond=None)
    resid = np.linalg.norm(B @ c - v)
    scale = max(np.linalg.norm(v), scale)
    if resid > tol * max(scale, np.finfo(float).tiny):
        raise SpanError(f"vector is outside the span (residual {resid:.3e}, norm {scale:.3e})")
    return c
