"""
Linear maps ``phi: M_n -> M_k`` in generalized Choi-Kraus form.

A map is stored as a list of pairs ``(A_i, B_i)`` with ``A_i`` of shape
``k x n`` and ``B_i`` of shape ``n x k`` so that ``phi(X) = sum_i A_i X B_i``.
No relation between ``A_i`` and ``B_i`` is assumed.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, ValidationError
from .numerics import (
    as_matrix,
    is_positive_semidefinite,
    is_unitary,
    min_hermitian_eigenvalue,
    operator_norm,
)

#: absolute tolerance on the smallest Choi eigenvalue for the CP test
CP_TOL = 1e-9

#: singular values of the realigned Choi matrix below this fraction are dropped
CHOI_RANK_TOL = 1e-12


@dataclass(frozen=True)
class GCKRep:
    """Generalized Choi-Kraus representation of a map ``M_n -> M_k``."""

    n: int
    k: int
    terms: tuple = ()

    def __post_init__(self):
        if self.n < 1 or self.k < 1:
            raise DimensionError(f"dimensions must be positive, got n={self.n}, k={self.k}")
        checked = []
        for idx, (A, B) in enumerate(self.terms):
            A = as_matrix(A, f"A[{idx}]")
            B = as_matrix(B, f"B[{idx}]")
            if A.shape != (self.k, self.n):
                raise DimensionError(f"A[{idx}] has shape {A.shape}, expected {(self.k, self.n)}")
            if B.shape != (self.n, self.k):
                raise DimensionError(f"B[{idx}] has shape {B.shape}, expected {(self.n, self.k)}")
            A.setflags(write=False)
            B.setflags(write=False)
            checked.append((A, B))
        object.__setattr__(self, "terms", tuple(checked))

    @property
    def m(self):
        return len(self.terms)

    @property
    def A(self):
        """Stack of the left factors, shape ``(m, k, n)``."""
        if not self.terms:
            return np.zeros((0, self.k, self.n), dtype=complex)
        return np.stack([a for a, _ in self.terms])

    @property
    def B(self):
        """Stack of the right factors, shape ``(m, n, k)``."""
        if not self.terms:
            return np.zeros((0, self.n, self.k), dtype=complex)
        return np.stack([b for _, b in self.terms])

    def __call__(self, X):
        return apply(self, X)

    @classmethod
    def from_stacks(cls, A, B):
        A = np.asarray(A, dtype=complex)
        B = np.asarray(B, dtype=complex)
        if A.ndim != 3 or B.ndim != 3 or A.shape[0] != B.shape[0]:
            raise DimensionError(f"incompatible stacks {A.shape} and {B.shape}")
        k, n = A.shape[1:]
        return cls(n, k, tuple(zip(A, B)))


def zero_map(n, k):
    return GCKRep(n, k, ())


def identity_map(n):
    I = np.eye(n, dtype=complex)
    return GCKRep(n, n, ((I, I),))


@dataclass(frozen=True)
class ChoiMatrix:
    """
    Block matrix whose ``(i, j)`` block of size ``k x k`` is ``phi(E_ij)``.

    Entry ``J[i*k + a, j*k + b] = phi(E_ij)[a, b]``.
    """

    n: int
    k: int
    J: np.ndarray = field(repr=False)

    def __post_init__(self):
        J = as_matrix(self.J, "J")
        if J.shape != (self.n * self.k, self.n * self.k):
            raise DimensionError(
                f"Choi matrix has shape {J.shape}, expected {(self.n * self.k,) * 2}"
            )
        object.__setattr__(self, "J", J)


def apply(rep, X):
    """Evaluate ``sum_i A_i X B_i``."""
    X = np.asarray(X, dtype=complex)
    if X.shape != (rep.n, rep.n):
        raise DimensionError(f"input has shape {X.shape}, expected {(rep.n, rep.n)}")
    if rep.m == 0:
        return np.zeros((rep.k, rep.k), dtype=complex)
    return np.sum(rep.A @ X @ rep.B, axis=0)


def dual(rep):
    """Hilbert-Schmidt adjoint: ``Tr(phi(X) Y) = Tr(X phi^dag(Y))``, a map ``M_k -> M_n``."""
    return GCKRep(rep.k, rep.n, tuple((B, A) for A, B in rep.terms))


def star(rep):
    """The map ``X -> phi(X^dag)^dag``."""
    return GCKRep(rep.n, rep.k, tuple((B.conj().T, A.conj().T) for A, B in rep.terms))


def choi(rep):
    """Choi matrix with ``J[(i,a),(j,b)] = sum_t A_t[a,i] B_t[j,b]``."""
    nk = rep.n * rep.k
    if rep.m == 0:
        return ChoiMatrix(rep.n, rep.k, np.zeros((nk, nk), dtype=complex))
    J = np.einsum("tai,tjb->iajb", rep.A, rep.B).reshape(nk, nk)
    return ChoiMatrix(rep.n, rep.k, J)


def choi_min_eigenvalue(rep):
    return min_hermitian_eigenvalue(choi(rep).J)


def is_cp(rep, tol=CP_TOL):
    """Complete positivity via positivity of the Choi matrix."""
    return is_positive_semidefinite(choi(rep).J, tol)


def from_kraus(kraus):
    """
    The completely positive map ``X -> sum_i K_i X K_i^dag``.

    :param kraus: non-empty list of ``k x n`` matrices.
    """
    ops = [as_matrix(K, f"K[{i}]") for i, K in enumerate(kraus)]
    if not ops:
        raise ValidationError("at least one Kraus operator is required")
    shapes = {K.shape for K in ops}
    if len(shapes) != 1:
        raise DimensionError(f"Kraus operators have inconsistent shapes {sorted(shapes)}")
    k, n = ops[0].shape
    return GCKRep(n, k, tuple((K, K.conj().T) for K in ops))


def unitary_conjugation(U):
    U = as_matrix(U, "U")
    if not is_unitary(U):
        raise ValidationError("U is not unitary")
    return GCKRep(U.shape[0], U.shape[0], ((U, U.conj().T),))


def from_unitary_pair(U, V):
    """Two-term representation of ``X -> U X U^dag - V X V^dag``."""
    U = as_matrix(U, "U")
    V = as_matrix(V, "V")
    if U.shape != V.shape or U.shape[0] != U.shape[1]:
        raise DimensionError(f"U and V must be square of equal size, got {U.shape} and {V.shape}")
    if not is_unitary(U):
        raise ValidationError("U is not unitary")
    if not is_unitary(V):
        raise ValidationError("V is not unitary")
    n = U.shape[0]
    return GCKRep(n, n, ((U, U.conj().T), (V, -V.conj().T)))


def from_choi(cm, tol=CHOI_RANK_TOL):
    """
    Minimal-length representation recovered from a Choi matrix.

    The Choi matrix is permuted into ``K[(a,i),(b,j)] = J[(i,a),(j,b)]`` and
    rank-factored by SVD; singular values below ``tol`` times the largest are
    discarded.
    """
    n, k = cm.n, cm.k
    K = cm.J.reshape(n, k, n, k).transpose(1, 0, 3, 2).reshape(k * n, k * n)
    u, s, vh = np.linalg.svd(K)
    if s.size == 0 or s[0] == 0.0:
        return zero_map(n, k)
    keep = int(np.sum(s > tol * s[0]))
    terms = []
    for t in range(keep):
        A = (u[:, t] * s[t]).reshape(k, n)
        B = vh[t].reshape(k, n).T
        terms.append((A, B))
    return GCKRep(n, k, tuple(terms))


def subtract(rep1, rep2):
    """Representation of ``phi1 - phi2`` (term lists concatenated, right factors of ``phi2`` negated)."""
    if (rep1.n, rep1.k) != (rep2.n, rep2.k):
        raise DimensionError(
            f"cannot subtract a map {rep2.n}->{rep2.k} from a map {rep1.n}->{rep1.k}"
        )
    return GCKRep(rep1.n, rep1.k, rep1.terms + tuple((A, -B) for A, B in rep2.terms))


def tensor_with_identity(rep, m):
    """Representation of ``id_m (x) phi``, a map ``M_{mn} -> M_{mk}``."""
    if m < 1:
        raise ValidationError("m must be positive")
    I = np.eye(m)
    return GCKRep(m * rep.n, m * rep.k, tuple((np.kron(I, A), np.kron(I, B)) for A, B in rep.terms))


def cp_cb_norm(rep):
    """CB norm of a completely positive map, ``||phi(I)||``. The caller guarantees complete positivity."""
    return operator_norm(apply(rep, np.eye(rep.n)))


def matrix_unit(n, i, j):
    E = np.zeros((n, n), dtype=complex)
    E[i, j] = 1.0
    return E


def matrix_units(n):
    """All ``n**2`` matrix units in row-major order of ``(i, j)``."""
    return [matrix_unit(n, i, j) for i in range(n) for j in range(n)]


def same_action(rep1, rep2, atol=1e-10):
    """True if the two maps agree on every matrix unit to ``atol`` (entrywise)."""
    if (rep1.n, rep1.k) != (rep2.n, rep2.k):
        return False
    return all(
        np.max(np.abs(apply(rep1, E) - apply(rep2, E)), initial=0.0) <= atol
        for E in matrix_units(rep1.n)
    )

