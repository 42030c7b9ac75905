"""
Reduction of a generalized Choi-Kraus representation to minimal length.

One pass over the right factors followed by one pass over the left factors
leaves both families linearly independent; the resulting length is the
tensor rank of the map.  The independent families are then recombined into
balanced operator-Schmidt form, a canonical basis of the same two spans.
"""

from dataclasses import dataclass

import numpy as np

from .numerics import RANK_TOL, coordinates_in_basis, row_basis
from .superop import GCKRep

#: a retained singular value this close to the rank cutoff is flagged
NEAR_DEPENDENCE_FACTOR = 10.0


@dataclass(frozen=True)
class ReducedRep:
    """
    Representation ``phi(X) = sum_i E_i X F_i`` with independent ``{E_i}`` and ``{F_i}``.

    ``E`` has shape ``(p, k, n)``, ``F`` has shape ``(p, n, k)``.
    """

    n: int
    k: int
    E: np.ndarray
    F: np.ndarray
    warnings: tuple = ()

    @property
    def p(self):
        return self.E.shape[0]

    def as_gck(self):
        return GCKRep(self.n, self.k, tuple(zip(self.E, self.F)))


def _weakest_ratio(vectors):
    if not vectors:
        return np.inf
    s = np.linalg.svd(np.vstack(vectors), compute_uv=False)
    return s[-1] / s[0]


def _near_dependence_warnings(C, Ebasis, tol):
    out = []
    for label, vecs in (("right factors", C), ("left factors", Ebasis)):
        ratio = _weakest_ratio(vecs)
        if ratio < NEAR_DEPENDENCE_FACTOR * tol:
            out.append(
                f"near-dependent {label}: weakest retained singular value ratio {ratio:.2e}"
            )
    return tuple(out)


def _gauge_phase(v, k, n):
    # trace is invariant under unitary change of basis; fall back to the first significant entry
    if k == n:
        tr = np.trace(v.reshape(k, n))
        if abs(tr) > 1e-8 * np.linalg.norm(v):
            return tr / abs(tr)
    mag = np.abs(v)
    z = v[np.argmax(mag > 1e-8 * mag.max())]
    return z / abs(z)


def schmidt_balance(E, F, k, n):
    """
    Recombine independent families into balanced operator-Schmidt form.

    With ``M = sum_i vec(E_i) vec(F_i)^T = X diag(s) Y^T`` (``X``, ``Y`` with
    orthonormal columns), returns ``E'_t = sqrt(s_t) X_t`` and
    ``F'_t = sqrt(s_t) Y_t``, ordered by decreasing ``s_t``. Each pair's free
    phase is fixed by making ``Tr(E'_t)`` real and positive (first
    significant entry instead when the trace vanishes or ``k != n``).

    :param E: ``(p, kn)`` array of flattened left factors.
    :param F: ``(p, nk)`` array of flattened right factors.
    """
    Qe, Re = np.linalg.qr(E.T)
    Qf, Rf = np.linalg.qr(F.T)
    W, s, Zh = np.linalg.svd(Re @ Rf.T)
    root = np.sqrt(s)
    Enew = (Qe @ W * root).T
    Fnew = (Qf @ Zh.T * root).T
    for t in range(Enew.shape[0]):
        ph = _gauge_phase(Enew[t], k, n)
        Enew[t] /= ph
        Fnew[t] *= ph
    return Enew, Fnew


def make_lin_indep(rep, tol=RANK_TOL, canonical=True):
    """
    Reduce ``rep`` to a representation with independent left and right families.

    Step 1 picks a basis ``C_j`` of ``span{B_i}`` and writes ``B_i = sum_j d[i,j] C_j``;
    step 2 forms ``D_j = sum_i d[i,j] A_i``; step 3 does the same to ``{D_j}``,
    giving ``E`` as a basis of ``span{D_j}`` and ``F`` as the matching
    combinations of the ``C_j``.

    :param rep: any :class:`GCKRep`, including the zero map.
    :param tol: relative singular-value cutoff for rank decisions.
    :param canonical: if set, finish with :func:`schmidt_balance`; otherwise
        return the raw basis picked out of the input terms.
    :return: a :class:`ReducedRep` acting identically to ``rep``.
    """
    n, k = rep.n, rep.k
    empty = ReducedRep(n, k, np.zeros((0, k, n), complex), np.zeros((0, n, k), complex))
    if rep.m == 0:
        return empty

    A = rep.A.reshape(rep.m, -1)
    B = rep.B.reshape(rep.m, -1)

    C, l = row_basis(B, tol)
    if l == 0:
        return empty
    scale = np.max(np.linalg.norm(B, axis=1))
    d = np.array([coordinates_in_basis(b, C, scale=scale) for b in B])  # (m, l)
    D = d.T @ A  # D_j = sum_i d[i,j] A_i

    # D_j can cancel to rounding noise; judge it against the size of its ingredients
    a_norms = np.linalg.norm(A, axis=1)
    ingredient = float(np.max(np.abs(d).T @ a_norms))
    Ebasis, p = row_basis(D, tol, scale=ingredient)
    if p == 0:
        return empty
    scale = np.max(np.linalg.norm(D, axis=1))
    c = np.array([coordinates_in_basis(dj, Ebasis, scale=scale) for dj in D])  # (l, p)
    F = c.T @ np.vstack(C)  # F_x = sum_j c[j,x] C_j
    E = np.vstack(Ebasis)
    warnings = _near_dependence_warnings(C, Ebasis, tol)
    if canonical:
        E, F = schmidt_balance(E, F, k, n)
    return ReducedRep(n, k, E.reshape(p, k, n), F.reshape(p, n, k), warnings)


def tensor_rank(rep, tol=RANK_TOL):
    """Minimal number of elementary terms needed to write ``rep``."""
    return make_lin_indep(rep, tol).p
