"""
Minimisation of the Haagerup-norm objective over mixing matrices.

Given a reduced representation ``phi(X) = sum_i E_i X F_i`` and an invertible
``S`` with inverse ``T``, put ``H_i = sum_j S[i,j] F_j`` and
``G_j = sum_i T[i,j] E_i``. Then ``phi(X) = sum_i G_i X H_i`` as well, so

    ||phi||_cb <= ||sum_i G_i G_i^dag||^{1/2} ||sum_i H_i^dag H_i||^{1/2}

with equality at the infimum over positive invertible ``S``.  Every value
reported by this module is therefore an upper bound on the CB norm, except
the explicit lower-bound estimators at the end.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.linalg
import scipy.optimize

from .errors import ConditioningError, ValidationError
from .numerics import haar_unitary, numerical_rank, operator_norm, random_positive_with_inverse
from .reduction import make_lin_indep
from .superop import (
    CP_TOL,
    apply,
    choi,
    choi_min_eigenvalue,
    cp_cb_norm,
    dual,
    is_cp,
    tensor_with_identity,
)

log = logging.getLogger(__name__)

#: mixing matrices with a larger condition number are rejected by :func:`objective`
MAX_CONDITION = 1e12

#: multiple of machine epsilon (times ||J||) below which a negative Choi eigenvalue is flagged
ROUNDOFF_FACTOR = 1000

# stream tags keep the search, lower-bound, phi-norm and refinement draws independent
_SEARCH, _STABILIZED, _PLAIN, _REFINE = 0, 1, 2, 3


@dataclass(frozen=True)
class SearchConfig:
    iterations: int = 1000
    seed: int = 0
    eigen_floor: float = 1e-3
    refine: bool = False
    refine_max_evals: int = 2000
    tol: float = 1e-8
    workers: int = 1

    def __post_init__(self):
        if self.iterations < 1:
            raise ValidationError("iterations must be positive")
        if not 0 < self.eigen_floor < 1:
            raise ValidationError("eigen_floor must lie in (0, 1)")
        if not 0 <= self.seed < 2**64:
            raise ValidationError("seed must be a 64-bit unsigned integer")
        if self.refine_max_evals < 1:
            raise ValidationError("refine_max_evals must be positive")
        if self.tol < 0:
            raise ValidationError("tol must be non-negative")
        if self.workers < 1:
            raise ValidationError("workers must be positive")


@dataclass(frozen=True)
class NormEstimate:
    """
    Result of a norm computation.

    ``value`` is exact when ``exact`` is set (fast paths), otherwise a
    certified upper bound. ``trace`` lists ``(index, best_so_far)`` pairs.
    """

    value: float
    exact: bool
    best_S: np.ndarray = field(default=None, repr=False)
    lower_bound: float = None
    trace: tuple = ()
    p: int = 0
    warnings: tuple = ()


def iteration_rng(seed, index, stream=_SEARCH):
    """Random generator for one iteration, independent of scheduling order."""
    return np.random.default_rng(np.random.SeedSequence([seed, stream, index]))


def objective(red, S, S_inv=None):
    """
    Haagerup-norm upper bound for the mixing matrix ``S``.

    :param red: a :class:`ReducedRep` with ``p >= 1``.
    :param S: invertible ``p x p`` matrix.
    :param S_inv: its inverse when already known; computed otherwise.
    :raises ConditioningError: if ``S`` is numerically singular.
    """
    S = np.asarray(S, dtype=complex)
    if S.shape != (red.p, red.p):
        raise ValidationError(f"mixing matrix has shape {S.shape}, expected {(red.p, red.p)}")
    if S_inv is None:
        if np.linalg.cond(S) > MAX_CONDITION:
            raise ConditioningError("mixing matrix is numerically singular")
        S_inv = np.linalg.inv(S)
    H = np.einsum("ij,jab->iab", S, red.F)
    G = np.einsum("ij,iab->jab", S_inv, red.E)
    GG = np.einsum("jab,jcb->ac", G, G.conj())
    HH = np.einsum("iba,ibc->ac", H.conj(), H)
    g = np.linalg.eigvalsh(GG)[-1]
    h = np.linalg.eigvalsh(HH)[-1]
    return float(np.sqrt(max(g, 0.0) * max(h, 0.0)))


def _search_sample(red, cfg, index):
    P, Q = random_positive_with_inverse(red.p, cfg.eigen_floor, 1.0, iteration_rng(cfg.seed, index))
    return objective(red, P, Q), P


def _run_indexed(func, count, workers):
    if workers == 1:
        return [func(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, range(count)))


def random_search(red, cfg):
    """
    Minimum of the objective over ``cfg.iterations`` random positive matrices.

    Iteration ``i`` draws from a stream seeded by ``(cfg.seed, i)``, so the
    result does not depend on ``cfg.workers``.
    """
    if red.p == 0:
        return NormEstimate(0.0, True, p=0)
    samples = _run_indexed(lambda i: _search_sample(red, cfg, i), cfg.iterations, cfg.workers)
    best, best_S, trace = np.inf, None, []
    for i, (val, S) in enumerate(samples):
        if val < best:
            best, best_S = val, S
        trace.append((i, best))
    return NormEstimate(best, False, best_S=best_S, trace=tuple(trace), p=red.p, warnings=red.warnings)


def _tril_to_params(L):
    p = L.shape[0]
    rows, cols = np.tril_indices(p, -1)
    return np.concatenate((np.real(np.diag(L)), L[rows, cols].real, L[rows, cols].imag))


def _params_to_tril(x, p):
    L = np.zeros((p, p), dtype=complex)
    L[np.diag_indices(p)] = x[:p]
    rows, cols = np.tril_indices(p, -1)
    half = rows.size
    L[rows, cols] = x[p : p + half] + 1j * x[p + half :]
    return L


def _factor_objective(red, x):
    L = _params_to_tril(x, red.p)
    d = np.abs(np.diag(L))
    if d.min() <= d.max() / np.sqrt(MAX_CONDITION):
        return np.inf
    L_inv = scipy.linalg.solve_triangular(L, np.eye(red.p), lower=True)
    return objective(red, L @ L.conj().T, L_inv.conj().T @ L_inv)


def _pattern_search(f, x, max_evals, rng, on_improve):
    # coordinate and random directions; grow the step after a success, halve it after a failed sweep
    best = f(x)
    evals = 1
    dim = x.size
    step = 0.25
    n_random = max(2, dim // 2)
    while evals < max_evals and step > 1e-12:
        improved = False
        dirs = np.vstack((np.eye(dim), rng.standard_normal((n_random, dim))))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        for d in dirs:
            for sgn in (1.0, -1.0):
                if evals >= max_evals:
                    break
                cand = x + sgn * step * d
                val = f(cand)
                evals += 1
                if val < best:
                    x, best = cand, val
                    improved = True
                    on_improve(evals, best)
                    break
            if improved:
                break
        step = step * 1.5 if improved else step * 0.5
    return x, best, evals


def refine(red, S0, cfg, rng=None):
    """
    Local derivative-free descent from a positive starting matrix.

    ``S`` is parameterised as ``L L^dag`` with ``L`` lower triangular (real
    diagonal, complex below), giving ``p**2`` real parameters. Half of the
    ``cfg.refine_max_evals`` budget goes to a pattern search over coordinate
    and random directions; the rest to a Nelder-Mead polish from the pattern
    search's best point, which copes better with the kinks of the
    largest-eigenvalue objective.

    :return: a :class:`NormEstimate` whose value never exceeds ``objective(red, S0)``.
    """
    p = red.p
    if p == 0:
        return NormEstimate(0.0, True, p=0)
    S0 = np.asarray(S0, dtype=complex)
    S0 = 0.5 * (S0 + S0.conj().T)
    S0 = S0 / np.linalg.norm(S0, 2)
    x0 = _tril_to_params(np.linalg.cholesky(S0))
    rng = rng if rng is not None else iteration_rng(cfg.seed, 0, stream=_REFINE)

    def f(x):
        return _factor_objective(red, x)

    trace = [(0, f(x0))]

    def on_improve(evals, val):
        trace.append((evals, val))

    budget = cfg.refine_max_evals
    x, best, evals = _pattern_search(f, x0, max(1, budget // 2), rng, on_improve)

    remaining = budget - evals
    if remaining > 0:
        state = {"evals": evals, "best": best, "x": x}

        def tracked(y):
            val = f(y)
            state["evals"] += 1
            if val < state["best"]:
                state["best"], state["x"] = val, np.array(y)
                on_improve(state["evals"], val)
            return val

        scipy.optimize.minimize(
            tracked,
            x,
            method="Nelder-Mead",
            options={"maxfev": remaining, "xatol": 1e-13, "fatol": 1e-15, "adaptive": True},
        )
        x, best = state["x"], state["best"]
    L = _params_to_tril(x, p)
    return NormEstimate(
        best, False, best_S=L @ L.conj().T, trace=tuple(trace), p=p, warnings=red.warnings
    )


def _reduced_estimate(red, cfg):
    est = random_search(red, cfg)
    if not cfg.refine or red.p == 0:
        return est
    ref = refine(red, est.best_S, cfg)
    offset = cfg.iterations
    trace = est.trace + tuple((offset + i, min(v, est.value)) for i, v in ref.trace)
    if ref.value < est.value:
        return replace(est, value=ref.value, best_S=ref.best_S, trace=trace)
    return replace(est, trace=trace)


def cb_norm(rep, cfg=SearchConfig()):
    """
    CB norm of the map ``rep``.

    Completely positive maps take the exact route ``||phi(I)||``. Anything
    else is reduced to independent families and handed to
    :func:`random_search` (and :func:`refine` if ``cfg.refine``); the value
    is then an upper bound.
    """
    if is_cp(rep, CP_TOL):
        warnings = ()
        lam = choi_min_eigenvalue(rep)
        J = choi(rep).J
        # negative eigenvalues at round-off level are not worth flagging
        if lam < -ROUNDOFF_FACTOR * np.finfo(float).eps * max(operator_norm(J), 1.0):
            warnings = (f"borderline Choi spectrum (min eigenvalue {lam:.2e}) treated as CP",)
        p = numerical_rank(J)
        return NormEstimate(cp_cb_norm(rep), True, warnings=warnings, p=p)
    red = make_lin_indep(rep)
    for w in red.warnings:
        log.warning(w)
    return _reduced_estimate(red, cfg)


def diamond_norm(rep, cfg=SearchConfig()):
    """Diamond norm of ``rep``, computed as the CB norm of its dual."""
    return cb_norm(dual(rep), cfg)


def _max_norm_over_unitaries(rep, dim, cfg, stream):
    def sample(i):
        X = haar_unitary(dim, iteration_rng(cfg.seed, i, stream))
        return operator_norm(apply(rep, X))

    if rep.m == 0:
        return 0.0
    return max(_run_indexed(sample, cfg.iterations, cfg.workers))


def stabilized_lower_bound(rep, cfg=SearchConfig()):
    """
    Lower bound on ``||phi||_cb = ||id_k (x) phi||`` from random unitary inputs.

    Each Haar unitary ``X`` in ``M_{nk}`` has norm one, so
    ``||(id_k (x) phi)(X)||`` never exceeds the CB norm.
    """
    return _max_norm_over_unitaries(tensor_with_identity(rep, rep.k), rep.n * rep.k, cfg, _STABILIZED)


def phi_norm_lower_bound(rep, cfg=SearchConfig()):
    """Lower bound on the plain operator norm ``||phi||`` from random unitaries in ``M_n``."""
    return _max_norm_over_unitaries(rep, rep.n, cfg, _PLAIN)


@dataclass(frozen=True)
class BoundsReport:
    cb_upper: float
    cb_exact: bool
    cb_lower: float
    phi_norm_lower: float
    cap_factor: float

    def as_dict(self):
        return {
            "cb_upper": self.cb_upper,
            "cb_exact": self.cb_exact,
            "cb_lower": self.cb_lower,
            "phi_norm_lower": self.phi_norm_lower,
            "cap_factor": self.cap_factor,
        }


def bounds_report(rep, cfg=SearchConfig()):
    """
    Upper and lower bounds on the CB norm side by side.

    ``cap_factor = min(k, n**1.5)`` is the constant in
    ``||phi||_cb <= cap_factor * ||phi||``.

    :raises AssertionError: if the lower bound exceeds the upper bound by more than ``cfg.tol``.
    """
    est = cb_norm(rep, cfg)
    lower = stabilized_lower_bound(rep, cfg)
    plain = phi_norm_lower_bound(rep, cfg)
    if lower > est.value + cfg.tol:
        raise AssertionError(f"lower bound {lower} exceeds upper bound {est.value}")
    return BoundsReport(est.value, est.exact, lower, plain, float(min(rep.k, rep.n**1.5)))
