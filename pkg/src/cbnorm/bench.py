"""Timing of the reduction and of a single objective evaluation as the dimension grows."""

import json
import time

import numpy as np

from .minimizer import SearchConfig, iteration_rng, objective
from .numerics import random_positive_with_inverse
from .reduction import make_lin_indep
from .superop import GCKRep


def random_rep(n, m, rng):
    """Map ``M_n -> M_n`` with ``m`` Gaussian terms (generic, so ``p = min(m, n**2)``)."""
    def gauss():
        return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))

    return GCKRep(n, n, tuple((gauss(), gauss()) for _ in range(m)))


def time_dimension(n, iterations=20, seed=0):
    rng = np.random.default_rng(seed)
    rep = random_rep(n, n * n + 2, rng)
    t0 = time.perf_counter()
    red = make_lin_indep(rep)
    t_reduce = time.perf_counter() - t0

    cfg = SearchConfig(iterations=iterations, seed=seed)
    t0 = time.perf_counter()
    for i in range(iterations):
        P, Q = random_positive_with_inverse(red.p, cfg.eigen_floor, 1.0, iteration_rng(seed, i))
        objective(red, P, Q)
    t_iter = (time.perf_counter() - t0) / iterations
    return {"n": n, "m": rep.m, "p": red.p, "reduction_s": t_reduce, "step4_per_iteration_s": t_iter}


def benchmark_report(dims=(2, 4, 8), iterations=20, seed=0, path=None):
    """Time every dimension in ``dims``; optionally write the rows as JSON to ``path``."""
    rows = [time_dimension(n, iterations, seed) for n in dims]
    if path is not None:
        with open(path, "w") as fh:
            json.dump({"rows": rows}, fh, indent=1)
    return rows
