import math

import numpy as np
import pytest

from cbnorm.closedform import unitary_diff_norm
from cbnorm.errors import ConditioningError, ValidationError
from cbnorm.minimizer import (
    SearchConfig,
    bounds_report,
    cb_norm,
    diamond_norm,
    objective,
    phi_norm_lower_bound,
    random_search,
    refine,
    stabilized_lower_bound,
)
from cbnorm.numerics import haar_unitary, random_positive_with_inverse
from cbnorm.reduction import ReducedRep, make_lin_indep
from cbnorm.superop import (
    ChoiMatrix,
    choi,
    from_choi,
    from_kraus,
    from_unitary_pair,
    identity_map,
    star,
    zero_map,
)

from conftest import random_matrix

SQRT2 = math.sqrt(2)
QUARTER_U = np.diag(np.exp(1j * np.array([3 * np.pi / 4, np.pi, 5 * np.pi / 4])))


@pytest.fixture(scope="module")
def quarter_map():
    return from_unitary_pair(QUARTER_U, np.eye(3))


def test_search_config_validation():
    for bad in ({"iterations": 0}, {"eigen_floor": 0.0}, {"eigen_floor": 1.0}, {"seed": -1},
                {"refine_max_evals": 0}, {"tol": -1.0}, {"workers": 0}):
        with pytest.raises(ValidationError):
            SearchConfig(**bad)


def test_objective_examples(quarter_map):
    red = make_lin_indep(identity_map(2))
    assert objective(red, np.eye(1)) == pytest.approx(1.0)
    raw = make_lin_indep(quarter_map, canonical=False)
    assert raw.p == 2
    assert objective(raw, np.eye(2)) == pytest.approx(2.0)


def test_objective_scale_invariance(rng, quarter_map):
    red = make_lin_indep(quarter_map)
    for _ in range(20):
        S, _ = random_positive_with_inverse(2, 1e-3, 1, rng)
        base = objective(red, S)
        for c in (0.1, 2, 5, 10):
            assert abs(objective(red, c * S) - base) <= 1e-12 * base


def test_objective_accepts_general_invertible(rng, quarter_map):
    red = make_lin_indep(quarter_map)
    S = random_matrix(rng, 2, 2)
    assert objective(red, S) == pytest.approx(objective(red, S, np.linalg.inv(S)), rel=1e-12)


def test_objective_rejects_singular(quarter_map):
    red = make_lin_indep(quarter_map)
    with pytest.raises(ConditioningError):
        objective(red, np.array([[1.0, 1.0], [1.0, 1.0]]))
    with pytest.raises(ValidationError):
        objective(red, np.eye(3))


def test_upper_bound_soundness_unitary_difference(rng):
    for _ in range(3):
        U = haar_unitary(3, rng)
        exact = unitary_diff_norm(U)
        red = make_lin_indep(from_unitary_pair(U, np.eye(3)))
        for _ in range(1000):
            P, Q = random_positive_with_inverse(red.p, 1e-3, 1, rng)
            assert objective(red, P, Q) >= exact - 1e-8


def test_upper_bound_soundness_cp(rng):
    K = [random_matrix(rng, 2, 2) for _ in range(3)]
    rep = from_kraus(K)
    exact = cb_norm(rep).value
    red = make_lin_indep(rep)
    for _ in range(1000):
        P, Q = random_positive_with_inverse(red.p, 1e-3, 1, rng)
        assert objective(red, P, Q) >= exact - 1e-8


def test_random_search_examples(quarter_map):
    est = random_search(make_lin_indep(identity_map(3)), SearchConfig(iterations=10))
    assert est.value == pytest.approx(1.0, abs=1e-10) and not est.exact
    est = random_search(make_lin_indep(quarter_map), SearchConfig(iterations=100))
    assert SQRT2 - 1e-8 <= est.value <= 2
    assert est.value == pytest.approx(1.449, abs=0.05)
    zero = random_search(make_lin_indep(zero_map(2, 2)), SearchConfig())
    assert zero.value == 0 and zero.exact


def test_random_search_trace_and_determinism(quarter_map):
    red = make_lin_indep(quarter_map)
    a = random_search(red, SearchConfig(iterations=200, seed=9))
    b = random_search(red, SearchConfig(iterations=200, seed=9, workers=4))
    assert a.value == b.value and a.trace == b.trace
    assert np.array_equal(a.best_S, b.best_S)
    vals = [v for _, v in a.trace]
    assert [i for i, _ in a.trace] == list(range(200))
    assert all(x >= y for x, y in zip(vals, vals[1:]))
    assert vals[-1] == a.value
    assert objective(red, a.best_S) == pytest.approx(a.value, rel=1e-12)


def test_random_search_seed_changes_result(quarter_map):
    red = make_lin_indep(quarter_map)
    a = random_search(red, SearchConfig(iterations=50, seed=1))
    b = random_search(red, SearchConfig(iterations=50, seed=2))
    assert a.value != b.value


def test_refine_examples(quarter_map):
    red = make_lin_indep(identity_map(2))
    est = refine(red, np.eye(1), SearchConfig())
    assert est.value == pytest.approx(1.0, abs=1e-12)

    red = make_lin_indep(quarter_map)
    start = random_search(red, SearchConfig(iterations=100))
    est = refine(red, start.best_S, SearchConfig())
    assert abs(est.value - SQRT2) <= 1e-3
    assert est.value <= start.value + 1e-8
    vals = [v for _, v in est.trace]
    assert all(x >= y for x, y in zip(vals, vals[1:]))


def test_refine_respects_eval_cap(quarter_map):
    red = make_lin_indep(quarter_map)
    est = refine(red, np.eye(2), SearchConfig(refine_max_evals=5))
    assert est.trace[-1][0] <= 5
    assert est.value <= objective(red, np.eye(2))


def test_cb_norm_examples(quarter_map):
    est = cb_norm(from_kraus([np.eye(2)]))
    assert est.exact and est.value == pytest.approx(1.0)
    assert est.best_S is None and est.trace == ()
    est = cb_norm(from_kraus([2 * np.eye(2)]))
    assert est.exact and est.value == pytest.approx(4.0)
    est = cb_norm(quarter_map, SearchConfig(iterations=100))
    assert not est.exact and 1.4142 <= est.value <= 1.47
    assert est.p == 2


def test_cb_norm_refine_improves(quarter_map):
    plain = cb_norm(quarter_map, SearchConfig(iterations=100))
    refined = cb_norm(quarter_map, SearchConfig(iterations=100, refine=True))
    assert SQRT2 - 1e-8 <= refined.value <= plain.value
    vals = [v for _, v in refined.trace]
    assert all(x >= y for x, y in zip(vals, vals[1:]))


def test_borderline_cp_warning():
    rep = from_kraus([np.eye(2)])
    # a tiny negative Choi eigenvalue inside the CP tolerance
    v = np.array([1, 0, 0, -1]) / math.sqrt(2)
    J = choi(rep).J - 5e-10 * np.outer(v, v)
    est = cb_norm(from_choi(ChoiMatrix(2, 2, J)))
    assert est.exact and est.warnings
    assert cb_norm(rep).warnings == ()


def test_diamond_norm_examples(rng):
    K = np.array([random_matrix(rng, 3, 2) for _ in range(2)])
    S = np.einsum("tai,taj->ij", K.conj(), K)
    w, Q = np.linalg.eigh(S)
    K = K @ (Q / np.sqrt(w)) @ Q.conj().T
    est = diamond_norm(from_kraus(list(K)))
    assert est.exact and est.value == pytest.approx(1.0, abs=1e-10)
    assert diamond_norm(identity_map(3)).value == pytest.approx(1.0)
    U, V = haar_unitary(3, rng), haar_unitary(3, rng)
    exact = unitary_diff_norm(V.conj().T @ U)
    est = diamond_norm(from_unitary_pair(U, V), SearchConfig(iterations=300, refine=True))
    assert exact - 1e-8 <= est.value <= exact * 1.01


def test_star_symmetry(rng):
    for _ in range(3):
        U = haar_unitary(3, rng)
        exact = unitary_diff_norm(U)
        rep = from_unitary_pair(U, np.eye(3))
        cfg = SearchConfig(iterations=300, refine=True)
        for r in (rep, star(rep)):
            val = cb_norm(r, cfg).value
            assert exact - 1e-8 <= val <= exact * 1.01


def test_stabilized_lower_bound_examples(quarter_map):
    cfg = SearchConfig(iterations=200)
    assert stabilized_lower_bound(identity_map(2), cfg) <= 1 + 1e-10
    assert stabilized_lower_bound(identity_map(2), cfg) == pytest.approx(1.0)
    assert stabilized_lower_bound(zero_map(2, 2), cfg) == 0.0
    lb = stabilized_lower_bound(quarter_map, SearchConfig(iterations=1000))
    assert 1.0 < lb <= SQRT2 + 1e-12


def test_phi_norm_lower_bound(quarter_map):
    val = phi_norm_lower_bound(quarter_map, SearchConfig(iterations=200))
    assert 0 < val <= SQRT2 + 1e-12


def test_bounds_report_examples(rng, quarter_map):
    rep = bounds_report(identity_map(2), SearchConfig(iterations=50))
    assert rep.cb_upper == pytest.approx(1, abs=1e-8) and rep.cb_lower == pytest.approx(1, abs=1e-8)
    rep = bounds_report(from_kraus([random_matrix(rng, 2, 2)]), SearchConfig(iterations=50))
    assert rep.cb_exact and rep.cb_lower <= rep.cb_upper
    rep = bounds_report(quarter_map, SearchConfig(iterations=500))
    assert 1 < rep.cb_lower <= SQRT2 <= rep.cb_upper <= 2
    assert rep.cap_factor == 3
    assert set(rep.as_dict()) == {"cb_upper", "cb_exact", "cb_lower", "phi_norm_lower", "cap_factor"}


def test_empty_reduced_rep_search():
    red = ReducedRep(2, 2, np.zeros((0, 2, 2), complex), np.zeros((0, 2, 2), complex))
    assert refine(red, np.zeros((0, 0)), SearchConfig()).value == 0.0
