import numpy as np
import pytest

from cbnorm.numerics import coordinates_in_basis, numerical_rank
from cbnorm.reduction import make_lin_indep, tensor_rank
from cbnorm.superop import GCKRep, choi, from_unitary_pair, identity_map, same_action, zero_map

from conftest import random_matrix

QUARTER_ANGLES = (3 * np.pi / 4, np.pi, 5 * np.pi / 4)


def padded_rep(rng, n, k, base, extra):
    """``base`` random terms followed by ``extra`` terms built from them."""
    A = [random_matrix(rng, k, n) for _ in range(base)]
    B = [random_matrix(rng, n, k) for _ in range(base)]
    for _ in range(extra):
        i, j = rng.integers(base, size=2)
        c = complex(*rng.standard_normal(2))
        if rng.random() < 0.5:
            A.append(c * A[i])
            B.append(B[j])
        else:
            A.append(A[i] + A[j])
            B.append(c * B[j])
    return GCKRep(n, k, tuple(zip(A, B)))


def assert_reduced(rep, red):
    assert same_action(red.as_gck(), rep, atol=1e-10)
    p = red.p
    assert p <= rep.n * rep.k
    assert numerical_rank(red.E.reshape(p, -1)) == p
    assert numerical_rank(red.F.reshape(p, -1)) == p


def test_duplicated_identity_collapses():
    rep = GCKRep(2, 2, ((np.eye(2), np.eye(2)), (np.eye(2), np.eye(2))))
    red = make_lin_indep(rep)
    assert red.p == 1
    term = red.as_gck().terms[0]
    X = np.array([[1, 2j], [3, 4]])
    assert np.allclose(term[0] @ X @ term[1], 2 * X)


def test_quarter_circle_rank_two():
    U = np.diag(np.exp(1j * np.array(QUARTER_ANGLES)))
    red = make_lin_indep(from_unitary_pair(U, np.eye(3)))
    assert red.p == 2


def test_proportional_right_factors(rng):
    A1, A2 = random_matrix(rng, 2, 2), random_matrix(rng, 2, 2)
    B1 = random_matrix(rng, 2, 2)
    rep = GCKRep(2, 2, ((A1, B1), (A2, 2 * B1)))
    red = make_lin_indep(rep)
    assert red.p == 1
    assert_reduced(rep, red)


def test_tensor_rank_examples(rng):
    assert tensor_rank(identity_map(3)) == 1
    assert tensor_rank(zero_map(2, 3)) == 0
    rep = padded_rep(rng, 2, 3, 3, 4)
    assert tensor_rank(rep) == numerical_rank(choi(rep).J) == 3


def test_cancelling_terms_give_zero_map(rng):
    A, B = random_matrix(rng, 2, 2), random_matrix(rng, 2, 2)
    red = make_lin_indep(GCKRep(2, 2, ((A, B), (A, -B))))
    assert red.p == 0


@pytest.mark.parametrize("n,k", [(1, 1), (2, 2), (2, 3), (3, 2), (3, 3)])
def test_reduction_invariants(rng, n, k):
    for _ in range(5):
        base = int(rng.integers(1, n * k + 1))
        rep = padded_rep(rng, n, k, base, int(rng.integers(0, 2 * n * k)))
        red = make_lin_indep(rep)
        assert_reduced(rep, red)
        assert red.p == numerical_rank(choi(rep).J)


def test_overfull_family_is_capped(rng):
    # more than nk generic terms: rank saturates at nk
    rep = padded_rep(rng, 2, 2, 7, 0)
    red = make_lin_indep(rep)
    assert red.p == 4
    assert_reduced(rep, red)


@pytest.mark.parametrize("canonical", [True, False])
def test_idempotent(rng, canonical):
    rep = padded_rep(rng, 3, 3, 4, 5)
    once = make_lin_indep(rep, canonical=canonical)
    twice = make_lin_indep(once.as_gck(), canonical=canonical)
    assert twice.p == once.p
    assert_reduced(rep, twice)


def test_span_invariance(rng):
    rep = padded_rep(rng, 2, 2, 3, 2)
    other = padded_rep(rng, 2, 2, 1, 0)
    # same map written two ways: shuffled terms plus a cancelling pair
    terms = list(rep.terms)[::-1] + [other.terms[0], (other.terms[0][0], -other.terms[0][1])]
    alt = GCKRep(2, 2, tuple(terms))
    e1 = list(make_lin_indep(rep).E.reshape(3, -1))
    e2 = list(make_lin_indep(alt, canonical=False).E.reshape(3, -1))
    for v in e1:
        coordinates_in_basis(v, e2, tol=1e-9)
    for v in e2:
        coordinates_in_basis(v, e1, tol=1e-9)


def test_near_dependence_warning(rng):
    A1, A2 = random_matrix(rng, 2, 2), random_matrix(rng, 2, 2)
    B1 = random_matrix(rng, 2, 2)
    B2 = B1 + 5e-10 * random_matrix(rng, 2, 2)
    red = make_lin_indep(GCKRep(2, 2, ((A1, B1), (A2, B2))))
    assert red.p == 2
    assert any("near-dependent" in w for w in red.warnings)
    assert make_lin_indep(identity_map(2)).warnings == ()
