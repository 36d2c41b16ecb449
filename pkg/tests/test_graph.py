import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lefcert.errors import InvalidInteractionMatrix, NotStronglyConnected, StarGraphDetected
from lefcert.graph import InteractionMatrix, gamma_from_matrix, left_perron_vector, validate_connectivity


def ring(n):
    C = np.zeros((n, n))
    for i in range(n):
        C[i, (i + 1) % n] = 1.0
    return C


def complete(n):
    return (np.ones((n, n)) - np.eye(n)) / (n - 1)


def star(n):
    C = np.zeros((n, n))
    C[0, 1:] = 1.0 / (n - 1)
    C[1:, 0] = 1.0
    return C


def random_stochastic(n, rng, density=0.6):
    while True:
        C = rng.random((n, n)) * (rng.random((n, n)) < density)
        np.fill_diagonal(C, 0.0)
        if np.all(C.sum(axis=1) > 0) and validate_connectivity(C):
            return C / C.sum(axis=1, keepdims=True)


@pytest.mark.parametrize("n", [3, 4, 7])
def test_ring_and_complete_give_uniform(n):
    for C in (ring(n), complete(n)):
        np.testing.assert_allclose(gamma_from_matrix(C).gamma, 1 / n, atol=1e-12)


@pytest.mark.parametrize("n", [3, 5, 8])
def test_star_is_rejected(n):
    with pytest.raises(StarGraphDetected) as info:
        gamma_from_matrix(star(n))
    assert info.value.index == 0
    # the hub carries exactly half the weight
    assert abs(left_perron_vector(star(n))[0] - 0.5) <= 1e-12


def test_connectivity():
    assert validate_connectivity(ring(5))
    block = np.zeros((4, 4))
    block[0, 1] = block[1, 0] = block[2, 3] = block[3, 2] = 1.0
    assert not validate_connectivity(block)
    C = complete(4)
    C[:, 2] = 0.0  # nobody listens to node 2
    assert not validate_connectivity(C)
    with pytest.raises(NotStronglyConnected):
        InteractionMatrix(block)


@pytest.mark.parametrize(
    "entries",
    [
        np.zeros((2, 2)),
        np.ones((3, 4)) / 4,
        complete(3) + np.eye(3) * 0.0 + np.diag([0.5, 0, 0]),
        np.array([[0, 1.5, -0.5], [0.5, 0, 0.5], [0.5, 0.5, 0]]),
        np.array([[0, 0.6, 0.6], [0.5, 0, 0.5], [0.5, 0.5, 0]]),
        np.array([[0, np.nan, 1], [0.5, 0, 0.5], [0.5, 0.5, 0]]),
    ],
)
def test_invalid_matrices(entries):
    with pytest.raises(InvalidInteractionMatrix):
        InteractionMatrix(entries)


@given(st.integers(3, 9), st.integers(0, 2**32 - 1), st.data())
@settings(max_examples=50)
def test_left_eigenvector_and_equivariance(n, seed, data):
    rng = np.random.default_rng(seed)
    C = random_stochastic(n, rng)
    g = left_perron_vector(C)
    assert np.max(np.abs(g @ C - g)) <= 1e-11
    assert abs(g.sum() - 1.0) <= 1e-12 and np.all(g > 0)
    p = np.array(data.draw(st.permutations(range(n))))
    P = np.eye(n)[p]  # (P v)_i = v_{p[i]}
    g2 = left_perron_vector(P @ C @ P.T)
    np.testing.assert_allclose(g2, P @ g, atol=1e-11)
