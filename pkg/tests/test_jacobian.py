import numpy as np
import pytest
from conftest import admissible_gamma, charpoly_roots, simplex_points
from hypothesis import given
from hypothesis import strategies as st

from lefcert.dfmap import DfMap, homotopy_map
from lefcert.errors import CornerPoint, NotAFixedPoint, StepTooLarge
from lefcert.jacobian import (
    column_sum_max_abs,
    finite_difference_jacobian,
    fixed_point_jacobian,
    full_jacobian,
    reduced_jacobian,
)
from lefcert.linalg import df_spectrum_via_symmetrization
from lefcert.simplex import InfluenceWeights, barycenter, corner, make_simplex_point, sample_interior
from lefcert.solver import newton_refine, picard_solve

# closed form at the uniform fixed point, n = 3: diag x_i = 1/3, off-diag -x_i x_j/(1-x_j) = -1/6
UNIFORM_J = np.full((3, 3), -1 / 6) + np.eye(3) * (1 / 3 + 1 / 6)


def uniform_map(n=3):
    return DfMap(InfluenceWeights.uniform(n))


def test_full_jacobian_uniform_barycenter():
    J = full_jacobian(uniform_map(), barycenter(3))
    np.testing.assert_allclose(J, UNIFORM_J, rtol=0, atol=1e-15)


def test_full_jacobian_rejects_corner():
    with pytest.raises(CornerPoint):
        full_jacobian(uniform_map(), corner(3, 0))


@given(admissible_gamma(), st.data())
def test_column_sums_vanish_and_sign_pattern(gamma, data):
    m = DfMap(InfluenceWeights(gamma))
    x = make_simplex_point(data.draw(simplex_points(len(gamma), margin=1e-3)))
    J = full_jacobian(m, x)
    assert column_sum_max_abs(J) <= 1e-11
    assert np.all(np.diag(J) > 0)
    assert np.all(J[~np.eye(len(gamma), dtype=bool)] < 0)


def test_reduced_jacobian_examples():
    np.testing.assert_allclose(reduced_jacobian(UNIFORM_J), 0.5 * np.eye(2), rtol=0, atol=1e-15)
    np.testing.assert_array_equal(reduced_jacobian(np.zeros((4, 4))), np.zeros((3, 3)))


def test_reduced_jacobian_is_entrywise_difference():
    J = np.arange(16.0).reshape(4, 4)
    G = reduced_jacobian(J)
    for i in range(3):
        for j in range(3):
            assert G[i, j] == J[i, j] - J[i, 3]


@pytest.mark.parametrize("n", [3, 4, 5, 7])
def test_reduced_spectrum_is_nonzero_full_spectrum(n):
    rng = np.random.default_rng(n)
    for _ in range(10):
        gamma = rng.dirichlet(np.ones(n) * 3)
        if gamma.max() >= 0.5:
            continue
        m = DfMap(InfluenceWeights(gamma / gamma.sum()))
        x = sample_interior(n, 1, int(rng.integers(2**31)), 0.1 / n)[0]
        J = full_jacobian(m, x)
        full = df_spectrum_via_symmetrization(J, x.coords)
        red = np.sort(np.linalg.eigvals(reduced_jacobian(J)).real)
        np.testing.assert_allclose(np.sort(np.append(red, 0.0)), full, rtol=0, atol=1e-9)


def test_fixed_point_jacobian_uniform():
    J = fixed_point_jacobian(uniform_map(), barycenter(3))
    np.testing.assert_allclose(J, UNIFORM_J, rtol=0, atol=1e-15)
    assert abs(np.trace(J) - 1.0) <= 1e-10


def test_fixed_point_jacobian_requires_fixed_point():
    with pytest.raises(NotAFixedPoint):
        fixed_point_jacobian(DfMap.from_gamma([0.4, 0.35, 0.25]), barycenter(3))


@pytest.mark.parametrize("gamma", [[0.4, 0.35, 0.25], [0.1, 0.2, 0.3, 0.4], [0.05, 0.15, 0.2, 0.25, 0.35]])
def test_fixed_point_jacobian_matches_general_formula(gamma):
    m = DfMap.from_gamma(gamma)
    rec = newton_refine(m, picard_solve(m, barycenter(len(gamma))).location)
    Jfp = fixed_point_jacobian(m, rec.location)
    np.testing.assert_allclose(Jfp, full_jacobian(m, rec.location), rtol=0, atol=1e-10)
    assert abs(np.trace(Jfp) - 1.0) <= 1e-10


def test_finite_differences_match_analytic():
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(30):
        n = int(rng.integers(3, 8))
        gamma = rng.dirichlet(np.ones(n) * 2)
        if gamma.max() >= 0.5:
            continue
        m = DfMap(InfluenceWeights(gamma / gamma.sum()))
        x = sample_interior(n, 1, int(rng.integers(2**31)), 0.1)[0]
        J = full_jacobian(m, x)
        Jfd = finite_difference_jacobian(m, x, 1e-5)
        worst = max(worst, float(np.max(np.abs(Jfd - J) / np.abs(J))))
    assert worst <= 1e-6


def test_finite_difference_of_identity():
    m = DfMap.from_gamma([0.4, 0.35, 0.25])
    x = make_simplex_point([0.5, 0.3, 0.2])
    np.testing.assert_allclose(finite_difference_jacobian(homotopy_map(m, 1.0), x, 1e-5), np.eye(3), atol=1e-9)


def test_finite_difference_step_guard():
    m = DfMap.from_gamma([0.4, 0.35, 0.25])
    x = make_simplex_point([0.995, 0.003, 0.002])
    with pytest.raises(StepTooLarge):
        finite_difference_jacobian(m, x, 1e-2)


def test_corner_spectrum_by_finite_differences():
    # approaching e_1 the Jacobian tends to the corner form with eigenvalue (1-g1)/g1
    gamma = np.array([0.3, 0.45, 0.25])
    m = DfMap(InfluenceWeights(gamma))
    x = make_simplex_point([1 - 2e-4, 1e-4, 1e-4])
    J = finite_difference_jacobian(m, x, 1e-5)
    eig = charpoly_roots(J)
    np.testing.assert_allclose(eig[-1], (1 - 0.3) / 0.3, rtol=1e-2)
    np.testing.assert_allclose(eig[:-1], 0.0, atol=1e-2)
    # corner entries: dF_1/dx_1 = (1-g1)/g1, dF_i/dx_1 = -g_i/g1, others 0
    np.testing.assert_allclose(J[:, 0], [(1 - 0.3) / 0.3, -0.45 / 0.3, -0.25 / 0.3], rtol=1e-2)
