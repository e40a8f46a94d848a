import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import prob_with_B, random_problem
from isotropy.canonical import CanonicalSpec, EigenClass
from isotropy.congruence import (VW, CongruenceProblem, FreeParameters, Unsolvable,
                                 base_solution, inertia, parameter_counts,
                                 solve_congruence, solve_congruence_alternating,
                                 solve_congruence_vw, vw_matrix)
from isotropy.isotropy import derive_problem, random_parameters, solve
from isotropy.toeplitz import ALTERNATING, PLAIN


def test_trivial_problem():
    problem = prob_with_B((1,), [np.eye(1)])
    params = FreeParameters.defaults(problem)
    assert np.allclose(solve_congruence(problem, params).assemble(), [[1]])


def test_two_by_two_solutions_are_signs():
    problem = prob_with_B((2,), [np.eye(1)], real=True)
    assert parameter_counts(problem)["total"] == 0
    for sign in (1, -1):
        params = FreeParameters.defaults(problem)
        params.a0[0] = np.array([[sign]], dtype=complex)
        X = solve_congruence(problem, params).assemble()
        assert np.allclose(X, sign * np.eye(2))


def test_alternating_scalar_cases():
    odd = prob_with_B((1,), [np.eye(1)], ALTERNATING)
    for sign in (1, -1):
        params = FreeParameters.defaults(odd)
        params.a0[0] = np.array([[sign]], dtype=complex)
        assert np.allclose(solve_congruence_alternating(odd, params).assemble(), [[sign]])
    even = prob_with_B((2,), [np.eye(1)], ALTERNATING)
    assert parameter_counts(even)["total"] == 1
    params = FreeParameters.defaults(even)
    params.a0[0] = np.array([[np.exp(0.4j)]])
    # alpha - j is odd, so the 1x1 skew parameter vanishes
    params.z[(0, 1)] = np.zeros((1, 1))
    X = solve_congruence_alternating(even, params).assemble()
    assert abs(abs(X[0, 0]) - 1) < 1e-12
    assert even.residual(X) < 1e-12


def test_inertia_mismatch_is_unsolvable():
    B = [[np.eye(1, dtype=complex), np.zeros((1, 1))]]
    C = [[-np.eye(1, dtype=complex), np.zeros((1, 1))]]
    problem = CongruenceProblem((2,), (1,), B, C, ALTERNATING)
    with pytest.raises(Unsolvable):
        solve_congruence_alternating(problem, FreeParameters(a0={0: np.eye(1)}))
    with pytest.raises(Unsolvable):
        base_solution(problem, 0)


def test_inertia_counts():
    assert inertia(np.diag([1.0, -2.0, 0.0, 3.0])) == (2, 1, 1)


@pytest.mark.parametrize("flavor,real", [(PLAIN, False), (PLAIN, True), (ALTERNATING, False)])
def test_random_problems_are_solved(flavor, real):
    rng = np.random.default_rng(11)
    for _ in range(10):
        problem = random_problem(rng, flavor, real)
        params, _ = random_parameters(problem, rng)
        fam = solve(problem, params)
        assert problem.residual(fam) <= problem.threshold()


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_plain_solver_property(seed):
    rng = np.random.default_rng(seed)
    problem = random_problem(rng, PLAIN)
    params, _ = random_parameters(problem, rng)
    fam = solve(problem, params)
    assert problem.residual(fam) <= problem.threshold()
    # free data shows up unchanged in the solution
    for r in range(problem.N):
        assert np.allclose(fam.coeff(r, r, 0), params.a0[r])
        for s in range(r):
            for n, c in enumerate(params.sub[(r, s)]):
                assert np.allclose(fam.coeff(r, s, n), c)


def test_skew_parameter_must_be_skew():
    problem = prob_with_B((2,), [np.eye(2)])
    params = FreeParameters.defaults(problem)
    params.z[(0, 1)] = np.eye(2, dtype=complex)
    with pytest.raises(ValueError):
        solve_congruence(problem, params)


def test_base_equation_is_checked():
    problem = prob_with_B((1,), [np.eye(2)])
    params = FreeParameters.defaults(problem)
    params.a0[0] = 2 * np.eye(2, dtype=complex)
    with pytest.raises(ValueError):
        solve_congruence(problem, params)


def test_missing_parameters():
    problem = prob_with_B((2, 1), [np.eye(1), np.eye(1)])
    params = FreeParameters.defaults(problem)
    del params.sub[(1, 0)]
    with pytest.raises(ValueError):
        solve_congruence(problem, params)


def test_wrong_flavor_dispatch():
    problem = prob_with_B((1,), [np.eye(1)], ALTERNATING)
    with pytest.raises(ValueError):
        solve_congruence(problem, FreeParameters.defaults(problem))


def test_problem_validation():
    with pytest.raises(ValueError):
        prob_with_B((1,), [np.array([[0, 1], [2, 0]])])
    with pytest.raises(ValueError):
        prob_with_B((1,), [np.zeros((1, 1))])
    with pytest.raises(ValueError):
        prob_with_B((1,), [1j * np.eye(1)], ALTERNATING)


def _vw_problem(mu, alpha, u, v):
    kk = np.diag([-mu ** 2, 1.0]).astype(complex)
    B = [[u * kk] + [np.zeros((2, 2), dtype=complex)] * (alpha - 1)]
    C = [[v * kk] + [np.zeros((2, 2), dtype=complex)] * (alpha - 1)]
    return CongruenceProblem((alpha,), (2,), B, C, VW, vw_mu=mu)


def test_vw_base_solution_is_scaled_identity():
    problem = _vw_problem(0.8, 1, 2.0, 3.0)
    assert np.allclose(base_solution(problem, 0), np.sqrt(1.5) * np.eye(2))


def test_vw_solution_keeps_shape():
    spec = CanonicalSpec(EigenClass.negative_real(0.8), (3, 1), (1, 2))
    problem = derive_problem(spec)
    rng = np.random.default_rng(3)
    params, _ = random_parameters(problem, rng)
    fam = solve_congruence_vw(problem, params)
    for (r, s), cs in fam.coeffs.items():
        hr, hs = problem.mu[r] // 2, problem.mu[s] // 2
        for n, c in enumerate(cs):
            prev = cs[n - 1][:hr, hs:] if n else None
            assert np.allclose(c, vw_matrix(c[:hr, :hs], c[:hr, hs:], 0.8, prev), atol=1e-9)


def test_vw_with_zero_w_is_plain():
    mu = 0.8
    problem = _vw_problem(mu, 1, 1.0, 1.0)
    params = FreeParameters.defaults(problem)
    params.a0[0] = vw_matrix([[-1.0]], [[0.0]], mu)
    fam = solve_congruence_vw(problem, params)
    assert np.allclose(fam.assemble(), -np.eye(2))


def test_vw_rejects_unstructured_base():
    problem = _vw_problem(0.8, 1, 1.0, 1.0)
    params = FreeParameters.defaults(problem)
    params.a0[0] = np.array([[1, 0], [0, -1]], dtype=complex)
    with pytest.raises(ValueError):
        solve_congruence_vw(problem, params)
