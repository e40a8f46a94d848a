import numpy as np
import pytest

from helpers import CLASSES, random_spec
from isotropy.canonical import CanonicalSpec, EigenClass, canonical_form, transform_kit
from isotropy.congruence import VW, parameter_counts
from isotropy.isotropy import (assemble_Q, derive_problem, dimension, parameter_layout,
                               parameters_from_vector, random_element, solve)
from isotropy.toeplitz import ALTERNATING, PLAIN, ToeplitzFamily, identity_family
from isotropy.verify import tangent_dimension

KINDS = list(CLASSES)


@pytest.mark.parametrize("eigen,alpha,mu,expected", [
    (EigenClass.positive_real(1.0), (3, 2), (1, 1), 2),
    (EigenClass.zero(), (1,), (2,), 2),
    (EigenClass.negative_real(1.0), (1,), (1,), 1),
    (EigenClass.nonreal(1 + 1j), (1,), (2,), 2),
    (EigenClass.positive_real(1.0), (1,), (3,), 3),
    (EigenClass.nonreal(1 + 1j), (2, 1), (1, 1), 2),
])
def test_dimension_examples(eigen, alpha, mu, expected):
    spec = CanonicalSpec(eigen, alpha, mu)
    assert dimension(spec) == expected
    assert tangent_dimension(canonical_form(spec)) == expected


def test_derive_problem_flavors():
    pos = derive_problem(CanonicalSpec(EigenClass.positive_real(1.0), (2,), (2,)))
    assert pos.flavor == PLAIN and pos.real
    assert np.allclose(pos.B[0][0], np.eye(2))
    zero = derive_problem(CanonicalSpec(EigenClass.zero(), (2, 1), (2, 1), ((1, -1), (1,))))
    assert zero.flavor == ALTERNATING
    assert np.allclose(zero.B[0][0], np.diag([1, -1]))
    neg = derive_problem(CanonicalSpec(EigenClass.negative_real(0.5), (2,), (1,)))
    assert neg.flavor == VW and neg.mu == (2,)
    assert np.allclose(neg.B[0][0], np.diag([-0.25, 1.0]))


@pytest.mark.parametrize("kind", KINDS)
def test_identity_family_gives_identity(kind):
    spec = CanonicalSpec(CLASSES[kind], (3, 1), (1, 2))
    problem = derive_problem(spec)
    el = assemble_Q(spec, identity_family(spec.alpha, problem.mu, problem.family_flavor))
    assert np.allclose(el.Q, np.eye(spec.size))
    assert el.residual_orth < 1e-12 and el.residual_cong < 1e-12


def test_sign_element():
    spec = CanonicalSpec(EigenClass.positive_real(1.0), (1,), (1,))
    fam = ToeplitzFamily((1,), (1,), PLAIN, {(0, 0): [-np.eye(1)]})
    assert np.allclose(assemble_Q(spec, fam).Q, [[-1]])


def test_assemble_refuses_non_solutions():
    spec = CanonicalSpec(EigenClass.positive_real(1.0), (2,), (1,))
    fam = ToeplitzFamily((2,), (1,), PLAIN, {(0, 0): [2 * np.eye(1), np.zeros((1, 1))]})
    with pytest.raises(ValueError):
        assemble_Q(spec, fam)


@pytest.mark.parametrize("kind", KINDS)
def test_random_elements_pass(kind):
    rng = np.random.default_rng(21)
    for _ in range(8):
        spec = random_spec(rng, kind)
        el = random_element(spec, rng)
        assert el.passes(canonical_form(spec)), spec


@pytest.mark.parametrize("kind", KINDS)
def test_parameter_count_is_dimension(kind):
    rng = np.random.default_rng(22)
    for _ in range(10):
        spec = random_spec(rng, kind)
        assert parameter_counts(derive_problem(spec))["total"] == dimension(spec)


@pytest.mark.parametrize("kind", KINDS)
def test_parametrization_is_immersive(kind):
    # the map from coordinates to Q has full rank at the base point
    rng = np.random.default_rng(23)
    for _ in range(3):
        spec = random_spec(rng, kind, max_top=3, max_n=2)
        problem = derive_problem(spec)
        layout = parameter_layout(problem)
        kit = transform_kit(spec)
        if layout.dim == 0:
            continue
        theta0 = rng.uniform(-0.3, 0.3, layout.dim)

        def q_of(theta):
            fam = solve(problem, parameters_from_vector(problem, theta, layout))
            q = assemble_Q(spec, fam, kit, problem).Q
            return np.r_[q.real.ravel(), q.imag.ravel()]

        h = 1e-6
        base = q_of(theta0)
        jac = np.column_stack([(q_of(theta0 + h * e) - base) / h for e in np.eye(layout.dim)])
        s = np.linalg.svd(jac, compute_uv=False)
        assert (s > 1e-6 * s[0]).sum() == dimension(spec)


def test_wrong_theta_length():
    spec = CanonicalSpec(EigenClass.zero(), (1,), (2,))
    with pytest.raises(ValueError):
        parameters_from_vector(derive_problem(spec), [0.0] * 5)
