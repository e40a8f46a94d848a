import numpy as np
import pytest
from scipy.linalg import block_diag, expm

from helpers import CLASSES, random_spec
from isotropy.canonical import CanonicalSpec, EigenClass, canonical_form, h_block
from isotropy.isotropy import derive_problem, dimension, random_element, random_parameters, solve
from isotropy.verify import (NotUnipotent, nilpotency_order, splitting_check,
                             tangent_dimension, verify_element, verify_family)


def test_oracle_small_cases():
    assert tangent_dimension([[2.0]]) == 0
    spec = CanonicalSpec(EigenClass.zero(), (1,), (2,))
    assert tangent_dimension(canonical_form(spec)) == 2


def test_oracle_methods_agree():
    rng = np.random.default_rng(0)
    for kind in CLASSES:
        spec = random_spec(rng, kind, max_top=3)
        h = canonical_form(spec)
        assert tangent_dimension(h, method="dense") == tangent_dimension(h, method="split")


def test_oracle_invariant_under_orthogonal_congruence():
    rng = np.random.default_rng(1)
    spec = CanonicalSpec(EigenClass.positive_real(1.0), (2, 1), (1, 2), ((1,), (1, -1)))
    h = canonical_form(spec)
    x = 0.3 * (rng.normal(size=h.shape) + 1j * rng.normal(size=h.shape))
    q = expm(x - x.T)
    h2 = q.conj().T @ h @ q
    assert tangent_dimension(h2, method="dense") == tangent_dimension(h)


def test_oracle_input_checks():
    with pytest.raises(ValueError):
        tangent_dimension(np.ones((2, 3)))
    with pytest.raises(ValueError):
        tangent_dimension([[0, 1], [2, 0]])


def test_identity_verifies():
    spec = CanonicalSpec(EigenClass.nonreal(0.5 + 2j), (2,), (1,))
    rep = verify_element(spec, np.eye(spec.size), dims=True)
    assert rep.passed
    assert rep.residual_orth == 0 and rep.residual_cong == 0
    assert rep.tangent_dim_oracle == rep.formula_dim


def test_non_orthogonal_fails():
    spec = CanonicalSpec(EigenClass.zero(), (2,), (1,))
    rep = verify_element(spec, 2 * np.eye(2))
    assert not rep.passed and rep.residual_orth > 0
    with pytest.raises(ValueError):
        verify_element(spec, np.eye(3))


def test_random_elements_verify():
    rng = np.random.default_rng(2)
    for kind in CLASSES:
        spec = random_spec(rng, kind)
        assert verify_element(spec, random_element(spec, rng).Q).passed


def test_verify_family():
    rng = np.random.default_rng(3)
    spec = random_spec(rng, "zero")
    problem = derive_problem(spec)
    params, _ = random_parameters(problem, rng)
    fam = solve(problem, params)
    assert verify_family(problem, fam).passed
    fam.set(0, 0, 0, 3 * fam.coeff(0, 0, 0))
    assert not verify_family(problem, fam).passed


def test_nilpotency_orders():
    assert nilpotency_order(np.eye(4)) == 1
    assert nilpotency_order(np.eye(3) + np.eye(3, k=1)) == 3
    with pytest.raises(NotUnipotent):
        nilpotency_order(2 * np.eye(2))


def test_splitting_examples():
    a = CanonicalSpec(EigenClass.positive_real(1.0), (1,), (1,))
    b = CanonicalSpec(EigenClass.positive_real(2.0), (1,), (1,))
    assert splitting_check([a, b])
    z = CanonicalSpec(EigenClass.zero(), (2,), (1,))
    assert splitting_check([z, a])
    whole = block_diag(h_block(0, 2), [[1.0]])
    assert tangent_dimension(whole) == dimension(z) + 0
    assert splitting_check([z])
    with pytest.raises(ValueError):
        splitting_check([a, a])
    with pytest.raises(ValueError):
        splitting_check([CanonicalSpec(EigenClass.nonreal(1 + 2j), (1,), (1,)),
                         CanonicalSpec(EigenClass.nonreal(-1 + 2j), (1,), (1,))])
