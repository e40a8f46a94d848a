"""
Isotropy groups of canonical forms under complex orthogonal *congruence.

For a canonical form ``H`` the isotropy group consists of the complex
orthogonal ``Q`` with ``Q^* H Q = H``.  Such ``Q`` satisfy
``H Q = conj(Q) H``, so ``conj(Q)`` solves ``H conj(Y) = Y H``.  The solutions
``Y`` are obtained from block Toeplitz families through the transform kit of
:mod:`isotropy.canonical`, and orthogonality of ``Y`` becomes the congruence
equation handled by :mod:`isotropy.congruence`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import expm

from .canonical import (NEGATIVE_REAL, NONREAL, POSITIVE_REAL, ZERO,
                        CanonicalSpec, TransformKit, canonical_form,
                        transform_kit)
from .congruence import (VW, CongruenceProblem, FreeParameters,
                         base_solution, parameter_counts, solve_congruence,
                         solve_congruence_alternating, vw_matrix, vw_skew,
                         z_kind)
from .kernel import (complex_basis, real_basis, skew_hermitian_basis,
                     skew_symmetric_basis)
from .toeplitz import ALTERNATING, PLAIN, ToeplitzFamily

__all__ = [
    "IsotropyElement", "dimension", "derive_problem", "assemble_Q",
    "family_matrix", "ParameterLayout", "parameter_layout",
    "parameters_from_vector", "coordinate_weights", "random_parameters",
    "random_element",
]


def dimension(spec: CanonicalSpec) -> int:
    """Real dimension of the isotropy group of ``canonical_form(spec)``.

    Examples
    --------
    >>> from isotropy.canonical import EigenClass
    >>> dimension(CanonicalSpec(EigenClass.zero(), (1,), (2,)))
    2
    """
    kind = spec.eigen.kind
    al, mu = spec.alpha, spec.mu
    total = 0
    for r, (a, m) in enumerate(zip(al, mu)):
        cross = sum(a * mu[s] for s in range(r))
        if kind == POSITIVE_REAL:
            total += a * m * (m - 1) // 2 + m * cross
        elif kind == NONREAL:
            total += a * m * (m - 1) + 2 * m * cross
        elif kind == NEGATIVE_REAL:
            total += m * (a * (2 * m - 1) + 4 * cross)
        else:
            total += a * m * m + 2 * m * cross
            total -= (a // 2) * m if a % 2 == 0 else ((a + 1) // 2) * m
    return int(total)


def derive_problem(spec: CanonicalSpec) -> CongruenceProblem:
    """Congruence problem whose solutions parametrize the isotropy group.

    ``positive_real``: real plain flavor with ``B = C`` the regrouped signs.
    ``zero``: alternating flavor with the same ``B``.  ``negative_real``: vw
    flavor with ``B_n^r = u_n^r K + u_{n-1}^r L``.  ``nonreal``: plain
    complex flavor with ``B = C = I``.
    """
    kind = spec.eigen.kind
    if kind in (POSITIVE_REAL, ZERO):
        B = [[np.diag(np.asarray(spec.eps[r], dtype=float)).astype(complex)]
             + [np.zeros((m, m), dtype=complex)] * (a - 1)
             for r, (a, m) in enumerate(zip(spec.alpha, spec.mu))]
        flavor = PLAIN if kind == POSITIVE_REAL else ALTERNATING
        return CongruenceProblem(spec.alpha, spec.mu, B, B, flavor,
                                 real=kind == POSITIVE_REAL)
    if kind == NONREAL:
        B = [[np.eye(m, dtype=complex)] + [np.zeros((m, m), dtype=complex)] * (a - 1)
             for a, m in zip(spec.alpha, spec.mu)]
        return CongruenceProblem(spec.alpha, spec.mu, B, B, PLAIN)
    mu = spec.eigen.value.real
    kit = transform_kit(spec)
    B = []
    for r, (a, m) in enumerate(zip(spec.alpha, spec.mu)):
        u = kit.u[r]
        kk = np.diag(np.r_[-mu ** 2 * np.ones(m), np.ones(m)]).astype(complex)
        ll = np.diag(np.r_[np.ones(m), np.zeros(m)]).astype(complex)
        B.append([u[n] * kk + (u[n - 1] * ll if n else 0) for n in range(a)])
    return CongruenceProblem(spec.alpha, spec.coeff_sizes(), B, B, VW, vw_mu=mu)


@dataclass
class IsotropyElement:
    """Element ``Q`` of the isotropy group with its residuals.

    ``residual_consim`` is ``||H Q - conj(Q) H||``, the consimilarity law
    satisfied by every element of the group.
    """
    Q: np.ndarray
    residual_orth: float
    residual_consim: float
    residual_cong: float

    @classmethod
    def measure(cls, H: np.ndarray, Q: np.ndarray) -> "IsotropyElement":
        n = Q.shape[0]
        return cls(Q,
                   float(np.linalg.norm(Q.T @ Q - np.eye(n))),
                   float(np.linalg.norm(H @ Q - Q.conj() @ H)),
                   float(np.linalg.norm(Q.conj().T @ H @ Q - H)))

    def passes(self, H: np.ndarray, tol: float = 1e-8) -> bool:
        n = self.Q.shape[0]
        bound = tol * (1 + np.linalg.norm(H))
        return (self.residual_orth <= tol * n and self.residual_consim <= bound
                and self.residual_cong <= bound)


def family_matrix(spec: CanonicalSpec, fam: ToeplitzFamily) -> np.ndarray:
    """Regrouped matrix ``X`` fed to the transform kit."""
    X = fam.assemble()
    if spec.eigen.kind == NONREAL:
        n = X.shape[0]
        out = np.zeros((2 * n, 2 * n), dtype=complex)
        out[:n, :n] = X
        out[n:, n:] = X.conj()
        return out
    return X


def assemble_Q(spec: CanonicalSpec, fam: ToeplitzFamily,
               kit: TransformKit | None = None,
               problem: CongruenceProblem | None = None) -> IsotropyElement:
    """Isotropy element built from a solution family of ``derive_problem(spec)``.

    Raises
    ------
    ValueError
        If `fam` does not solve the induced congruence problem.
    """
    if problem is None:
        problem = derive_problem(spec)
    res = problem.residual(fam)
    if not res <= problem.threshold():
        raise ValueError(f"family does not solve the congruence problem (residual {res:.3e})")
    if kit is None:
        kit = transform_kit(spec)
    Y = kit.consim_solution(family_matrix(spec, fam))
    return IsotropyElement.measure(canonical_form(spec), Y.conj())


@dataclass
class ParameterLayout:
    """Real coordinates of the free parameters of a problem.

    ``slots`` is a list of ``(group, key, basis)`` where ``group`` is
    ``"a0"``, ``"sub"`` or ``"z"`` and ``basis`` a list of matrices (or,
    for ``sub``, a list of coefficient lists).
    """
    problem: CongruenceProblem
    slots: list

    @property
    def dim(self) -> int:
        return sum(len(b) for _, _, b in self.slots)


def _vw_skew_basis(h: int, mu: float) -> list[np.ndarray]:
    zero = np.zeros((h, h), dtype=complex)
    out = [vw_skew(v, zero, mu) for v in skew_symmetric_basis(h)]
    out += [vw_skew(zero, w, mu) for w in skew_hermitian_basis(h)]
    return [z / np.linalg.norm(z) for z in out]


def _z_basis(problem: CongruenceProblem, r: int, j: int) -> list[np.ndarray]:
    m = problem.mu[r]
    kind = z_kind(problem.flavor, problem.alpha[r], j)
    if kind == "skew_hermitian":
        return skew_hermitian_basis(m)
    if kind == "vw":
        return _vw_skew_basis(m // 2, problem.vw_mu)
    return skew_symmetric_basis(m, real=problem.real)


def _lie_basis(problem: CongruenceProblem, r: int) -> list[np.ndarray]:
    """Basis of the Lie algebra of the group preserving ``B_0^r``."""
    b0 = problem.B[r][0]
    herm = problem.flavor == ALTERNATING and problem.alpha[r] % 2 == 0
    m = problem.mu[r]
    if herm:
        skews = skew_hermitian_basis(m)
    elif problem.flavor == VW:
        skews = _vw_skew_basis(m // 2, problem.vw_mu)
    else:
        skews = skew_symmetric_basis(m, real=problem.real)
    # unit directions keep the scale of the coordinates independent of B_0
    out = [np.linalg.solve(b0, s) for s in skews]
    return [y / np.linalg.norm(y) for y in out]


def _sub_basis(problem: CongruenceProblem, r: int, s: int) -> list[list[np.ndarray]]:
    mr, ms, a = problem.mu[r], problem.mu[s], problem.alpha[r]
    zero = np.zeros((mr, ms), dtype=complex)
    out = []
    if problem.flavor == VW:
        hr, hs = mr // 2, ms // 2
        z = np.zeros((hr, hs), dtype=complex)
        for n in range(a):
            for v in complex_basis(hr, hs):
                cs = [zero] * a
                cs = list(cs)
                cs[n] = vw_matrix(v, z, problem.vw_mu)
                out.append(cs)
            for w in complex_basis(hr, hs):
                cs = [zero] * a
                cs[n] = vw_matrix(z, w, problem.vw_mu)
                if n + 1 < a:
                    cs[n + 1] = vw_matrix(z, z, problem.vw_mu, w)
                out.append(cs)
        return out
    units = real_basis(mr, ms) if problem.real else complex_basis(mr, ms)
    for n in range(a):
        for e in units:
            cs = [zero] * a
            cs[n] = e
            out.append(cs)
    return out


def parameter_layout(problem: CongruenceProblem) -> ParameterLayout:
    slots = []
    for r in range(problem.N):
        slots.append(("a0", r, _lie_basis(problem, r)))
    for r in range(problem.N):
        for s in range(r):
            slots.append(("sub", (r, s), _sub_basis(problem, r, s)))
    for r in range(problem.N):
        for j in range(1, problem.alpha[r]):
            slots.append(("z", (r, j), _z_basis(problem, r, j)))
    layout = ParameterLayout(problem, slots)
    assert layout.dim == parameter_counts(problem)["total"]
    return layout


def parameters_from_vector(problem: CongruenceProblem, theta: Sequence[float],
                           layout: ParameterLayout | None = None) -> FreeParameters:
    """Free parameters from real coordinates.

    Base blocks are ``expm(Y) A_base`` with ``Y`` in the Lie algebra of the
    group preserving ``B_0^r``; all other parameters depend linearly on
    their coordinates.
    """
    if layout is None:
        layout = parameter_layout(problem)
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (layout.dim,):
        raise ValueError(f"expected {layout.dim} coordinates, got {theta.shape}")
    params = FreeParameters()
    pos = 0
    for group, key, basis in layout.slots:
        coords = theta[pos:pos + len(basis)]
        pos += len(basis)
        if group == "a0":
            m = problem.mu[key]
            y = sum((c * b for c, b in zip(coords, basis)), np.zeros((m, m), dtype=complex))
            params.a0[key] = expm(y) @ base_solution(problem, key)
        elif group == "sub":
            r, s = key
            cs = [np.zeros((problem.mu[r], problem.mu[s]), dtype=complex)
                  for _ in range(problem.alpha[r])]
            for c, elem in zip(coords, basis):
                for n in range(len(cs)):
                    cs[n] = cs[n] + c * elem[n]
            params.sub[key] = cs
        else:
            m = problem.mu[key[0]]
            params.z[key] = sum((c * b for c, b in zip(coords, basis)),
                                np.zeros((m, m), dtype=complex))
    if problem.real:
        params.a0 = {k: v.real.astype(complex) for k, v in params.a0.items()}
    return params


def coordinate_weights(spec: CanonicalSpec, problem: CongruenceProblem | None = None,
                       kit: TransformKit | None = None,
                       layout: ParameterLayout | None = None) -> np.ndarray:
    """Per-coordinate factors ``min(1, 1 / ||dQ||)`` for sampling.

    ``dQ`` is the image in ``Q`` space of the coordinate's basis direction
    placed in an otherwise zero family.  For ill-conditioned transforms
    (``negative_real`` with large ``mu`` and ``alpha``) unit coordinates
    would otherwise produce elements of norm ``1e4`` and beyond.
    """
    problem = derive_problem(spec) if problem is None else problem
    kit = transform_kit(spec) if kit is None else kit
    layout = parameter_layout(problem) if layout is None else layout
    out = []
    for group, key, basis in layout.slots:
        for b in basis:
            fam = ToeplitzFamily(problem.alpha, problem.mu, problem.family_flavor)
            if group == "a0":
                fam.set(key, key, 0, b)
            elif group == "sub":
                for n, c in enumerate(b):
                    fam.set(key[0], key[1], n, c)
            else:
                r, j = key
                fam.set(r, r, j, np.linalg.solve(problem.B[r][0], b))
            norm = np.linalg.norm(kit.consim_solution(family_matrix(spec, fam)))
            out.append(min(1.0, 1.0 / norm) if norm > 0 else 1.0)
    return np.asarray(out)


def random_parameters(problem: CongruenceProblem, rng: np.random.Generator,
                      scale: float = 1.0,
                      weights: np.ndarray | None = None) -> tuple[FreeParameters, np.ndarray]:
    """Parameters from coordinates drawn uniformly from ``[-scale, scale]``.

    Optional `weights` multiply the coordinates (see :func:`coordinate_weights`).
    """
    layout = parameter_layout(problem)
    theta = rng.uniform(-scale, scale, layout.dim)
    if weights is not None:
        theta = theta * weights
    return parameters_from_vector(problem, theta, layout), theta


def solve(problem: CongruenceProblem, params: FreeParameters) -> ToeplitzFamily:
    """Dispatch to the solver matching the problem flavor."""
    if problem.flavor == ALTERNATING:
        return solve_congruence_alternating(problem, params)
    return solve_congruence(problem, params)


def random_element(spec: CanonicalSpec, rng: np.random.Generator,
                   scale: float = 1.0) -> IsotropyElement:
    """Random element with coordinates weighted by :func:`coordinate_weights`."""
    problem = derive_problem(spec)
    kit = transform_kit(spec)
    params, _ = random_parameters(problem, rng, scale, coordinate_weights(spec, problem, kit))
    return assemble_Q(spec, solve(problem, params), kit, problem)
