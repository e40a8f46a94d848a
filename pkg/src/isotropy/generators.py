"""
Explicit unipotent families and sampled generating sets.

The families below solve ``F X^T F B X = B`` for ``B`` with a single
nonzero coefficient ``B_r`` per diagonal block:

* :func:`gen_asZ` and :func:`gen_asZ2` are block diagonal unitriangular
  (alternating) Toeplitz families driven by skew matrices ``Z_n``;
* :func:`gen_corner` and :func:`gen_corner_alt` are the identity outside
  the rows and columns of two blocks ``p < t`` and carry ``F`` on the
  ``k``-th diagonal of the ``(t, p)`` block.

Block indices are zero-based and ``F`` has shape ``(m_t, m_p)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Mapping, Sequence

import numpy as np
from .canonical import (NEGATIVE_REAL, ZERO, CanonicalSpec, canonical_form,
                        transform_kit)
from .congruence import (VW, CongruenceProblem, FreeParameters,
                         solve_congruence, vw_matrix, vw_skew)
from .isotropy import (IsotropyElement, assemble_Q, derive_problem,
                       parameter_layout, parameters_from_vector, solve)
from .kernel import skew_hermitian_basis, skew_symmetric_basis
from .toeplitz import ALTERNATING, PLAIN, ToeplitzFamily, identity_family

__all__ = [
    "corner_coefficient", "gen_asZ", "gen_asZ2", "gen_corner", "gen_corner_alt",
    "gen_vw_diagonal", "gen_vw_corner", "Generator", "GeneratorSet",
    "generator_set",
]


def corner_coefficient(n: int) -> float:
    """``a_n = -binom(2n, n) / (2^(2n+1) (n+1))``.

    >>> [corner_coefficient(n) for n in range(3)]
    [-0.5, -0.125, -0.0625]
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    return -comb(2 * n, n) / (2 ** (2 * n + 1) * (n + 1))


def _check_B(B: Sequence, real: bool = False) -> list[np.ndarray]:
    out = []
    for r, b in enumerate(B):
        b = np.asarray(b, dtype=complex)
        if b.ndim != 2 or b.shape[0] != b.shape[1]:
            raise ValueError(f"B[{r}] must be square")
        if np.linalg.norm(b - b.T) > 1e-12 * (1 + np.linalg.norm(b)):
            raise ValueError(f"B[{r}] must be symmetric")
        if real and np.abs(b.imag).max(initial=0) > 0:
            raise ValueError(f"B[{r}] must be real")
        if np.linalg.matrix_rank(b) < b.shape[0]:
            raise ValueError(f"B[{r}] must be nonsingular")
        out.append(b)
    return out


def _check_skew(z: np.ndarray, hermitian: bool, key) -> None:
    dev = z + (z.conj().T if hermitian else z.T)
    if np.linalg.norm(dev) > 1e-12 * (1 + np.linalg.norm(z)):
        kind = "skew-Hermitian" if hermitian else "skew-symmetric"
        raise ValueError(f"Z{key} must be {kind}")


def _ct(a: np.ndarray, times: int) -> np.ndarray:
    return a.conj() if times % 2 else a


def _diag_family(alpha, B, Z, alternating: bool) -> ToeplitzFamily:
    B = _check_B(B, real=alternating)
    mu = [b.shape[0] for b in B]
    fam = identity_family(alpha, mu, ALTERNATING if alternating else PLAIN)
    for r, (a, b) in enumerate(zip(fam.alpha, B)):
        binv = np.linalg.inv(b)
        W = [np.eye(mu[r], dtype=complex)]
        for n in range(1, a):
            z = np.asarray(Z.get((r, n), np.zeros((mu[r], mu[r]))), dtype=complex)
            if z.shape != (mu[r], mu[r]):
                raise ValueError(f"Z{(r, n)} has wrong shape")
            _check_skew(z, alternating and (a - n) % 2 == 0, (r, n))
            if alternating:
                d = sum((_ct(W[i], a - 1 - i).T @ b @ _ct(W[n - i], i) for i in range(1, n)),
                        np.zeros_like(z))
            else:
                d = sum((W[i].T @ b @ W[n - i] for i in range(1, n)), np.zeros_like(z))
            W.append(0.5 * binv @ (z - d))
            fam.set(r, r, n, W[n])
    return fam


def gen_asZ(alpha: Sequence[int], B: Sequence, Z: Mapping) -> ToeplitzFamily:
    """Block diagonal ``T(I, W_1, ..., W_{alpha_r - 1})`` with
    ``W_n = B_r^{-1} (Z_n - sum_{j=1}^{n-1} W_j^T B_r W_{n-j}) / 2``.

    Parameters
    ----------
    alpha : sequence of int
    B : sequence of array_like
        Nonsingular symmetric ``B_r``.
    Z : mapping
        ``(r, n) -> Z_n^r`` skew-symmetric; missing entries are zero.
    """
    return _diag_family(alpha, B, Z, alternating=False)


def gen_asZ2(alpha: Sequence[int], B: Sequence, Z: Mapping) -> ToeplitzFamily:
    """Alternating analogue of :func:`gen_asZ` for real ``B_r``.

    ``Z_n^r`` is skew-symmetric when ``alpha_r - n`` is odd and
    skew-Hermitian when it is even.  The correction term is
    ``sum_i c(W_i, alpha_r - 1 - i)^T B_r c(W_{n-i}, i)`` where ``c(A, t)``
    conjugates ``A`` when ``t`` is odd.
    """
    return _diag_family(alpha, B, Z, alternating=True)


def _corner_checks(alpha, B, p, t, k, F, alternating):
    B = _check_B(B, real=alternating)
    N = len(alpha)
    if len(B) != N:
        raise ValueError("one B_r per block is required")
    if not 0 <= p < t < N:
        raise ValueError("need 0 <= p < t < N")
    if not 0 <= k < alpha[t]:
        raise ValueError(f"k must lie in [0, {alpha[t] - 1}]")
    mu = [b.shape[0] for b in B]
    F = np.asarray(F, dtype=complex)
    if F.shape != (mu[t], mu[p]):
        raise ValueError(f"F must have shape {(mu[t], mu[p])}, got {F.shape}")
    return B, mu, F


def _alt_power(x: np.ndarray, n: int, alternating: bool) -> np.ndarray:
    """``x^n``, or ``x conj(x) x ...`` with ``n`` factors."""
    out = np.eye(x.shape[0], dtype=complex)
    for i in range(n):
        out = out @ (x.conj() if alternating and i % 2 else x)
    return out


def gen_corner(alpha: Sequence[int], B: Sequence, p: int, t: int, k: int,
               F) -> ToeplitzFamily:
    """Plain corner family for blocks ``p < t``.

    The ``(t, p)`` block carries ``F`` on diagonal ``k``, the ``(p, t)`` block
    ``-B_p^{-1} F^T B_t``, and the diagonal blocks ``p`` and ``t`` get
    ``a_{n-1} B_p^{-1} (F^T B_t F B_p^{-1})^n B_p`` and
    ``a_{n-1} B_t^{-1} (B_t F B_p^{-1} F^T)^n B_t`` at index
    ``n (2k + alpha_p - alpha_t)``.
    """
    B, mu, F = _corner_checks(alpha, B, p, t, k, F, False)
    fam = identity_family(alpha, mu, PLAIN)
    bp, bt = B[p], B[t]
    bpi, bti = np.linalg.inv(bp), np.linalg.inv(bt)
    fam.set(t, p, k, F)
    fam.set(p, t, k, -bpi @ F.T @ bt)
    step = 2 * k + fam.alpha[p] - fam.alpha[t]
    xp = F.T @ bt @ F @ bpi
    xt = bt @ F @ bpi @ F.T
    for n in range(1, fam.alpha[p] // step + 1):
        j = n * step
        if j < fam.alpha[p]:
            fam.set(p, p, j, corner_coefficient(n - 1) * bpi @ np.linalg.matrix_power(xp, n) @ bp)
        if j < fam.alpha[t]:
            fam.set(t, t, j, corner_coefficient(n - 1) * bti @ np.linalg.matrix_power(xt, n) @ bt)
    return fam


def gen_corner_alt(alpha: Sequence[int], B: Sequence, p: int, t: int, k: int,
                   F) -> ToeplitzFamily:
    """Complex-alternating corner family for blocks ``p < t`` and real ``B_r``.

    With ``G = F`` for ``k + alpha_t`` odd and ``G = conj(F)`` otherwise, the
    ``(t, p)`` block carries ``F`` and the ``(p, t)`` block
    ``-B_p^{-1} G^T B_t`` on diagonal ``k``.  The diagonal corrections are
    built from ``G^T B_t G' B_p^{-1}`` (``G' = G`` for odd ``alpha_t``, else
    ``conj(G)``) and ``B_t F B_p^{-1} F'`` (``F' = F^T`` for odd ``alpha_p``,
    else ``F^*``), raised to the ordinary power when ``alpha_p`` and
    ``alpha_t`` have equal parity and to the alternating product otherwise.
    """
    B, mu, F = _corner_checks(alpha, B, p, t, k, F, True)
    fam = identity_family(alpha, mu, ALTERNATING)
    ap, at = fam.alpha[p], fam.alpha[t]
    bp, bt = B[p], B[t]
    bpi, bti = np.linalg.inv(bp), np.linalg.inv(bt)
    G = F if (k + at) % 2 else F.conj()
    fam.set(t, p, k, F)
    fam.set(p, t, k, -bpi @ G.T @ bt)
    alt = (ap - at) % 2 == 1
    inner_p = G if at % 2 else G.conj()
    inner_t = F.T if ap % 2 else F.conj().T
    xp = G.T @ bt @ inner_p @ bpi
    xt = bt @ F @ bpi @ inner_t
    step = 2 * k + ap - at
    for n in range(1, ap // step + 1):
        j = n * step
        a = corner_coefficient(n - 1)
        if j < ap:
            fam.set(p, p, j, a * bpi @ _alt_power(xp, n, alt) @ bp)
        if j < at:
            fam.set(t, t, j, a * bti @ _alt_power(xt, n, alt) @ bt)
    return fam


def _vw_params(problem: CongruenceProblem) -> FreeParameters:
    params = FreeParameters.defaults(problem)
    for r in range(problem.N):
        params.a0[r] = np.eye(problem.mu[r], dtype=complex)
    return params


def gen_vw_diagonal(problem: CongruenceProblem, Z: Mapping) -> ToeplitzFamily:
    """Block diagonal unitriangular solution of a vw problem with ``B = C``.

    `Z` maps ``(r, j)`` to :func:`~isotropy.congruence.vw_skew` matrices.
    """
    if problem.flavor != VW:
        raise ValueError("problem flavor must be vw")
    params = _vw_params(problem)
    for key, z in Z.items():
        params.z[key] = np.asarray(z, dtype=complex)
    return solve_congruence(problem, params)


def gen_vw_corner(problem: CongruenceProblem, p: int, t: int, k: int,
                  V, W) -> ToeplitzFamily:
    """Solution of a vw problem that is the identity outside blocks ``p, t``.

    The ``(t, p)`` block has ``vw_matrix(V, W)`` on diagonal ``k``, with the
    ``conj(W)`` shift carried into diagonal ``k + 1``.
    """
    if problem.flavor != VW:
        raise ValueError("problem flavor must be vw")
    if not 0 <= p < t < problem.N or not 0 <= k < problem.alpha[t]:
        raise ValueError("need 0 <= p < t < N and 0 <= k < alpha_t")
    mu = problem.vw_mu
    ht, hp = problem.mu[t] // 2, problem.mu[p] // 2
    V = np.asarray(V, dtype=complex)
    W = np.asarray(W, dtype=complex)
    if V.shape != (ht, hp) or W.shape != (ht, hp):
        raise ValueError(f"V and W must have shape {(ht, hp)}")
    params = _vw_params(problem)
    cs = params.sub[(t, p)]
    zero = np.zeros((ht, hp), dtype=complex)
    cs[k] = vw_matrix(V, W, mu)
    if k + 1 < len(cs):
        cs[k + 1] = vw_matrix(zero, zero, mu, W)
    return solve_congruence(problem, params)


@dataclass
class Generator:
    """One verified isotropy element and the family it came from."""
    element: IsotropyElement
    tag: str
    family: ToeplitzFamily | None = None

    @property
    def Q(self) -> np.ndarray:
        return self.element.Q


@dataclass
class GeneratorSet:
    """Sampled elements of the two factors of the isotropy group.

    ``o_part`` holds block diagonal elements with constant diagonal blocks,
    ``v_part`` unipotent ones.  Tags are ``base``, ``asZ``, ``asZ2``,
    ``corner``, ``corner-alt``.
    """
    o_part: list = field(default_factory=list)
    v_part: list = field(default_factory=list)

    @property
    def provenance(self) -> list[str]:
        return [g.tag for g in self.o_part + self.v_part]

    @property
    def elements(self) -> list[Generator]:
        return self.o_part + self.v_part


def _uniform(rng: np.random.Generator, shape, real: bool) -> np.ndarray:
    x = rng.uniform(-1, 1, shape)
    if not real:
        x = x + 1j * rng.uniform(-1, 1, shape)
    return x


def _random_z(rng, m: int, hermitian: bool, real: bool) -> np.ndarray:
    basis = skew_hermitian_basis(m) if hermitian else skew_symmetric_basis(m, real=real)
    coords = rng.uniform(-1, 1, len(basis))
    return sum((c * b for c, b in zip(coords, basis)), np.zeros((m, m), dtype=complex))


def _o_sample(problem: CongruenceProblem, rng, scale: float) -> ToeplitzFamily:
    """Block diagonal element with constant diagonal blocks.

    In the vw flavor a constant block must also preserve the ``L`` part of
    ``B_1``, which forces ``W_0 = 0`` whenever ``alpha_r > 1``.
    """
    layout = parameter_layout(problem)
    theta = np.zeros(layout.dim)
    pos = 0
    for group, key, basis in layout.slots:
        if group == "a0":
            count = len(basis)
            if problem.flavor == VW and problem.alpha[key] > 1:
                h = problem.mu[key] // 2
                count = h * (h - 1)
            theta[pos:pos + count] = rng.uniform(-scale, scale, count)
        pos += len(basis)
    return solve(problem, parameters_from_vector(problem, theta, layout))


def generator_set(spec: CanonicalSpec, budget: int, rng: np.random.Generator | None = None,
                  scale: float = 1.0) -> GeneratorSet:
    """Random generators of the isotropy group of ``canonical_form(spec)``.

    Parameters
    ----------
    spec : CanonicalSpec
    budget : int
        Samples per family.  With ``budget = 0`` only the identity is returned.
    rng : numpy.random.Generator, optional
        Source of the uniform ``[-1, 1]`` entries; defaults to seed 0.

    Returns
    -------
    GeneratorSet
        Every element has been assembled and checked by :func:`assemble_Q`.
    """
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    rng = np.random.default_rng(0) if rng is None else rng
    problem = derive_problem(spec)
    kit = transform_kit(spec)
    H = canonical_form(spec)
    out = GeneratorSet()

    def add(part, fam, tag):
        el = assemble_Q(spec, fam, kit, problem)
        if not el.passes(H):
            raise ArithmeticError(f"{tag} generator failed verification")
        part.append(Generator(el, tag, fam))

    add(out.o_part, identity_family(problem.alpha, problem.mu, problem.family_flavor), "base")
    if budget == 0:
        return out
    for _ in range(budget):
        add(out.o_part, _o_sample(problem, rng, scale), "base")

    alpha, N = problem.alpha, problem.N
    kind = spec.eigen.kind
    B0 = [problem.B[r][0] for r in range(N)]
    pairs = [(p, t, k) for t in range(N) for p in range(t) for k in range(alpha[t])]

    if kind == NEGATIVE_REAL:
        mu = problem.vw_mu
        if any(a > 1 for a in alpha):
            for _ in range(budget):
                Z = {}
                for r in range(N):
                    h = problem.mu[r] // 2
                    for j in range(1, alpha[r]):
                        v = _random_z(rng, h, False, False)
                        w = _random_z(rng, h, True, False)
                        Z[(r, j)] = scale * vw_skew(v, w, mu)
                add(out.v_part, gen_vw_diagonal(problem, Z), "asZ")
        if pairs:
            for _ in range(budget):
                p, t, k = pairs[rng.integers(len(pairs))]
                shape = (problem.mu[t] // 2, problem.mu[p] // 2)
                fam = gen_vw_corner(problem, p, t, k, scale * _uniform(rng, shape, False),
                                    scale * _uniform(rng, shape, False))
                add(out.v_part, fam, "corner")
        return out

    alternating = kind == ZERO
    real = problem.real
    nontrivial = any(a > 1 and (m > 1 or (alternating and (a - n) % 2 == 0))
                     for a, m in zip(alpha, problem.mu) for n in range(1, a))
    if nontrivial:
        for _ in range(budget):
            Z = {}
            for r in range(N):
                for n in range(1, alpha[r]):
                    herm = alternating and (alpha[r] - n) % 2 == 0
                    Z[(r, n)] = scale * _random_z(rng, problem.mu[r], herm, real)
            if alternating:
                add(out.v_part, gen_asZ2(alpha, B0, Z), "asZ2")
            else:
                add(out.v_part, gen_asZ(alpha, B0, Z), "asZ")
    if pairs:
        for _ in range(budget):
            p, t, k = pairs[rng.integers(len(pairs))]
            F = scale * _uniform(rng, (problem.mu[t], problem.mu[p]), real)
            if alternating:
                add(out.v_part, gen_corner_alt(alpha, B0, p, t, k, F), "corner-alt")
            else:
                add(out.v_part, gen_corner(alpha, B0, p, t, k, F), "corner")
    return out
