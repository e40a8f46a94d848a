"""
Solution spaces of Sylvester and consimilarity equations for canonical blocks.

``sylvester_jordan`` handles ``J_m(l1) X = X J_n(l2)``.  ``consim_pair_solution``
handles ``M conj(Y) = Y N`` for two canonical blocks ``M`` and ``N``; both are
brought to a standard consimilarity form ``M = A^{-1} J conj(A)`` and the
solutions are ``Y = A_M^{-1} X A_N`` with ``X`` structured Toeplitz.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .canonical import (backward_identity, h_block, jordan_block, k_block,
                        l_block, p_matrix, q_matrix, r_matrix, s_matrix,
                        u_chain, v_matrix)
from .kernel import complex_basis, real_linearize_nullity

__all__ = ["BlockDesc", "SolutionSpace", "padded_toeplitz", "sylvester_jordan",
           "consim_pair_solution", "brute_force_consim_nullity"]

ORACLE_RTOL = 1e-8


@dataclass(frozen=True)
class BlockDesc:
    """Canonical block descriptor.

    ``kind`` is ``"H"``, ``"K"`` or ``"L"``; ``z`` the block parameter
    (``z >= 0`` for H, ``z > 0`` for K, ``Im z > 0`` with ``z**2`` nonreal for
    L); ``sign`` multiplies H blocks.
    """
    kind: str
    z: complex
    size: int
    sign: int = 1

    def __post_init__(self):
        z = complex(self.z)
        if self.kind not in ("H", "K", "L") or self.size < 1:
            raise ValueError(f"invalid block descriptor {self}")
        if self.kind == "H" and not (z.imag == 0 and z.real >= 0):
            raise ValueError("H blocks need a real parameter z >= 0")
        if self.kind == "K" and not (z.imag == 0 and z.real > 0):
            raise ValueError("K blocks need a real parameter z > 0")
        if self.kind == "L" and not (z.imag > 0 and abs((z * z).imag) > 1e-12):
            raise ValueError("L blocks need Im z > 0 and nonreal z**2")
        if self.sign not in (1, -1) or (self.kind != "H" and self.sign != 1):
            raise ValueError("sign must be +1 or -1 and is only used for H blocks")

    def matrix(self) -> np.ndarray:
        if self.kind == "H":
            return self.sign * h_block(self.z, self.size)
        if self.kind == "K":
            return k_block(self.z, self.size)
        return l_block(self.z, self.size)

    def spectrum_key(self):
        """Eigenvalues of ``M conj(M)`` as a hashable, rounded key."""
        z = complex(self.z)
        if self.kind == "H":
            vals = [z * z]
        elif self.kind == "K":
            vals = [-z * z]
        else:
            vals = [z * z, (z * z).conjugate()]
        return tuple(sorted((round(v.real, 10), round(v.imag, 10)) for v in vals))


@dataclass
class SolutionSpace:
    """Real vector space of solutions with a linear parametrization.

    Attributes
    ----------
    dim : int
        Real dimension.
    parametrize : callable
        Maps a real vector of length `dim` to a solution.
    """
    dim: int
    parametrize: Callable[[np.ndarray], np.ndarray]
    shape: tuple

    @property
    def complex_dim(self) -> float:
        return self.dim / 2

    def basis(self) -> list[np.ndarray]:
        eye = np.eye(self.dim)
        return [self.parametrize(eye[k]) for k in range(self.dim)]


def padded_toeplitz(c, m: int, n: int, alternating: bool = False) -> np.ndarray:
    """``m x n`` matrix with scalar Toeplitz part ``c``, zero padded.

    The square part of size ``b = min(m, n)`` sits in the last columns
    when ``m < n`` and in the first rows when ``m > n``.
    """
    b = min(m, n)
    c = np.asarray(c, dtype=complex)
    if c.shape != (b,):
        raise ValueError(f"need {b} coefficients")
    sq = np.zeros((b, b), dtype=complex)
    for a in range(b):
        row = c[:b - a].conj() if (alternating and a % 2) else c[:b - a]
        sq[a, a:] = row
    out = np.zeros((m, n), dtype=complex)
    if m < n:
        out[:, n - b:] = sq
    else:
        out[:b, :] = sq
    return out


def _complex(theta: np.ndarray, k: int) -> np.ndarray:
    return theta[:k] + 1j * theta[k:2 * k]


def _zero_space(m: int, n: int) -> SolutionSpace:
    return SolutionSpace(0, lambda theta: np.zeros((m, n), dtype=complex), (m, n))


def sylvester_jordan(lam1: complex, m: int, lam2: complex, n: int,
                     tol: float = 1e-12) -> SolutionSpace:
    """Solutions of ``J_m(lam1) X = X J_n(lam2)``.

    Zero if the eigenvalues differ, otherwise the padded upper triangular
    Toeplitz matrices (real dimension ``2 min(m, n)``).
    """
    if m < 1 or n < 1:
        raise ValueError("sizes must be positive")
    if abs(complex(lam1) - complex(lam2)) > tol:
        return _zero_space(m, n)
    b = min(m, n)
    return SolutionSpace(2 * b, lambda th: padded_toeplitz(_complex(np.asarray(th), b), m, n),
                         (m, n))


def _flip_transform(n: int) -> np.ndarray:
    """``T`` with ``T J(-conj xi) conj(T)^{-1} = J(xi)`` in the L standard form."""
    d = np.diag([(-1.0) ** k for k in range(n)])
    zero = np.zeros((n, n))
    swap = np.block([[zero, np.eye(n)], [np.eye(n), zero]])
    return 1j * np.kron(np.eye(2), d) @ swap


def _normalizer(desc: BlockDesc, ref: complex) -> np.ndarray:
    """``A`` with ``desc.matrix() = A^{-1} J conj(A)`` for the standard ``J`` of `ref`."""
    n = desc.size
    if desc.kind == "H":
        return cmath.sqrt(desc.sign) * p_matrix(n)
    if desc.kind == "K":
        mu = complex(desc.z).real
        return np.linalg.solve(s_matrix(mu, n, u_chain(mu, n)), v_matrix(n) @ q_matrix(n))
    a = r_matrix(n)
    if abs(complex(desc.z) - ref) > 1e-12:
        a = _flip_transform(n) @ a
    return a


def consim_pair_solution(mdesc: BlockDesc, ndesc: BlockDesc) -> SolutionSpace:
    """Solutions of ``M conj(Y) = Y N`` for two canonical blocks.

    Examples
    --------
    >>> consim_pair_solution(BlockDesc("H", 1.0, 2), BlockDesc("H", 1.0, 3)).dim
    2
    >>> consim_pair_solution(BlockDesc("H", 1.0, 2), BlockDesc("H", 2.0, 3)).dim
    0
    """
    M, N = mdesc.matrix(), ndesc.matrix()
    rows, cols = M.shape[0], N.shape[0]
    if mdesc.kind != ndesc.kind or mdesc.spectrum_key() != ndesc.spectrum_key():
        return _zero_space(rows, cols)
    m, n = mdesc.size, ndesc.size
    b = min(m, n)
    ref = complex(mdesc.z)
    am = _normalizer(mdesc, ref)
    an = _normalizer(ndesc, ref)

    if mdesc.kind == "H":
        if complex(mdesc.z) == 0:
            dim = 2 * b
            def core(th):
                return padded_toeplitz(_complex(th, b), m, n, alternating=True)
        else:
            dim = b
            def core(th):
                return padded_toeplitz(th[:b].astype(complex), m, n)
    elif mdesc.kind == "K":
        dim = 4 * b
        jn = jordan_block(-complex(mdesc.z).real ** 2, n)
        def core(th):
            a = padded_toeplitz(_complex(th, b), m, n)
            c = padded_toeplitz(_complex(th[2 * b:], b), m, n)
            return np.block([[a, c], [c.conj() @ jn, a.conj()]])
    else:
        dim = 2 * b
        def core(th):
            a = padded_toeplitz(_complex(th, b), m, n)
            zero = np.zeros_like(a)
            return np.block([[a, zero], [zero, a.conj()]])

    def parametrize(theta):
        theta = np.asarray(theta, dtype=float)
        if theta.shape != (dim,):
            raise ValueError(f"expected {dim} real parameters")
        return np.linalg.solve(am, core(theta) @ an)

    return SolutionSpace(dim, parametrize, (rows, cols))


def brute_force_consim_nullity(M, N, rtol: float = ORACLE_RTOL) -> int:
    """Real nullity of ``Y -> M conj(Y) - Y N`` over all complex ``Y``."""
    M = np.asarray(M, dtype=complex)
    N = np.asarray(N, dtype=complex)
    if M.shape[0] != M.shape[1] or N.shape[0] != N.shape[1]:
        raise ValueError("M and N must be square")
    return real_linearize_nullity(lambda y: M @ y.conj() - y @ N,
                                  complex_basis(M.shape[0], N.shape[0]), rtol)
