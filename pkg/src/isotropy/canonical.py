"""
Canonical Hermitian blocks, canonical forms and the change-of-basis kit.

A Hermitian canonical form is a direct sum of blocks ``eps * H_a(sqrt(rho))``
(``rho >= 0``), ``K_a(mu)`` (``rho = -mu**2``) or ``L_a(xi)`` (``rho = xi**2``
nonreal), where ``rho`` is the single eigenvalue of ``H @ conj(H)``.

The transform kit turns the consimilarity equation ``H conj(Q) = Q H`` into a
congruence equation for a block Toeplitz family: ``Q = M^{-1} (Pi X Pi^T) M``
where ``X`` is the regrouped family.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg import block_diag, solve_triangular

from .toeplitz import omega_pack

POSITIVE_REAL = "positive_real"
ZERO = "zero"
NEGATIVE_REAL = "negative_real"
NONREAL = "nonreal"
EIGEN_KINDS = (POSITIVE_REAL, ZERO, NEGATIVE_REAL, NONREAL)

__all__ = [
    "EigenClass", "CanonicalSpec", "TransformKit", "jordan_block",
    "backward_identity", "block_backward_identity", "h_block", "k_block",
    "l_block", "canonical_form", "p_matrix", "q_matrix", "r_matrix",
    "w_matrix", "v_matrix", "u_chain", "u_normalized", "s_matrix",
    "transform_kit",
]


@dataclass(frozen=True)
class EigenClass:
    """Eigenvalue class of ``H conj(H)``.

    Use the constructors :meth:`positive_real`, :meth:`zero`,
    :meth:`negative_real` and :meth:`nonreal`.  For ``positive_real`` the
    stored value is the eigenvalue ``lambda`` itself, the blocks use
    ``sqrt(lambda)``.  For ``negative_real`` it is ``mu`` with
    ``rho = -mu**2`` and for ``nonreal`` it is ``xi`` with ``rho = xi**2``.
    """
    kind: str
    value: complex = 0.0

    def __post_init__(self):
        if self.kind not in EIGEN_KINDS:
            raise ValueError(f"unknown eigenvalue class {self.kind!r}")
        v = complex(self.value)
        if not cmath.isfinite(v):
            raise ValueError("eigenvalue parameter must be finite")
        if self.kind == POSITIVE_REAL and not (v.imag == 0 and v.real > 0):
            raise ValueError("positive_real needs lambda > 0")
        if self.kind == NEGATIVE_REAL and not (v.imag == 0 and v.real > 0):
            raise ValueError("negative_real needs mu > 0")
        if self.kind == NONREAL:
            if v.imag <= 0:
                raise ValueError("nonreal needs Im(xi) > 0")
            sq = v * v
            if abs(sq.imag) <= 1e-12 * max(1.0, abs(sq)):
                raise ValueError("nonreal needs xi**2 to be nonreal")

    @classmethod
    def positive_real(cls, lam: float) -> "EigenClass":
        return cls(POSITIVE_REAL, float(lam))

    @classmethod
    def zero(cls) -> "EigenClass":
        return cls(ZERO, 0.0)

    @classmethod
    def negative_real(cls, mu: float) -> "EigenClass":
        return cls(NEGATIVE_REAL, float(mu))

    @classmethod
    def nonreal(cls, xi: complex | None = None, rho: complex | None = None) -> "EigenClass":
        """Build from ``xi`` or from ``rho = xi**2`` (root with ``Im xi > 0``)."""
        if (xi is None) == (rho is None):
            raise ValueError("give exactly one of xi and rho")
        if xi is None:
            xi = cmath.sqrt(complex(rho))
            if xi.imag < 0:
                xi = -xi
        return cls(NONREAL, complex(xi))

    @property
    def rho(self) -> complex:
        v = complex(self.value)
        if self.kind == POSITIVE_REAL:
            return v
        if self.kind == ZERO:
            return 0j
        if self.kind == NEGATIVE_REAL:
            return -v * v
        return v * v

    @property
    def block_param(self) -> complex:
        """Argument ``z`` of the block constructor used for this class."""
        if self.kind == POSITIVE_REAL:
            return complex(math.sqrt(self.value.real))
        return complex(self.value)

    @property
    def paired(self) -> bool:
        """True for classes whose blocks have size ``2 alpha``."""
        return self.kind in (NEGATIVE_REAL, NONREAL)


@dataclass(frozen=True)
class CanonicalSpec:
    """Block data of a canonical form with a single eigenvalue class.

    Parameters
    ----------
    eigen : EigenClass
    alpha : sequence of int
        Strictly decreasing block sizes.
    mu : sequence of int
        Multiplicity ``m_r`` of each block size.
    eps : sequence of sequences of int, optional
        Signs for ``positive_real`` and ``zero`` classes, ``eps[r][j]``.
        Defaults to all ``+1``.
    """
    eigen: EigenClass
    alpha: tuple
    mu: tuple
    eps: tuple | None = None

    def __post_init__(self):
        alpha = tuple(int(a) for a in self.alpha)
        mu = tuple(int(m) for m in self.mu)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "mu", mu)
        if not alpha or len(alpha) != len(mu):
            raise ValueError("alpha and mu must be nonempty and of equal length")
        if alpha[-1] < 1 or any(a <= b for a, b in zip(alpha, alpha[1:])):
            raise ValueError("alpha must be strictly decreasing and positive")
        if min(mu) < 1:
            raise ValueError("multiplicities must be positive")
        signed = self.eigen.kind in (POSITIVE_REAL, ZERO)
        eps = self.eps
        if eps is None:
            eps = tuple((1,) * m for m in mu) if signed else None
        elif not signed:
            raise ValueError("signs are only allowed for positive_real and zero classes")
        else:
            eps = tuple(tuple(int(e) for e in row) for row in eps)
            if len(eps) != len(mu) or any(len(row) != m for row, m in zip(eps, mu)):
                raise ValueError("eps dimensions must match mu")
            if any(e not in (1, -1) for row in eps for e in row):
                raise ValueError("signs must be +1 or -1")
            if self.eigen.kind == ZERO:
                for a, row in zip(alpha, eps):
                    if a % 2 and any(e != 1 for e in row):
                        raise ValueError("zero class: odd blocks must carry sign +1")
        object.__setattr__(self, "eps", eps)

    @property
    def N(self) -> int:
        return len(self.alpha)

    @property
    def block_width(self) -> int:
        return 2 if self.eigen.paired else 1

    @property
    def size(self) -> int:
        return self.block_width * sum(a * m for a, m in zip(self.alpha, self.mu))

    def blocks(self):
        """Yield ``(r, j, alpha_r, sign)`` in direct-sum order."""
        for r, (a, m) in enumerate(zip(self.alpha, self.mu)):
            for j in range(m):
                yield r, j, a, (self.eps[r][j] if self.eps is not None else 1)

    def coeff_sizes(self) -> tuple:
        """Sizes of regrouped coefficient blocks (``2 m_r`` for ``negative_real``)."""
        if self.eigen.kind == NEGATIVE_REAL:
            return tuple(2 * m for m in self.mu)
        return self.mu


def jordan_block(lam: complex, size: int) -> np.ndarray:
    """Upper triangular Jordan block ``J_size(lam)``."""
    if size < 1:
        raise ValueError("size must be positive")
    return lam * np.eye(size, dtype=complex) + np.eye(size, k=1, dtype=complex)


def backward_identity(size: int) -> np.ndarray:
    return np.fliplr(np.eye(size))


def block_backward_identity(beta: int, m: int) -> np.ndarray:
    """``E_beta(I_m)``: identity blocks on the block antidiagonal."""
    return np.kron(backward_identity(beta), np.eye(m))


def h_block(z: complex, n: int) -> np.ndarray:
    """Hermitian block ``H_n(z)``.

    Real part: ``z`` on the antidiagonal and ``1/2`` on the two neighbouring
    antidiagonals.  Imaginary part: ``+1/2`` above and ``-1/2`` below the
    main diagonal.
    """
    if n < 1:
        raise ValueError("n must be positive")
    j, k = np.indices((n, n))
    s = j + k
    re = np.where(s == n - 1, 2 * z, 0) + np.where((s == n - 2) | (s == n), 1, 0)
    im = np.eye(n, k=1) - np.eye(n, k=-1)
    return 0.5 * (re + 1j * im)


def k_block(z: complex, n: int) -> np.ndarray:
    h = h_block(z, n)
    zero = np.zeros_like(h)
    return np.block([[zero, -1j * h], [1j * h, zero]])


def l_block(z: complex, n: int) -> np.ndarray:
    h = h_block(z, n)
    zero = np.zeros_like(h)
    return np.block([[zero, h], [h.conj().T, zero]])


def canonical_form(spec: CanonicalSpec) -> np.ndarray:
    """Direct sum of canonical blocks described by `spec`."""
    z = spec.eigen.block_param
    kind = spec.eigen.kind
    parts = []
    for _, _, a, sign in spec.blocks():
        if kind == NEGATIVE_REAL:
            parts.append(k_block(z, a))
        elif kind == NONREAL:
            parts.append(l_block(z, a))
        else:
            parts.append(sign * h_block(z, a))
    return block_diag(*parts).astype(complex)


def p_matrix(n: int) -> np.ndarray:
    """``P_n = exp(-i pi/4) / sqrt(2) * (I + i E_n)``; satisfies ``P^2 = E``."""
    return cmath.exp(-1j * math.pi / 4) / math.sqrt(2) * (np.eye(n) + 1j * backward_identity(n))


def q_matrix(n: int) -> np.ndarray:
    p = p_matrix(n)
    return cmath.exp(1j * math.pi / 4) * block_diag(p, p)


def r_matrix(n: int) -> np.ndarray:
    p = p_matrix(n)
    return block_diag(p, p)


def w_matrix(n: int) -> np.ndarray:
    return np.diag([1j ** j for j in range(n)])


def v_matrix(n: int) -> np.ndarray:
    w = w_matrix(n)
    return cmath.exp(1j * math.pi / 4) * block_diag(w, w.conj())


def u_chain(eta: float, n: int) -> np.ndarray:
    """Raw solution of ``U J_n(-eta^2) = J_n(i eta)^2 U``.

    The first column is ``e_1``; column ``k`` solves
    ``(J(i eta)^2 + eta^2 I) u_k = u_{k-1}`` with vanishing first coordinate.
    Odd rows come out real and even rows purely imaginary.
    """
    if eta <= 0:
        raise ValueError("eta must be positive")
    j = jordan_block(1j * eta, n)
    shift = j @ j + eta ** 2 * np.eye(n)
    u = np.zeros((n, n), dtype=complex)
    u[0, 0] = 1.0
    for k in range(1, n):
        # shift maps coordinate i+1 to i, so drop the first column and last row
        a = shift[:n - 1, 1:]
        rhs = u[:n - 1, k - 1]
        if abs(u[n - 1, k - 1]) > 1e-12 * (1 + np.abs(u[:, k - 1]).max()):
            raise ArithmeticError("U-chain system is inconsistent")
        u[1:, k] = solve_triangular(a, rhs, lower=False)
    return u


def s_matrix(eta: float, n: int, u: np.ndarray | None = None) -> np.ndarray:
    if u is None:
        u = u_chain(eta, n)
    zero = np.zeros((n, n), dtype=complex)
    return np.block([[zero, u], [jordan_block(-1j * eta, n) @ u.conj(), zero]])


def _k_transform(mu: float, n: int, u: np.ndarray) -> np.ndarray:
    return np.linalg.solve(s_matrix(mu, n, u), v_matrix(n) @ q_matrix(n))


def _normal_matrix(m: np.ndarray) -> np.ndarray:
    """``E (M M^T)^{-1}`` where ``E`` reverses each half."""
    n = m.shape[0] // 2
    e = block_diag(backward_identity(n), backward_identity(n))
    return e @ np.linalg.inv(m @ m.T)


def u_normalized(mu: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Scaled U-chain and the real coefficients ``(1, u_1, ..., u_{n-1})``.

    The chain is multiplied by a scalar ``gamma`` with ``gamma**2`` real so
    that the normal matrix becomes ``T(u) J(-mu^2)`` plus ``T(u)`` with
    ``u_0 = 1``.
    """
    u = u_chain(mu, n)
    b = _normal_matrix(_k_transform(mu, n, u))
    c0 = b[n, n]
    if abs(c0.imag) > 1e-9 * abs(c0):
        raise ArithmeticError("normalization coefficient is not real")
    c0 = c0.real
    gamma = 1 / math.sqrt(c0) if c0 > 0 else 1j / math.sqrt(-c0)
    u = gamma * u
    b = _normal_matrix(_k_transform(mu, n, u))
    coef = b[n, n:]
    if np.abs(coef.imag).max() > 1e-9:
        raise ArithmeticError("normal matrix coefficients are not real")
    return u, coef.real.copy()


@dataclass
class TransformKit:
    """Change of basis between family space and the consimilarity equation.

    Attributes
    ----------
    M : ndarray
        ``Q = M^{-1} Pi X Pi^T M`` solves ``H conj(Q) = Q H`` whenever the
        regrouped ``X`` solves the induced congruence problem.
    Pi : ndarray
        Regrouping permutation.
    which : str
        Name of the permutation (``omega``, ``omega_prime``, ``omega_zero``).
    factors : dict
        Per-class factors (``P``, ``S_eps``, ``V``, ``S``, ``U``, ``R``).
    u : dict
        For ``negative_real``: ``r -> (1, u_1, ...)``.
    """
    M: np.ndarray
    Pi: np.ndarray
    which: str
    factors: dict = field(default_factory=dict)
    u: dict = field(default_factory=dict)

    def consim_solution(self, X: np.ndarray) -> np.ndarray:
        """Solution of ``H conj(Q) = Q H`` from a regrouped family matrix."""
        full = self.Pi @ X @ self.Pi.T
        return np.linalg.solve(self.M, full @ self.M)

    def family_matrix(self, Q: np.ndarray) -> np.ndarray:
        """Inverse of :meth:`consim_solution`."""
        full = self.M @ Q @ np.linalg.inv(self.M)
        return self.Pi.T @ full @ self.Pi

    def normal_matrix(self) -> np.ndarray:
        """Regrouped ``F Pi^T (M M^T)^{-1} Pi`` with ``F`` the block reversal."""
        g = np.linalg.inv(self.M @ self.M.T)
        return self.Pi.T @ self.factors["E"] @ g @ self.Pi


def transform_kit(spec: CanonicalSpec) -> TransformKit:
    kind = spec.eigen.kind
    pack = omega_pack(spec.alpha, spec.mu)
    if kind in (POSITIVE_REAL, ZERO):
        p = block_diag(*[p_matrix(a) for _, _, a, _ in spec.blocks()])
        se = block_diag(*[cmath.sqrt(sign) * np.eye(a) for _, _, a, sign in spec.blocks()])
        e = block_diag(*[backward_identity(a) for _, _, a, _ in spec.blocks()])
        return TransformKit(p @ se, pack.omega, "omega",
                            {"P": p, "S_eps": se, "E": e})
    if kind == NEGATIVE_REAL:
        mu = spec.eigen.value.real
        us = {a: u_normalized(mu, a) for a in spec.alpha}
        parts, ps, vs, ss = [], [], [], []
        for _, _, a, _ in spec.blocks():
            u = us[a][0]
            ps.append(q_matrix(a))
            vs.append(v_matrix(a))
            ss.append(s_matrix(mu, a, u))
            parts.append(np.linalg.solve(ss[-1], vs[-1] @ ps[-1]))
        e = block_diag(*[block_diag(backward_identity(a), backward_identity(a))
                         for _, _, a, _ in spec.blocks()])
        return TransformKit(block_diag(*parts), pack.omega_prime, "omega_prime",
                            {"P": block_diag(*ps), "V": block_diag(*vs),
                             "S": block_diag(*ss), "E": e,
                             "U": {a: us[a][0] for a in spec.alpha}},
                            {r: us[a][1] for r, a in enumerate(spec.alpha)})
    rr = block_diag(*[r_matrix(a) for _, _, a, _ in spec.blocks()])
    e = block_diag(*[block_diag(backward_identity(a), backward_identity(a))
                     for _, _, a, _ in spec.blocks()])
    return TransformKit(rr, pack.omega_zero, "omega_zero", {"R": rr, "E": e})
