"""
Block upper triangular Toeplitz families and the regrouping permutations.

A family describes an ``N x N`` block matrix whose ``(r, s)`` block is an
``alpha[r] x alpha[s]`` array of ``m[r] x m[s]`` coefficient blocks.  Only
the first-row coefficients ``A_0, ..., A_{b-1}`` (``b = min(alpha[r],
alpha[s])``) of the square Toeplitz part are stored.  The square part is
padded with zero block columns on the left when ``alpha[r] < alpha[s]`` and
with zero block rows at the bottom when ``alpha[r] > alpha[s]``.

In the ``alternating`` flavor each block row of a Toeplitz part is the
complex conjugate of the row above it, shifted one place to the right.

Block indices ``r, s`` and coefficient indices ``n`` are zero-based.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

PLAIN = "plain"
ALTERNATING = "alternating"
FLAVORS = (PLAIN, ALTERNATING)

__all__ = [
    "PLAIN", "ALTERNATING", "NotAMember", "ToeplitzFamily", "toeplitz",
    "toeplitz_alt", "assemble", "extract", "identity_family", "omega",
    "omega_prime", "omega_zero", "PermutationPack", "omega_pack", "regroup",
    "offsets",
]


class NotAMember(ValueError):
    """Raised when a matrix does not have the claimed block Toeplitz shape."""

    def __init__(self, r: int, s: int, row: int, col: int, dev: float):
        self.r, self.s, self.row, self.col, self.dev = r, s, row, col, dev
        super().__init__(
            f"block ({r}, {s}) deviates from the Toeplitz pattern at block "
            f"entry ({row}, {col}) by {dev:.3e}")


def _conj_times(a: np.ndarray, times: int) -> np.ndarray:
    return a.conj() if times % 2 else a


def _square(coeffs: Sequence[np.ndarray], alternating: bool) -> np.ndarray:
    coeffs = [np.asarray(c, dtype=complex) for c in coeffs]
    if not coeffs:
        raise ValueError("at least one coefficient is required")
    m, n = coeffs[0].shape
    if any(c.shape != (m, n) for c in coeffs):
        raise ValueError("coefficients must share one shape")
    beta = len(coeffs)
    out = np.zeros((beta * m, beta * n), dtype=complex)
    for a in range(beta):
        for k in range(a, beta):
            c = coeffs[k - a]
            if alternating:
                c = _conj_times(c, a)
            out[a * m:(a + 1) * m, k * n:(k + 1) * n] = c
    return out


def toeplitz(coeffs: Sequence[np.ndarray]) -> np.ndarray:
    """Block upper triangular Toeplitz matrix ``T(A_0, ..., A_{b-1})``.

    Examples
    --------
    >>> toeplitz([np.eye(1), 2 * np.eye(1)]).real
    array([[1., 2.],
           [0., 1.]])
    """
    return _square(coeffs, alternating=False)


def toeplitz_alt(coeffs: Sequence[np.ndarray]) -> np.ndarray:
    """Complex-alternating variant: block row ``a`` is conjugated ``a`` times."""
    return _square(coeffs, alternating=True)


def offsets(sizes: Sequence[int]) -> np.ndarray:
    return np.concatenate([[0], np.cumsum(sizes)]).astype(int)


@dataclass
class ToeplitzFamily:
    """First-row coefficient data of a member of the block Toeplitz class.

    Parameters
    ----------
    alpha : sequence of int
        Strictly decreasing block sizes.
    mu : sequence of int
        Coefficient block sizes ``m_r``.
    flavor : {"plain", "alternating"}
    coeffs : dict
        ``(r, s) -> [A_0, ..., A_{b-1}]`` with ``A_n`` of shape ``(m_r, m_s)``.
        Missing keys are treated as zero blocks.
    """
    alpha: tuple
    mu: tuple
    flavor: str = PLAIN
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        self.alpha = tuple(int(a) for a in self.alpha)
        self.mu = tuple(int(m) for m in self.mu)
        if self.flavor not in FLAVORS:
            raise ValueError(f"unknown flavor {self.flavor!r}")
        if len(self.alpha) != len(self.mu):
            raise ValueError("alpha and mu must have equal length")
        for key, cs in self.coeffs.items():
            r, s = key
            if len(cs) != self.b(r, s):
                raise ValueError(f"block {key} needs {self.b(r, s)} coefficients")
            for c in cs:
                if np.shape(c) != (self.mu[r], self.mu[s]):
                    raise ValueError(f"block {key} coefficient has shape {np.shape(c)}")

    @property
    def N(self) -> int:
        return len(self.alpha)

    @property
    def size(self) -> int:
        return int(sum(a * m for a, m in zip(self.alpha, self.mu)))

    def b(self, r: int, s: int) -> int:
        return min(self.alpha[r], self.alpha[s])

    def coeff(self, r: int, s: int, n: int) -> np.ndarray:
        cs = self.coeffs.get((r, s))
        if cs is None:
            return np.zeros((self.mu[r], self.mu[s]), dtype=complex)
        return cs[n]

    def set(self, r: int, s: int, n: int, value) -> None:
        if (r, s) not in self.coeffs:
            self.coeffs[(r, s)] = [np.zeros((self.mu[r], self.mu[s]), dtype=complex)
                                   for _ in range(self.b(r, s))]
        self.coeffs[(r, s)][n] = np.asarray(value, dtype=complex)

    def entry(self, r: int, s: int, row: int, col: int):
        """Block entry ``(row, col)`` of the ``(r, s)`` block, or None if zero."""
        ar, as_ = self.alpha[r], self.alpha[s]
        if ar < as_:
            col -= as_ - ar
        elif row >= as_:
            return None
        n = col - row
        if col < 0 or n < 0 or (r, s) not in self.coeffs:
            return None
        c = self.coeffs[(r, s)][n]
        if self.flavor == ALTERNATING:
            c = _conj_times(c, row)
        return c

    def copy(self) -> "ToeplitzFamily":
        return ToeplitzFamily(self.alpha, self.mu, self.flavor,
                              {k: [c.copy() for c in v] for k, v in self.coeffs.items()})

    def assemble(self) -> np.ndarray:
        return assemble(self)


def identity_family(alpha, mu, flavor: str = PLAIN) -> ToeplitzFamily:
    fam = ToeplitzFamily(alpha, mu, flavor)
    for r in range(fam.N):
        fam.set(r, r, 0, np.eye(fam.mu[r]))
    return fam


def assemble(fam: ToeplitzFamily) -> np.ndarray:
    """Dense matrix of a family, applying the rectangular zero padding."""
    ro = offsets([a * m for a, m in zip(fam.alpha, fam.mu)])
    out = np.zeros((fam.size, fam.size), dtype=complex)
    for (r, s), cs in fam.coeffs.items():
        sq = _square(cs, fam.flavor == ALTERNATING)
        h, w = sq.shape
        ar, as_ = fam.alpha[r], fam.alpha[s]
        top = ro[r]
        left = ro[s] + (as_ - ar) * fam.mu[s] if ar < as_ else ro[s]
        out[top:top + h, left:left + w] = sq
    return out


def extract(alpha, mu, flavor: str, X, tol: float = 1e-12) -> ToeplitzFamily:
    """Read a family back from its dense matrix.

    Raises
    ------
    NotAMember
        If `X` differs from the reassembled family anywhere by more than
        ``tol * max(1, max|X|)``.
    """
    X = np.asarray(X, dtype=complex)
    fam = ToeplitzFamily(alpha, mu, flavor)
    if X.shape != (fam.size, fam.size):
        raise ValueError(f"expected a {fam.size}x{fam.size} matrix, got {X.shape}")
    ro = offsets([a * m for a, m in zip(fam.alpha, fam.mu)])
    for r in range(fam.N):
        for s in range(fam.N):
            mr, ms = fam.mu[r], fam.mu[s]
            shift = max(fam.alpha[s] - fam.alpha[r], 0)
            cs = []
            for n in range(fam.b(r, s)):
                c0 = ro[s] + (shift + n) * ms
                cs.append(X[ro[r]:ro[r] + mr, c0:c0 + ms].copy())
            fam.coeffs[(r, s)] = cs
    scale = tol * max(1.0, float(np.abs(X).max(initial=0.0)))
    diff = np.abs(assemble(fam) - X)
    if diff.max(initial=0.0) > scale:
        i, j = np.unravel_index(np.argmax(diff), diff.shape)
        r = int(np.searchsorted(ro, i, side="right") - 1)
        s = int(np.searchsorted(ro, j, side="right") - 1)
        raise NotAMember(r, s, int((i - ro[r]) // fam.mu[r]),
                         int((j - ro[s]) // fam.mu[s]), float(diff[i, j]))
    return fam


def _perm_matrix(rows: Sequence[int]) -> np.ndarray:
    """Permutation matrix whose column ``c`` is the unit vector ``e_{rows[c]}``."""
    n = len(rows)
    p = np.zeros((n, n))
    p[np.asarray(rows, dtype=int), np.arange(n)] = 1.0
    return p


def omega(alpha: int, m: int) -> np.ndarray:
    """Regrouping permutation ``[e_1, e_{alpha+1}, ..., e_2, e_{alpha+2}, ...]``.

    Right multiplication collects columns ``k, alpha + k, ...`` together.
    """
    return _perm_matrix([j * alpha + k for k in range(alpha) for j in range(m)])


def omega_prime(alpha: int, m: int) -> np.ndarray:
    """Regrouping for ``m`` consecutive blocks of size ``2 alpha``.

    For each position ``k`` it collects first the ``k``-th columns of the
    first halves and then those of the second halves.
    """
    return _perm_matrix([2 * j * alpha + half * alpha + k
                         for k in range(alpha) for half in (0, 1) for j in range(m)])


def omega_zero(alpha: Sequence[int], mu: Sequence[int]) -> np.ndarray:
    """Global regrouping separating first and second halves of ``2 alpha_r`` blocks.

    The first half of the result is ``omega``-regrouped first halves of all
    blocks, the second half the same for the second halves.
    """
    starts = []
    pos = 0
    for a, m in zip(alpha, mu):
        starts.append([pos + 2 * a * j for j in range(m)])
        pos += 2 * a * m
    rows = [starts[r][j] + half * a + k
            for half in (0, 1)
            for r, a in enumerate(alpha)
            for k in range(a)
            for j in range(mu[r])]
    return _perm_matrix(rows)


def _direct_sum(mats) -> np.ndarray:
    n = sum(m.shape[0] for m in mats)
    out = np.zeros((n, n))
    i = 0
    for m in mats:
        k = m.shape[0]
        out[i:i + k, i:i + k] = m
        i += k
    return out


@dataclass(frozen=True)
class PermutationPack:
    omega: np.ndarray
    omega_prime: np.ndarray
    omega_zero: np.ndarray

    def get(self, which: str) -> np.ndarray:
        return {"omega": self.omega, "omega_prime": self.omega_prime,
                "omega_zero": self.omega_zero}[which]


def omega_pack(alpha, mu) -> PermutationPack:
    return PermutationPack(
        _direct_sum([omega(a, m) for a, m in zip(alpha, mu)]),
        _direct_sum([omega_prime(a, m) for a, m in zip(alpha, mu)]),
        omega_zero(alpha, mu))


def regroup(X, pack: PermutationPack, which: str = "omega",
            inverse: bool = False) -> np.ndarray:
    """``Pi^T X Pi`` (or ``Pi X Pi^T`` when `inverse`) for the chosen permutation."""
    p = pack.get(which)
    X = np.asarray(X)
    if X.shape != p.shape:
        raise ValueError(f"size mismatch: {X.shape} vs permutation {p.shape}")
    return p @ X @ p.T if inverse else p.T @ X @ p
