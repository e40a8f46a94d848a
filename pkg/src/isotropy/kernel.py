"""
Dense complex matrix helpers and real-linearization utilities.

Every matrix in the package is a two-dimensional complex ``numpy`` array.
The functions here add validation on top of numpy and provide the
machinery for computing kernels of maps that are linear over the reals
but not over the complex numbers (anything involving ``conj``).
"""
from __future__ import annotations

from typing import Callable, Iterable, Sequence

import numpy as np

__all__ = [
    "as_cmatrix", "matmul", "conj", "transpose", "conj_transpose",
    "frob", "default_tol", "close", "real_vec", "real_operator_matrix",
    "numerical_nullity", "real_linearize_nullity",
    "skew_symmetric_basis", "skew_hermitian_basis", "complex_basis",
    "real_basis", "symmetric_part",
]


def as_cmatrix(a, name: str = "matrix") -> np.ndarray:
    """Return `a` as a 2-D complex array, rejecting NaN and Inf."""
    m = np.array(a, dtype=complex)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2:
        raise ValueError(f"{name} must be two-dimensional, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return m


def matmul(a, b) -> np.ndarray:
    """Matrix product with an explicit dimension check."""
    a = as_cmatrix(a, "a")
    b = as_cmatrix(b, "b")
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    return a @ b


def conj(a) -> np.ndarray:
    return as_cmatrix(a).conj()


def transpose(a) -> np.ndarray:
    return as_cmatrix(a).T.copy()


def conj_transpose(a) -> np.ndarray:
    return as_cmatrix(a).conj().T.copy()


def frob(a) -> float:
    return float(np.linalg.norm(a))


def default_tol(*operands) -> float:
    """Comparison tolerance ``1e-9 * (1 + sum of Frobenius norms)``."""
    return 1e-9 * (1.0 + sum(frob(o) for o in operands))


def close(a, b, tol: float | None = None) -> bool:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        return False
    if tol is None:
        tol = default_tol(a, b)
    return frob(a - b) <= tol


def symmetric_part(a, hermitian: bool = False) -> np.ndarray:
    a = np.asarray(a)
    return 0.5 * (a + (a.conj().T if hermitian else a.T))


def real_vec(a) -> np.ndarray:
    """Stack ``(vec Re a, vec Im a)`` using column-major vectorization."""
    a = np.asarray(a)
    return np.concatenate([a.real.ravel(order="F"), a.imag.ravel(order="F")])


def real_operator_matrix(op: Callable[[np.ndarray], np.ndarray],
                         basis: Sequence[np.ndarray]) -> np.ndarray:
    """Real matrix of a real-linear map evaluated on a real basis.

    Column ``k`` is ``real_vec(op(basis[k]))``.
    """
    if len(basis) == 0:
        return np.zeros((0, 0))
    cols = [real_vec(op(b)) for b in basis]
    return np.column_stack(cols)


def numerical_nullity(a: np.ndarray, rtol: float | None = None) -> int:
    """Dimension of the kernel of the real matrix `a` (columns are unknowns).

    Singular values below ``rtol * sigma_max`` count as zero. The default
    ``rtol`` is ``max(rows, cols) * eps``.
    """
    rows, cols = a.shape
    if cols == 0:
        return 0
    if rows == 0:
        return cols
    s = np.linalg.svd(a, compute_uv=False)
    smax = s[0] if s.size else 0.0
    if smax == 0.0:
        return cols
    if rtol is None:
        rtol = max(rows, cols) * np.finfo(float).eps
    rank = int(np.sum(s > rtol * smax))
    return cols - rank


def real_linearize_nullity(op: Callable[[np.ndarray], np.ndarray],
                           basis: Sequence[np.ndarray],
                           rtol: float | None = None) -> int:
    """Real nullity of `op` restricted to the real span of `basis`.

    The basis must be linearly independent over the reals; the result is
    then independent of which basis of the domain is enumerated.

    Examples
    --------
    >>> real_linearize_nullity(lambda z: 0 * z, complex_basis(2, 2))
    8
    """
    basis = list(basis)
    if not basis:
        return 0
    return numerical_nullity(real_operator_matrix(op, basis), rtol)


def complex_basis(m: int, n: int) -> list[np.ndarray]:
    """Real basis of all complex ``m x n`` matrices: unit then ``i`` times unit."""
    out = []
    for j in range(n):
        for i in range(m):
            for ph in (1.0, 1j):
                e = np.zeros((m, n), dtype=complex)
                e[i, j] = ph
                out.append(e)
    return out


def real_basis(m: int, n: int) -> list[np.ndarray]:
    out = []
    for j in range(n):
        for i in range(m):
            e = np.zeros((m, n), dtype=complex)
            e[i, j] = 1.0
            out.append(e)
    return out


def skew_symmetric_basis(n: int, real: bool = False) -> list[np.ndarray]:
    """Real basis of complex (or real) skew-symmetric ``n x n`` matrices.

    Pairs ``j < k`` in lexicographic order, real unit before imaginary unit.
    """
    phases: Iterable[complex] = (1.0,) if real else (1.0, 1j)
    out = []
    for j in range(n):
        for k in range(j + 1, n):
            for ph in phases:
                z = np.zeros((n, n), dtype=complex)
                z[j, k] = ph
                z[k, j] = -ph
                out.append(z)
    return out


def skew_hermitian_basis(n: int) -> list[np.ndarray]:
    """Real basis of skew-Hermitian ``n x n`` matrices (dimension ``n**2``)."""
    out = []
    for j in range(n):
        z = np.zeros((n, n), dtype=complex)
        z[j, j] = 1j
        out.append(z)
    for j in range(n):
        for k in range(j + 1, n):
            for ph in (1.0, 1j):
                z = np.zeros((n, n), dtype=complex)
                z[j, k] = ph
                z[k, j] = -np.conj(ph)
                out.append(z)
    return out
