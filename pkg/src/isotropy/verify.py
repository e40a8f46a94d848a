"""
Independent checks: tangent-space dimension, residual reports, unipotency.

The tangent space of the isotropy group of a Hermitian ``H`` at the
identity is the set of complex skew-symmetric ``Z`` with
``H Z - conj(Z) H = 0``; its real dimension is the dimension of the group.
For block diagonal ``H`` the equation splits into one skew problem per
diagonal block and one unconstrained problem per pair of blocks.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import block_diag
from scipy.sparse.csgraph import connected_components

from .canonical import CanonicalSpec, canonical_form
from .congruence import CongruenceProblem
from .isotropy import IsotropyElement, dimension
from .kernel import complex_basis, real_linearize_nullity, skew_symmetric_basis
from .toeplitz import ToeplitzFamily

__all__ = [
    "ORACLE_RTOL", "NotUnipotent", "VerificationReport", "tangent_dimension",
    "verify_element", "verify_family", "nilpotency_order", "splitting_check",
]

ORACLE_RTOL = 1e-8


class NotUnipotent(ValueError):
    """Raised when ``(V - I)^k`` does not vanish for any ``k <= n``."""


def _components(H: np.ndarray) -> list[np.ndarray]:
    pattern = np.abs(H) > 0
    ncomp, labels = connected_components(pattern, directed=False)
    return [np.flatnonzero(labels == c) for c in range(ncomp)]


def _skew_nullity(h: np.ndarray, rtol: float) -> int:
    return real_linearize_nullity(lambda z: h @ z - z.conj() @ h,
                                  skew_symmetric_basis(h.shape[0]), rtol)


def _pair_nullity(hi: np.ndarray, hj: np.ndarray, rtol: float) -> int:
    return real_linearize_nullity(lambda y: hi @ y - y.conj() @ hj,
                                  complex_basis(hi.shape[0], hj.shape[0]), rtol)


def tangent_dimension(H, rtol: float = ORACLE_RTOL, method: str = "auto") -> int:
    """Real dimension of the isotropy group of the Hermitian matrix `H`.

    Parameters
    ----------
    H : array_like
        Hermitian matrix.
    rtol : float
        Singular values below ``rtol * sigma_max`` count as zero.
    method : {"auto", "dense", "split"}
        ``dense`` linearizes the full equation; ``split`` uses the block
        decomposition given by the sparsity pattern of `H`.
    """
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError("H must be square")
    if np.linalg.norm(H - H.conj().T) > 1e-10 * (1 + np.linalg.norm(H)):
        raise ValueError("H must be Hermitian")
    if method == "dense":
        return _skew_nullity(H, rtol)
    comps = _components(H)
    if method == "auto" and len(comps) == 1:
        return _skew_nullity(H, rtol)
    blocks = [H[np.ix_(c, c)] for c in comps]
    total = sum(_skew_nullity(b, rtol) for b in blocks)
    for i in range(len(blocks)):
        for j in range(i + 1, len(blocks)):
            total += _pair_nullity(blocks[i], blocks[j], rtol)
    return total


@dataclass
class VerificationReport:
    """Residuals and dimension checks of one element or family."""
    residual_orth: float = 0.0
    residual_consim: float = 0.0
    residual_cong: float = 0.0
    residual_family: float | None = None
    tangent_dim_oracle: int | None = None
    formula_dim: int | None = None
    nilpotency_order: int | None = None
    thresholds: dict = field(default_factory=dict)
    passed: bool = False

    def to_dict(self) -> dict:
        return {
            "residual_orth": self.residual_orth,
            "residual_consim": self.residual_consim,
            "residual_cong": self.residual_cong,
            "residual_family": self.residual_family,
            "tangent_dim_oracle": self.tangent_dim_oracle,
            "formula_dim": self.formula_dim,
            "nilpotency_order": self.nilpotency_order,
            "thresholds": dict(self.thresholds),
            "pass": self.passed,
        }


def verify_element(spec: CanonicalSpec, Q, tol: float = 1e-8,
                   dims: bool = False) -> VerificationReport:
    """Check that `Q` lies in the isotropy group of ``canonical_form(spec)``.

    With `dims` the tangent oracle and the dimension formula are compared too.
    """
    H = canonical_form(spec)
    Q = np.asarray(Q, dtype=complex)
    if Q.shape != H.shape:
        raise ValueError(f"Q has shape {Q.shape}, expected {H.shape}")
    el = IsotropyElement.measure(H, Q)
    n = H.shape[0]
    bound = tol * (1 + np.linalg.norm(H))
    rep = VerificationReport(el.residual_orth, el.residual_consim, el.residual_cong,
                             thresholds={"orth": tol * n, "consim": bound, "cong": bound})
    ok = (el.residual_orth <= tol * n and el.residual_consim <= bound
          and el.residual_cong <= bound)
    if dims:
        rep.tangent_dim_oracle = tangent_dimension(H)
        rep.formula_dim = dimension(spec)
        ok = ok and rep.tangent_dim_oracle == rep.formula_dim
    rep.passed = bool(ok)
    return rep


def verify_family(problem: CongruenceProblem, fam: ToeplitzFamily,
                  tol: float = 1e-8) -> VerificationReport:
    """Residual of ``F X^T F B X = C`` for a family."""
    res = problem.residual(fam)
    bound = tol * (1 + np.linalg.norm(problem.calC()))
    return VerificationReport(residual_family=res, thresholds={"family": bound},
                              passed=bool(res <= bound))


def nilpotency_order(V, tol: float = 1e-10) -> int:
    """Least ``k`` with ``(V - I)^k = 0``.

    Raises
    ------
    NotUnipotent
        If no ``k <= n`` works.
    """
    V = np.asarray(V, dtype=complex)
    n = V.shape[0]
    d = V - np.eye(n)
    scale = max(1.0, np.linalg.norm(d))
    p = d.copy()
    for k in range(1, n + 1):
        if np.linalg.norm(p) <= tol * scale ** k:
            return k
        p = p @ d
    raise NotUnipotent("V - I is not nilpotent")


def splitting_check(specs: list[CanonicalSpec], rtol: float = ORACLE_RTOL) -> bool:
    """Tangent dimension of a direct sum equals the sum over its summands.

    Raises
    ------
    ValueError
        If two specs share an eigenvalue.
    """
    rhos = [complex(s.eigen.rho) for s in specs]
    for i in range(len(rhos)):
        for j in range(i + 1, len(rhos)):
            same = abs(rhos[i] - rhos[j]) < 1e-12
            if specs[i].eigen.kind == "nonreal" and specs[j].eigen.kind == "nonreal":
                same = same or abs(rhos[i] - rhos[j].conjugate()) < 1e-12
            if same:
                raise ValueError("specs must have pairwise distinct eigenvalues")
    parts = [canonical_form(s) for s in specs]
    whole = tangent_dimension(block_diag(*parts), rtol, method="dense")
    return whole == sum(tangent_dimension(p, rtol) for p in parts)
