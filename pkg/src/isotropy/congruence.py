"""
Solver for the structured congruence equation ``C = F X^T F B X``.

``B`` and ``C`` are block diagonal with upper triangular Toeplitz blocks
``T(B_0^r, ..., B_{alpha_r - 1}^r)``, ``F`` reverses the block order inside
each diagonal block and ``X`` is a block Toeplitz family (plain or
alternating).  Comparing first block rows reduces the equation to a
sequence of small linear problems, solved in the order ``j`` (outer) and
block offset ``p`` (inner):

* off-diagonal blocks ``A_j^{r,r+p}``: ``G_r A = R`` with a fixed ``G_r``;
* diagonal blocks ``A_j^{rr}``: ``G_r A + (G_r A)^T = R`` (or with ``^*``),
  whose solutions are ``G_r^{-1}(R / 2 + Z)`` with ``Z`` skew.

The strictly lower blocks, the base blocks ``A_0^{rr}`` and the skew
matrices ``Z`` are the free parameters.

Three variants are supported: ``plain`` (optionally real), ``alternating``
(real ``B``, ``C``; Hermitian steps for some ``j``) and ``vw`` (plain with
coefficients of the form ``[[V, W], [-mu^2 conj(W) + conj(W_prev), conj(V)]]``).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import block_diag, sqrtm

from .kernel import skew_symmetric_basis
from .toeplitz import (ALTERNATING, PLAIN, ToeplitzFamily, identity_family,
                       toeplitz)

VW = "vw"
PROBLEM_FLAVORS = (PLAIN, ALTERNATING, VW)

__all__ = [
    "VW", "Unsolvable", "CongruenceProblem", "FreeParameters", "CongruenceWork",
    "solve_congruence", "solve_congruence_alternating", "solve_congruence_vw",
    "first_row_entry", "inertia", "base_solution", "vw_matrix", "vw_skew",
    "vw_split", "z_kind", "parameter_counts",
]


class Unsolvable(Exception):
    """The congruence equation has no solution (inertia obstruction)."""


def inertia(a, tol: float = 1e-10) -> tuple[int, int, int]:
    """``(positive, negative, zero)`` eigenvalue counts of a Hermitian matrix."""
    w = np.linalg.eigvalsh(np.asarray(a))
    scale = tol * max(1.0, float(np.abs(w).max(initial=0.0)))
    return int((w > scale).sum()), int((w < -scale).sum()), int((abs(w) <= scale).sum())


def vw_matrix(v, w, mu: float, w_prev=None) -> np.ndarray:
    """``[[V, W], [-mu^2 conj(W) + conj(W_prev), conj(V)]]``."""
    v = np.asarray(v, dtype=complex)
    w = np.asarray(w, dtype=complex)
    low = -mu ** 2 * w.conj()
    if w_prev is not None:
        low = low + np.asarray(w_prev).conj()
    return np.block([[v, w], [low, v.conj()]])


def vw_skew(v, w, mu: float) -> np.ndarray:
    """Skew matrix ``[[-mu^2 V, W], [conj(W), conj(V)]]`` for ``V`` skew, ``W`` skew-Hermitian."""
    v = np.asarray(v, dtype=complex)
    w = np.asarray(w, dtype=complex)
    return np.block([[-mu ** 2 * v, w], [w.conj(), v.conj()]])


def vw_split(a, mu: float, w_prev=None) -> tuple[np.ndarray, np.ndarray, float]:
    """Split a coefficient into ``(V, W)`` and return the shape deviation."""
    a = np.asarray(a)
    hr, hs = a.shape[0] // 2, a.shape[1] // 2
    v, w = a[:hr, :hs], a[:hr, hs:]
    dev = float(np.linalg.norm(a - vw_matrix(v, w, mu, w_prev)))
    return v, w, dev


def z_kind(flavor: str, alpha_r: int, j: int) -> str:
    """Symmetry demanded of ``Z_j^r``: ``"skew"``, ``"skew_hermitian"`` or ``"vw"``."""
    if flavor == ALTERNATING and (alpha_r - j) % 2 == 0:
        return "skew_hermitian"
    if flavor == VW:
        return "vw"
    return "skew"


@dataclass
class CongruenceProblem:
    """Data ``B``, ``C`` of the congruence equation.

    Parameters
    ----------
    alpha : sequence of int
        Strictly decreasing block sizes.
    mu : sequence of int
        Coefficient sizes ``m_r`` (even for the ``vw`` flavor).
    B, C : list of lists of arrays
        ``B[r][n]`` is the symmetric coefficient ``B_n^r`` for
        ``n < alpha[r]``.
    flavor : {"plain", "alternating", "vw"}
    real : bool
        Plain flavor restricted to real solutions.
    vw_mu : float, optional
        The parameter ``mu`` of the ``vw`` flavor.
    """
    alpha: tuple
    mu: tuple
    B: list
    C: list
    flavor: str = PLAIN
    real: bool = False
    vw_mu: float | None = None

    def __post_init__(self):
        self.alpha = tuple(int(a) for a in self.alpha)
        self.mu = tuple(int(m) for m in self.mu)
        if self.flavor not in PROBLEM_FLAVORS:
            raise ValueError(f"unknown flavor {self.flavor!r}")
        if any(a <= b for a, b in zip(self.alpha, self.alpha[1:])):
            raise ValueError("alpha must be strictly decreasing")
        self.B = [[np.asarray(c, dtype=complex) for c in bs] for bs in self.B]
        self.C = [[np.asarray(c, dtype=complex) for c in cs] for cs in self.C]
        for name, data in (("B", self.B), ("C", self.C)):
            if len(data) != self.N:
                raise ValueError(f"{name} needs one coefficient list per block size")
            for r, cs in enumerate(data):
                if len(cs) != self.alpha[r]:
                    raise ValueError(f"{name}[{r}] needs {self.alpha[r]} coefficients")
                for c in cs:
                    if c.shape != (self.mu[r], self.mu[r]):
                        raise ValueError(f"{name}[{r}] coefficient has wrong shape")
                    if np.linalg.norm(c - c.T) > 1e-10 * (1 + np.linalg.norm(c)):
                        raise ValueError(f"{name}[{r}] coefficients must be symmetric")
                if abs(np.linalg.det(cs[0])) < 1e-300 or np.linalg.cond(cs[0]) > 1e12:
                    raise ValueError(f"{name}[{r}] leading coefficient must be nonsingular")
        if self.flavor == ALTERNATING or self.real:
            for data in (self.B, self.C):
                if any(np.abs(c.imag).max(initial=0) > 0 for cs in data for c in cs):
                    raise ValueError("this flavor needs real B and C")
        if self.flavor == VW:
            if self.vw_mu is None or self.vw_mu <= 0:
                raise ValueError("vw flavor needs vw_mu > 0")
            if any(m % 2 for m in self.mu):
                raise ValueError("vw flavor needs even coefficient sizes")

    @property
    def N(self) -> int:
        return len(self.alpha)

    @property
    def family_flavor(self) -> str:
        return ALTERNATING if self.flavor == ALTERNATING else PLAIN

    def calB(self) -> np.ndarray:
        return block_diag(*[toeplitz(bs) for bs in self.B])

    def calC(self) -> np.ndarray:
        return block_diag(*[toeplitz(cs) for cs in self.C])

    def calF(self) -> np.ndarray:
        return block_diag(*[np.kron(np.fliplr(np.eye(a)), np.eye(m))
                            for a, m in zip(self.alpha, self.mu)])

    def lhs(self, X: np.ndarray) -> np.ndarray:
        f = self.calF()
        return f @ X.T @ f @ self.calB() @ X

    def residual(self, fam: ToeplitzFamily | np.ndarray) -> float:
        """``||F X^T F B X - C||_F``."""
        X = fam.assemble() if isinstance(fam, ToeplitzFamily) else np.asarray(fam)
        return float(np.linalg.norm(self.lhs(X) - self.calC()))

    def threshold(self) -> float:
        return 1e-8 * (1.0 + float(np.linalg.norm(self.calC())))


@dataclass
class FreeParameters:
    """Free data of a solution.

    Attributes
    ----------
    a0 : dict
        ``r -> A_0^{rr}``, a solution of the base equation.
    sub : dict
        ``(r, s) -> [A_0^{rs}, ..., A_{b-1}^{rs}]`` for ``r > s``.
    z : dict
        ``(r, j) -> Z_j^r`` for ``1 <= j < alpha[r]``.
    """
    a0: dict = field(default_factory=dict)
    sub: dict = field(default_factory=dict)
    z: dict = field(default_factory=dict)

    @classmethod
    def defaults(cls, problem: CongruenceProblem) -> "FreeParameters":
        """Base solutions from :func:`base_solution`, zero elsewhere."""
        p = cls()
        for r in range(problem.N):
            p.a0[r] = base_solution(problem, r)
            for j in range(1, problem.alpha[r]):
                p.z[(r, j)] = np.zeros((problem.mu[r],) * 2, dtype=complex)
            for s in range(r):
                p.sub[(r, s)] = [np.zeros((problem.mu[r], problem.mu[s]), dtype=complex)
                                 for _ in range(problem.alpha[r])]
        return p


def base_solution(problem: CongruenceProblem, r: int) -> np.ndarray:
    """One solution ``A`` of the base equation ``C_0 = A^T B_0 A`` (or ``A^* B_0 A``).

    Raises
    ------
    Unsolvable
        When the inertia of ``B_0`` and ``C_0`` differ in a case that needs it.
    """
    b0, c0 = problem.B[r][0], problem.C[r][0]
    m = problem.mu[r]
    if np.allclose(b0, c0, rtol=0, atol=1e-14):
        return np.eye(m, dtype=complex)
    hermitian = problem.flavor == ALTERNATING and problem.alpha[r] % 2 == 0
    if problem.real or hermitian:
        if inertia(b0.real) != inertia(c0.real):
            raise Unsolvable(f"B_0 and C_0 of block {r} have different inertia")
        wb, qb = np.linalg.eigh(b0.real)
        wc, qc = np.linalg.eigh(c0.real)
        # eigh sorts ascending, so equal inertia pairs signs position by position
        return (qb @ np.diag(np.sqrt(wc / wb)) @ qc.T).astype(complex)
    if problem.flavor == VW:
        mu = problem.vw_mu
        kk = np.diag(np.r_[-mu ** 2 * np.ones(m // 2), np.ones(m // 2)])
        u0 = b0[m // 2, m // 2].real
        v0 = c0[m // 2, m // 2].real
        if np.allclose(b0, u0 * kk) and np.allclose(c0, v0 * kk) and v0 / u0 > 0:
            return np.sqrt(v0 / u0) * np.eye(m, dtype=complex)
        raise ValueError("no default base solution for these vw coefficients")
    xb = sqrtm(b0)
    xc = sqrtm(c0)
    return np.linalg.solve(xb, xc)


def _conj_if(a: np.ndarray, flag) -> np.ndarray:
    return a.conj() if flag else a


def first_row_entry(fam: ToeplitzFamily, B: list, r: int, s: int, col: int,
                    per_k: bool = False):
    """First block row, block column `col`, of block ``(r, s)`` of ``F X^T F B X``.

    With `per_k` the list of the ``N`` contributions (sum over ``k``) is
    returned instead of the sum.
    """
    terms = []
    for k in range(fam.N):
        ak = fam.alpha[k]
        acc = np.zeros((fam.mu[r], fam.mu[s]), dtype=complex)
        for c in range(ak):
            left = fam.entry(k, r, ak - 1 - c, fam.alpha[r] - 1)
            if left is None:
                continue
            y = np.zeros((fam.mu[k], fam.mu[s]), dtype=complex)
            hit = False
            for d in range(c, ak):
                x = fam.entry(k, s, d, col)
                if x is not None:
                    y = y + B[k][d - c] @ x
                    hit = True
            if hit:
                acc = acc + left.T @ y
        terms.append(acc)
    return terms if per_k else sum(terms)


def _check_kind(z: np.ndarray, kind: str, mu: float | None, tol: float) -> None:
    z = np.asarray(z)
    if kind == "skew_hermitian":
        dev = np.linalg.norm(z + z.conj().T)
    else:
        dev = np.linalg.norm(z + z.T)
        if kind == "vw":
            h = z.shape[0] // 2
            v = z[h:, h:].conj()
            w = z[:h, h:]
            dev += np.linalg.norm(z - vw_skew(v, w, mu))
    if dev > tol * (1 + np.linalg.norm(z)):
        raise ValueError(f"Z violates the required symmetry ({kind})")


@dataclass
class CongruenceWork:
    """Scratch data of one solve.

    Attributes
    ----------
    G : dict
        ``r -> G_r``, the coefficient of the unknown in each step.
    D : dict
        ``(r, s, j) -> D``, the known part of the first-row equation.
    Zp : dict
        ``(r, j) -> Z`` skew corrections keeping vw-flavor coefficients in shape.
    order : list
        ``(r, s, j)`` in the order the blocks were computed.
    """
    G: dict = field(default_factory=dict)
    D: dict = field(default_factory=dict)
    Zp: dict = field(default_factory=dict)
    order: list = field(default_factory=list)

    # printed Plain-flavor tables, used as cross-checks
    @staticmethod
    def phi(fam: ToeplitzFamily, B: list, k: int, s: int, n: int) -> np.ndarray:
        """``Phi_n^{ks} = sum_i B_{n-i}^k A_i^{ks}``."""
        out = np.zeros((fam.mu[k], fam.mu[s]), dtype=complex)
        for i in range(n + 1):
            if n - i < len(B[k]) and i < fam.b(k, s):
                out = out + B[k][n - i] @ fam.coeff(k, s, i)
        return out

    @classmethod
    def psi(cls, fam: ToeplitzFamily, B: list, k: int, r: int, s: int, n: int) -> np.ndarray:
        """``Psi_n^{krs} = sum_i (A_i^{kr})^T Phi_{n-i}^{ks}`` (zero for ``n < 0``)."""
        out = np.zeros((fam.mu[r], fam.mu[s]), dtype=complex)
        for i in range(n + 1):
            if i < fam.b(k, r):
                out = out + fam.coeff(k, r, i).T @ cls.phi(fam, B, k, s, n - i)
        return out

    @classmethod
    def psi_tilde(cls, fam: ToeplitzFamily, B: list, k: int, r: int, s: int, n: int) -> np.ndarray:
        """``Psi_n^{krs}`` without the terms containing ``A_0^{kr}`` and ``A_n^{ks}`` together."""
        a0 = fam.coeff(k, r, 0)
        return cls.psi(fam, B, k, r, s, n) - a0.T @ B[k][0] @ fam.coeff(k, s, n)


def _solve(problem: CongruenceProblem, params: FreeParameters,
           tol: float = 1e-9) -> tuple[ToeplitzFamily, CongruenceWork]:
    N = problem.N
    alpha, mu = problem.alpha, problem.mu
    fam = ToeplitzFamily(alpha, mu, problem.family_flavor)
    work = CongruenceWork()
    alt = problem.flavor == ALTERNATING
    vmu = problem.vw_mu

    if alt:
        for r in range(N):
            if alpha[r] % 2 == 0 and inertia(problem.B[r][0].real) != inertia(problem.C[r][0].real):
                raise Unsolvable(f"B_0 and C_0 of block {r} have different inertia")

    for r in range(N):
        if r not in params.a0:
            raise ValueError(f"missing base block a0[{r}]")
        a0 = np.asarray(params.a0[r], dtype=complex)
        if a0.shape != (mu[r], mu[r]):
            raise ValueError(f"a0[{r}] has wrong shape")
        if problem.real and np.abs(a0.imag).max() > 0:
            raise ValueError("real problems need real parameters")
        if problem.flavor == VW and vw_split(a0, vmu)[2] > tol * (1 + np.linalg.norm(a0)):
            raise ValueError(f"a0[{r}] is not of the vw shape")
        herm = alt and alpha[r] % 2 == 0
        lhs = (a0.conj().T if herm else a0.T) @ problem.B[r][0] @ a0
        c0 = problem.C[r][0]
        if np.linalg.norm(lhs - c0) > tol * (1 + np.linalg.norm(c0)):
            raise ValueError(f"a0[{r}] does not solve the base equation")
        fam.set(r, r, 0, a0)
        for s in range(r):
            cs = params.sub.get((r, s))
            if cs is None:
                raise ValueError(f"missing sub-diagonal block sub[{(r, s)}]")
            if len(cs) != fam.b(r, s):
                raise ValueError(f"sub[{(r, s)}] needs {fam.b(r, s)} coefficients")
            for n, c in enumerate(cs):
                c = np.asarray(c, dtype=complex)
                if problem.real and np.abs(c.imag).max(initial=0) > 0:
                    raise ValueError("real problems need real parameters")
                if problem.flavor == VW:
                    prev = cs[n - 1][:mu[r] // 2, mu[s] // 2:] if n else None
                    if vw_split(c, vmu, prev)[2] > tol * (1 + np.linalg.norm(c)):
                        raise ValueError(f"sub[{(r, s)}][{n}] is not of the vw shape")
                fam.set(r, s, n, c)

    for r in range(N):
        # coefficient of the unknown in the first-row equations of block row r
        corner = fam.entry(r, r, alpha[r] - 1, alpha[r] - 1)
        work.G[r] = corner.T @ problem.B[r][0]

    for j in range(alpha[0]):
        for p in range(N):
            for r in range(N - p):
                s = r + p
                if j >= alpha[s] or (p == 0 and j == 0):
                    continue
                D = first_row_entry(fam, problem.B, r, s, j)
                work.D[(r, s, j)] = D
                work.order.append((r, s, j))
                target = problem.C[r][j] if p == 0 else 0.0
                rhs = target - D
                G = work.G[r]
                if p:
                    fam.set(r, s, j, np.linalg.solve(G, rhs))
                    continue
                kind = z_kind(problem.flavor, alpha[r], j)
                herm = kind == "skew_hermitian"
                sym = rhs.conj().T if herm else rhs.T
                if np.linalg.norm(rhs - sym) > 1e-7 * (1 + np.linalg.norm(rhs)):
                    raise ArithmeticError(f"right-hand side at {(r, j)} lost its symmetry")
                rhs = 0.5 * (rhs + sym)
                if (r, j) not in params.z:
                    raise ValueError(f"missing skew parameter z[{(r, j)}]")
                z = np.asarray(params.z[(r, j)], dtype=complex)
                if z.shape != (mu[r], mu[r]):
                    raise ValueError(f"z[{(r, j)}] has wrong shape")
                if problem.real and np.abs(z.imag).max(initial=0) > 0:
                    raise ValueError("real problems need real parameters")
                _check_kind(z, kind, vmu, tol)
                base = np.linalg.solve(G, 0.5 * rhs)
                if problem.flavor == VW:
                    w_prev = fam.coeff(r, r, j - 1)[:mu[r] // 2, mu[r] // 2:]
                    zp = _vw_correction(G, base, vmu, w_prev)
                    work.Zp[(r, j)] = zp
                    base = base + np.linalg.solve(G, zp)
                fam.set(r, s, j, base + np.linalg.solve(G, z))
    if problem.real:
        for key, cs in fam.coeffs.items():
            fam.coeffs[key] = [c.real.astype(complex) for c in cs]
    return fam, work


def _vw_deviation(a: np.ndarray, mu: float) -> np.ndarray:
    h = a.shape[0] // 2
    return np.concatenate([(a[h:, :h] + mu ** 2 * a[:h, h:].conj()).ravel(),
                           (a[h:, h:] - a[:h, :h].conj()).ravel()])


def _vw_correction(G: np.ndarray, base: np.ndarray, mu: float,
                   w_prev: np.ndarray) -> np.ndarray:
    """Minimum-norm skew ``Z`` moving ``base + G^{-1} Z`` onto the vw shape.

    The vw-skew matrices span the kernel of this correction problem, so the
    result is orthogonal to the user-chosen part of ``Z``.
    """
    m = G.shape[0]
    h = m // 2
    shift = np.zeros((m, m), dtype=complex)
    shift[h:, :h] = w_prev.conj()
    target = -(_vw_deviation(base - shift, mu))
    basis = skew_symmetric_basis(m)
    cols = [_vw_deviation(np.linalg.solve(G, z), mu) for z in basis]
    a = np.column_stack([np.r_[c.real, c.imag] for c in cols])
    b = np.r_[target.real, target.imag]
    coef, *_ = np.linalg.lstsq(a, b, rcond=None)
    if np.linalg.norm(a @ coef - b) > 1e-8 * (1 + np.linalg.norm(b)):
        raise ArithmeticError("no skew correction restores the vw shape")
    return sum((c * z for c, z in zip(coef, basis)), np.zeros((m, m), dtype=complex))


def _verify(problem: CongruenceProblem, fam: ToeplitzFamily) -> None:
    res = problem.residual(fam)
    if not np.isfinite(res) or res > problem.threshold():
        raise ArithmeticError(f"solution residual {res:.3e} exceeds the threshold")


def solve_congruence(problem: CongruenceProblem, params: FreeParameters,
                     return_work: bool = False):
    """Solve ``C = F X^T F B X`` in the plain flavor.

    Parameters
    ----------
    problem : CongruenceProblem
        Plain (possibly real) or vw problem.
    params : FreeParameters

    Returns
    -------
    ToeplitzFamily
        The solution; with `return_work` also the :class:`CongruenceWork`.
    """
    if problem.flavor == ALTERNATING:
        raise ValueError("use solve_congruence_alternating for this problem")
    fam, work = _solve(problem, params)
    if problem.flavor == VW:
        _check_vw_output(fam, problem.vw_mu)
    _verify(problem, fam)
    return (fam, work) if return_work else fam


def solve_congruence_alternating(problem: CongruenceProblem, params: FreeParameters,
                                 return_work: bool = False):
    """Solve ``C = F X^T F B X`` for a complex-alternating family.

    Raises
    ------
    Unsolvable
        If ``B_0^r`` and ``C_0^r`` have different inertia for an even ``alpha_r``.
    """
    if problem.flavor != ALTERNATING:
        raise ValueError("problem flavor must be alternating")
    fam, work = _solve(problem, params)
    _verify(problem, fam)
    return (fam, work) if return_work else fam


def _check_vw_output(fam: ToeplitzFamily, mu: float, tol: float = 1e-8) -> None:
    for (r, s), cs in fam.coeffs.items():
        prev = None
        for n, c in enumerate(cs):
            _, w, dev = vw_split(c, mu, prev)
            if dev > tol * (1 + np.linalg.norm(c)):
                raise ArithmeticError(f"coefficient {n} of block {(r, s)} lost the vw shape")
            prev = w


def solve_congruence_vw(problem: CongruenceProblem, params: FreeParameters,
                        return_work: bool = False):
    """Solve the plain equation with coefficients of the vw shape.

    ``a0`` and the sub-diagonal coefficients must have the vw shape and each
    ``Z`` must be a :func:`vw_skew` matrix.
    """
    if problem.flavor != VW:
        raise ValueError("problem flavor must be vw")
    return solve_congruence(problem, params, return_work)


def parameter_counts(problem: CongruenceProblem) -> dict:
    """Real dimension of each group of free parameters.

    Keys are ``"a0"``, ``"sub"`` and ``"z"``; ``"total"`` is their sum.
    """
    a0 = sub = z = 0
    for r, (a, m) in enumerate(zip(problem.alpha, problem.mu)):
        for s in range(r):
            k = a * m * problem.mu[s]
            # vw coefficients carry 4 m_r' m_s' = m_r m_s real parameters
            sub += k if (problem.real or problem.flavor == VW) else 2 * k
        if problem.flavor == VW:
            h = m // 2
            per = 2 * h * h - h
            a0 += per
            z += (a - 1) * per
            continue
        skew = m * (m - 1) // 2 if problem.real else m * (m - 1)
        if problem.flavor == ALTERNATING and a % 2 == 0:
            a0 += m * m
        else:
            a0 += skew
        for j in range(1, a):
            z += m * m if z_kind(problem.flavor, a, j) == "skew_hermitian" else skew
    return {"a0": a0, "sub": sub, "z": z, "total": a0 + sub + z}
