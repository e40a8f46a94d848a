"""Shared builders for the test suite."""
import itertools

import numpy as np

from isotropy.canonical import CanonicalSpec, EigenClass
from isotropy.congruence import CongruenceProblem
from isotropy.toeplitz import ALTERNATING, PLAIN

CLASSES = {
    "positive_real": EigenClass.positive_real(1.5),
    "zero": EigenClass.zero(),
    "negative_real": EigenClass.negative_real(0.8),
    "nonreal": EigenClass.nonreal(1 + 1j),
}


def decreasing_alphas(top=5, max_n=3):
    for n in range(1, max_n + 1):
        yield from itertools.combinations(range(top, 0, -1), n)


def sign_patterns(eigen, alpha, mu):
    rows = []
    for a, m in zip(alpha, mu):
        if eigen.kind == "zero" and a % 2:
            rows.append([(1,) * m])
        else:
            rows.append(list(itertools.product((1, -1), repeat=m)))
    return itertools.product(*rows)


def acceptance_grid():
    """All specs of the dimension-agreement grid."""
    for eigen in CLASSES.values():
        for alpha in decreasing_alphas():
            for mu in itertools.product(range(1, 4), repeat=len(alpha)):
                if eigen.kind in ("positive_real", "zero") and len(alpha) <= 2:
                    for eps in sign_patterns(eigen, alpha, mu):
                        yield CanonicalSpec(eigen, alpha, mu, eps)
                else:
                    yield CanonicalSpec(eigen, alpha, mu)


def random_spec(rng, kind, max_top=4, max_n=3, max_m=2):
    n = int(rng.integers(1, max_n + 1))
    alpha = tuple(sorted(rng.choice(np.arange(1, max_top + 1), size=min(n, max_top),
                                    replace=False), reverse=True))
    mu = tuple(int(x) for x in rng.integers(1, max_m + 1, len(alpha)))
    if kind == "positive_real":
        eigen = EigenClass.positive_real(float(rng.uniform(0.5, 3)))
    elif kind == "zero":
        eigen = EigenClass.zero()
    elif kind == "negative_real":
        eigen = EigenClass.negative_real(float(rng.uniform(0.5, 3)))
    else:
        eigen = EigenClass.nonreal(complex(rng.uniform(0.5, 2), rng.uniform(0.5, 2)))
    eps = None
    if kind in ("positive_real", "zero"):
        eps = tuple(tuple(1 if (kind == "zero" and a % 2) else int(rng.choice([1, -1]))
                          for _ in range(m)) for a, m in zip(alpha, mu))
    return CanonicalSpec(eigen, alpha, mu, eps)


def _sym(rng, m, real):
    x = rng.uniform(-1, 1, (m, m))
    if not real:
        x = x + 1j * rng.uniform(-1, 1, (m, m))
    return x + x.T


def _lead(rng, m, real, signs=None):
    # well conditioned symmetric leading coefficient
    if signs is not None:
        q, _ = np.linalg.qr(rng.normal(size=(m, m)))
        d = np.asarray(signs) * rng.uniform(0.5, 2, m)
        return (q @ np.diag(d) @ q.T).astype(complex)
    return np.eye(m) * 2 + 0.3 * _sym(rng, m, real)


def random_problem(rng, flavor, real=False):
    """Random solvable congruence problem with ``B != C``."""
    n = int(rng.integers(1, 4))
    alpha = tuple(sorted(rng.choice(np.arange(1, 5), size=n, replace=False), reverse=True))
    mu = tuple(int(x) for x in rng.integers(1, 3, n))
    B, C = [], []
    for a, m in zip(alpha, mu):
        is_real = real or flavor == ALTERNATING
        if is_real:
            signs = rng.choice([1.0, -1.0], m)
            b0 = _lead(rng, m, True, signs)
            c0 = _lead(rng, m, True, signs)
        else:
            b0, c0 = _lead(rng, m, False), _lead(rng, m, False)
        B.append([b0] + [0.3 * _sym(rng, m, is_real) for _ in range(a - 1)])
        C.append([c0] + [0.3 * _sym(rng, m, is_real) for _ in range(a - 1)])
    return CongruenceProblem(alpha, mu, B, C, flavor, real=real)


def prob_with_B(alpha, B, flavor=PLAIN, real=False):
    """Problem with ``B = C`` and a single coefficient per block."""
    Bs = [[np.asarray(b, dtype=complex)] + [np.zeros_like(b, dtype=complex)] * (a - 1)
          for a, b in zip(alpha, B)]
    return CongruenceProblem(alpha, [np.shape(b)[0] for b in B], Bs, Bs, flavor, real=real)


def random_F(rng, shape, real=False):
    x = rng.uniform(-1, 1, shape)
    if not real:
        x = x + 1j * rng.uniform(-1, 1, shape)
    return x




# criterion number -> list of (part, passed, detail), filled by the acceptance suite
ACCEPTANCE = {}


def record(criterion, part, passed, detail=""):
    ACCEPTANCE.setdefault(criterion, []).append((part, bool(passed), detail))
    line = f"criterion {criterion} [{part}]: {'PASS' if passed else 'FAIL'} {detail}".rstrip()
    print(line)
    return passed


def acceptance_lines():
    out = []
    for c in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[c]
        ok = all(p for _, p, _ in parts)
        detail = "; ".join(f"{name}: {'ok' if p else 'failed'}"
                           + (f" ({d})" if d else "") for name, p, d in parts)
        out.append(f"criterion {c:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
    return out
