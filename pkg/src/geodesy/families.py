"""Random algebra families with known shape, used by the test and reproduction suites.

Every generator takes a numpy ``Generator`` and returns exact algebras built
from small integers, so the same seed always yields the same algebra.
"""

from __future__ import annotations

import numpy as np

from . import algebra as alg
from . import linalg as la
from .algebra import LieAlgebra
from .linalg import Subspace


def _ints(rng: np.random.Generator, shape, lo: int = -3, hi: int = 3) -> np.ndarray:
    return rng.integers(lo, hi + 1, size=shape)


def unimodular_integer_matrix(rng: np.random.Generator, n: int, steps: int = 3) -> np.ndarray:
    """Product of elementary shears; determinant 1 and an integer inverse."""
    p = np.eye(n, dtype=np.int64)
    for _ in range(steps * n):
        i, j = rng.choice(n, size=2, replace=False)
        e = np.eye(n, dtype=np.int64)
        e[i, j] = rng.choice([-1, 1])
        p = p @ e
    return p


def _integer_inverse(p: np.ndarray) -> np.ndarray:
    inv = la.inverse(la.exact_array(p))
    return np.array([[int(x) for x in row] for row in inv], dtype=np.int64)


def _block_sizes(rng: np.random.Generator, n: int) -> list[int]:
    sizes: list[int] = []
    left = n
    while left:
        s = 2 if left >= 2 and rng.random() < 0.4 else 1
        sizes.append(s)
        left -= s
    return sizes


def commuting_traceless_family(
    rng: np.random.Generator, n: int, m: int
) -> list[np.ndarray]:
    """m commuting, trace-zero, semisimple integer n x n matrices.

    Built block-diagonally (real 1x1 blocks and a*I + b*J rotation blocks)
    and conjugated by a random unimodular integer matrix.
    """
    if not 1 <= m <= n - 1:
        raise ValueError(f"need 1 <= m <= n - 1 for a trace-zero family, got m={m}, n={n}")
    while True:
        sizes = _block_sizes(rng, n)
        mats = []
        for _ in range(m):
            d = np.zeros((n, n), dtype=np.int64)
            pos = 0
            diag_slots = []
            for s in sizes:
                if s == 1:
                    d[pos, pos] = rng.integers(-3, 4)
                    diag_slots.append((pos, 1))
                else:
                    a, b = rng.integers(-2, 3), rng.integers(-2, 3)
                    d[pos : pos + 2, pos : pos + 2] = [[a, -b], [b, a]]
                    diag_slots.append((pos, 2))
                pos += s
            # shift the last block so the trace vanishes
            p0, s0 = diag_slots[-1]
            rest = int(np.trace(d)) - s0 * int(d[p0, p0])
            if rest % s0:
                continue
            for t in range(s0):
                d[p0 + t, p0 + t] = -rest // s0
            mats.append(d)
        if len(mats) < m:
            continue
        flat = np.array([a.ravel() for a in mats], dtype=float)
        if np.linalg.matrix_rank(flat) < m:
            continue
        # no block on which every operator vanishes: keeps the nilradical equal to R^n
        pos, dead = 0, False
        for s in sizes:
            if all(not a[pos : pos + s, pos : pos + s].any() for a in mats):
                dead = True
            pos += s
        if dead:
            continue
        p = unimodular_integer_matrix(rng, n)
        pinv = _integer_inverse(p)
        return [p @ a @ pinv for a in mats]


def abelian_extension(mats, name: str = "") -> LieAlgebra:
    """R^m acting on R^n by commuting matrices; generators Y1..Ym come first."""
    m = len(mats)
    n = mats[0].shape[0]
    dim = m + n
    c = la.zeros((dim, dim, dim), True)
    for a, mat in enumerate(mats):
        ex = la.exact_array(mat)
        for j in range(n):
            c[a, m + j, m:] = ex[:, j]
            c[m + j, a, m:] = -ex[:, j]
    labels = tuple(f"Y{a + 1}" for a in range(m)) + tuple(f"X{j + 1}" for j in range(n))
    g = LieAlgebra(c, labels, name)
    return g


def unimodular_abelian_extension(
    rng: np.random.Generator, n: int | None = None, m: int | None = None
) -> LieAlgebra:
    """Unimodular solvable algebra with abelian nilradical R^n, n in 3..5."""
    n = int(rng.integers(3, 6)) if n is None else n
    m = int(rng.integers(1, 3)) if m is None else m
    mats = commuting_traceless_family(rng, n, m)
    return abelian_extension(mats, name=f"ext(n={n},m={m})")


def codim1_abelian(
    rng: np.random.Generator, n: int | None = None, traceless: bool = False
) -> tuple[LieAlgebra, Subspace]:
    """Suspension of R^n by a random non-scalar integer matrix, with its ideal R^n."""
    n = int(rng.integers(2, 6)) if n is None else n
    while True:
        a = _ints(rng, (n, n))
        if traceless:
            a[-1, -1] -= int(np.trace(a))
        if not np.array_equal(a, a[0, 0] * np.eye(n, dtype=a.dtype)):
            break
    g = alg.suspension(LieAlgebra.abelian(n, True), la.exact_array(a), name=f"susp(R^{n})")
    h = alg.span(g, [g.basis_vector(i) for i in range(1, n + 1)])
    return g, h


def heisenberg(m: int) -> LieAlgebra:
    """H_{2m+1}: [X_i, X_{i+m}] = X_{2m+1}."""
    table = {(i, i + m): {2 * m + 1: 1} for i in range(1, m + 1)}
    return LieAlgebra.from_brackets(2 * m + 1, table, name=f"H{2 * m + 1}")


def unimodular_heisenberg_suspension(
    rng: np.random.Generator, m: int | None = None
) -> tuple[LieAlgebra, Subspace]:
    """H_{2m+1} suspended by a trace-zero derivation, with the ideal H_{2m+1}.

    The derivation is J*S on the symplectic part (S symmetric integer), kills
    the centre, and sends X_i to a random multiple of the centre.
    """
    m = int(rng.integers(1, 3)) if m is None else m
    k = 2 * m
    j = np.zeros((k, k), dtype=np.int64)
    j[:m, m:] = np.eye(m, dtype=np.int64)
    j[m:, :m] = -np.eye(m, dtype=np.int64)
    s = _ints(rng, (k, k), -2, 2)
    s = s + s.T
    b = j @ s
    phi = np.zeros((k + 1, k + 1), dtype=np.int64)
    phi[:k, :k] = b
    phi[k, :k] = _ints(rng, k, -2, 2)
    h_alg = heisenberg(m)
    g = alg.suspension(h_alg, la.exact_array(phi), name=f"susp(H{k + 1})")
    h = alg.span(g, [g.basis_vector(i) for i in range(1, k + 2)])
    return g, h
