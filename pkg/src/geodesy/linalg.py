"""Linear algebra over exact scalars or IEEE doubles.

Exact matrices are numpy ``object`` arrays holding Fractions and Surds; float
matrices are ``float64``.  Every routine takes the mode from its input dtype.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .scalar import Surd, sign, to_exact

PIVOT_TOL = 1e-10
ZERO_TOL = 1e-9


def is_exact_array(a: np.ndarray) -> bool:
    return np.asarray(a).dtype == object


def exact_array(data) -> np.ndarray:
    arr = np.asarray(data, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = to_exact(v)
    return out


def to_float(a) -> np.ndarray:
    a = np.asarray(a)
    if a.dtype == object:
        return np.vectorize(float, otypes=[float])(a) if a.size else a.astype(float)
    return a.astype(float)


def zeros(shape, exact: bool) -> np.ndarray:
    if exact:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out
    return np.zeros(shape)


def identity(n: int, exact: bool) -> np.ndarray:
    out = zeros((n, n), exact)
    for i in range(n):
        out[i, i] = Fraction(1) if exact else 1.0
    return out


def scalar_is_zero(x, tol: float = ZERO_TOL) -> bool:
    if isinstance(x, (Fraction, Surd, int)):
        return x == 0
    return abs(x) <= tol


def all_zero(a: np.ndarray, tol: float = ZERO_TOL) -> bool:
    a = np.asarray(a)
    if a.dtype == object:
        return all(v == 0 for v in a.flat)
    return bool(np.all(np.abs(a) <= tol))


def max_abs(a) -> float:
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    if a.dtype == object:
        return max(abs(float(v)) for v in a.flat)
    return float(np.max(np.abs(a)))


def _abs_key(x) -> float:
    return abs(float(x))


def rref(m: np.ndarray, tol: float = PIVOT_TOL) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form with unit pivots.

    Exact mode takes the first nonzero entry as pivot.  Float mode uses the
    largest entry in the column (partial pivoting) and treats magnitudes at or
    below ``tol`` as zero; the result is still canonical.
    """
    a = np.array(m, dtype=object if is_exact_array(m) else float, copy=True)
    exact = a.dtype == object
    rows, cols = a.shape if a.ndim == 2 else (0, 0)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        if exact:
            p = next((i for i in range(r, rows) if a[i, c] != 0), None)
        else:
            col = np.abs(a[r:, c])
            k = int(np.argmax(col)) if col.size else 0
            p = r + k if col.size and col[k] > tol else None
        if p is None:
            if not exact:
                a[r:, c] = 0.0
            continue
        if p != r:
            a[[r, p]] = a[[p, r]]
        piv = a[r, c]
        a[r] = a[r] / piv if not exact else np.array([v / piv for v in a[r]], dtype=object)
        for i in range(rows):
            if i != r:
                f = a[i, c]
                if (f != 0) if exact else (f != 0.0):
                    a[i] = a[i] - f * a[r]
        if not exact:
            a[r, c] = 1.0
            for i in range(rows):
                if i != r:
                    a[i, c] = 0.0
        pivots.append(c)
        r += 1
    a = a[:r]
    if not exact:
        a[np.abs(a) <= tol] = 0.0
    return a, pivots


def rank(m: np.ndarray, tol: float = 1e-8) -> int:
    m = np.asarray(m)
    if m.size == 0:
        return 0
    if m.dtype == object:
        return len(rref(m)[1])
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(s > tol * max(1.0, s[0])))


def nullspace(m: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Basis of {x : m x = 0}, returned as rows."""
    m = np.asarray(m)
    n = m.shape[1]
    if m.dtype == object:
        if m.shape[0] == 0:
            return identity(n, True)
        r, piv = rref(m)
        free = [c for c in range(n) if c not in piv]
        out = zeros((len(free), n), True)
        for k, f in enumerate(free):
            out[k, f] = Fraction(1)
            for i, pc in enumerate(piv):
                out[k, pc] = -r[i, f]
        return out
    if m.shape[0] == 0:
        return np.eye(n)
    u, s, vt = np.linalg.svd(m)
    scale = max(1.0, s[0]) if s.size else 1.0
    r = int(np.sum(s > tol * scale))
    return vt[r:].copy()


def det(m: np.ndarray):
    m = np.asarray(m)
    n = m.shape[0]
    if m.dtype != object:
        return float(np.linalg.det(m)) if n else 1.0
    a = m.copy()
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i, c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[[c, p]] = a[[p, c]]
            d = -d
        piv = a[c, c]
        d = d * piv
        for i in range(c + 1, n):
            f = a[i, c] / piv
            if f != 0:
                a[i] = a[i] - f * a[c]
    return d


def charpoly(m: np.ndarray) -> list:
    """Coefficients of det(tI - m), leading first (Faddeev-LeVerrier)."""
    m = np.asarray(m)
    n = m.shape[0]
    exact = m.dtype == object
    coeffs = [Fraction(1) if exact else 1.0]
    acc = zeros((n, n), exact)
    eye = identity(n, exact)
    for k in range(1, n + 1):
        acc = m.dot(acc) + coeffs[-1] * eye
        coeffs.append(-np.trace(m.dot(acc)) / k)
    return coeffs


def inverse(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m)
    n = m.shape[0]
    if m.dtype != object:
        return np.linalg.inv(m)
    aug = np.concatenate([m, identity(n, True)], axis=1)
    r, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise np.linalg.LinAlgError("singular matrix")
    return r[:, n:]


def solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if is_exact_array(a):
        return inverse(a).dot(b)
    return np.linalg.solve(a, b)


def is_positive_definite(g: np.ndarray, tol: float = 1e-12) -> bool:
    g = np.asarray(g)
    n = g.shape[0]
    if g.dtype == object:
        if any(g[i, j] != g[j, i] for i in range(n) for j in range(n)):
            return False
        return all(sign(det(g[:k, :k])) > 0 for k in range(1, n + 1))
    if not np.allclose(g, g.T, atol=tol):
        return False
    return all(np.linalg.det(g[:k, :k]) > tol for k in range(1, n + 1))


def gram_schmidt(vectors: np.ndarray, metric: np.ndarray) -> np.ndarray:
    """Orthonormalize rows of ``vectors`` with respect to ``metric`` (float)."""
    out: list[np.ndarray] = []
    for v in np.asarray(vectors, dtype=float):
        w = v.copy()
        for u in out:
            w = w - (u @ metric @ w) * u
        nrm = np.sqrt(w @ metric @ w)
        if nrm > 1e-12:
            out.append(w / nrm)
    return np.array(out).reshape(len(out), np.asarray(vectors).shape[1])


@dataclass(frozen=True)
class Subspace:
    """A subspace of the coordinate space, stored in canonical RREF rows."""

    rows: np.ndarray
    ambient: int

    @classmethod
    def span(cls, vectors, ambient: int | None = None, exact: bool | None = None) -> "Subspace":
        arr = np.asarray(vectors)
        if exact is None:
            exact = arr.dtype == object
        if ambient is None:
            ambient = arr.shape[-1]
        arr = arr.reshape(-1, ambient) if arr.size else zeros((0, ambient), exact)
        if exact and arr.dtype != object:
            arr = exact_array(arr)
        if not exact and arr.dtype == object:
            arr = to_float(arr)
        r, _ = rref(arr) if arr.shape[0] else (arr, [])
        return cls(r, ambient)

    @classmethod
    def zero(cls, ambient: int, exact: bool = True) -> "Subspace":
        return cls(zeros((0, ambient), exact), ambient)

    @classmethod
    def full(cls, ambient: int, exact: bool = True) -> "Subspace":
        return cls(identity(ambient, exact), ambient)

    @property
    def exact(self) -> bool:
        return self.rows.dtype == object

    @property
    def dim(self) -> int:
        return self.rows.shape[0]

    @property
    def codim(self) -> int:
        return self.ambient - self.dim

    def basis(self) -> np.ndarray:
        return self.rows

    def contains(self, v) -> bool:
        v = np.asarray(v).reshape(1, self.ambient)
        if self.exact and v.dtype != object:
            v = exact_array(v)
        stacked = np.concatenate([self.rows, v.astype(self.rows.dtype)], axis=0)
        return rank(stacked) == self.dim

    def __le__(self, other: "Subspace") -> bool:
        return all(other.contains(r) for r in self.rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        if self.ambient != other.ambient or self.dim != other.dim:
            return False
        if self.exact and other.exact:
            return all(a == b for a, b in zip(self.rows.flat, other.rows.flat))
        return bool(np.allclose(to_float(self.rows), to_float(other.rows), atol=1e-8))

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: "Subspace") -> "Subspace":
        exact = self.exact and other.exact
        a = self.rows if exact else to_float(self.rows)
        b = other.rows if exact else to_float(other.rows)
        return Subspace.span(np.concatenate([a, b], axis=0), self.ambient, exact)

    def perp(self, metric: np.ndarray | None = None) -> "Subspace":
        """Orthogonal complement (Euclidean unless a Gram matrix is given)."""
        m = self.rows if metric is None else self.rows.dot(metric)
        if self.dim == 0:
            return Subspace.full(self.ambient, self.exact)
        return Subspace.span(nullspace(m), self.ambient, m.dtype == object)

    def intersect(self, other: "Subspace") -> "Subspace":
        return (self.perp() + other.perp()).perp()

    def complement_indices(self) -> list[int]:
        """Standard basis indices that complete this subspace to the whole space."""
        chosen: list[int] = []
        cur = self.rows
        for i in range(self.ambient):
            e = zeros((1, self.ambient), self.exact)
            e[0, i] = Fraction(1) if self.exact else 1.0
            trial = np.concatenate([cur, e], axis=0)
            if rank(trial) > cur.shape[0]:
                cur = trial
                chosen.append(i)
        return chosen

    def to_float(self) -> "Subspace":
        return Subspace.span(to_float(self.rows), self.ambient, False) if self.exact else self
