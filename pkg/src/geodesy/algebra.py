"""Lie algebras given by structure constants and their structural invariants.

Structure constants are stored 0-based as ``c[i, j, k]`` with
``[e_i, e_j] = sum_k c[i, j, k] e_k``.  An algebra is exact when ``c`` is an
object array of Fractions/Surds and float otherwise; results inherit the mode.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from . import linalg as la
from .commuting import decompose_commuting_family
from .errors import (
    DimensionMismatch,
    NotADerivation,
    NotAnIdeal,
    NotSolvable,
    NumericalFailure,
)
from .linalg import Subspace
from .scalar import to_exact

JACOBI_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    c: np.ndarray
    labels: tuple[str, ...] = ()
    name: str = ""

    def __post_init__(self):
        n = self.c.shape[0]
        if self.c.shape != (n, n, n):
            raise DimensionMismatch(f"structure tensor has shape {self.c.shape}")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"X{i + 1}" for i in range(n)))
        elif len(self.labels) != n:
            raise DimensionMismatch("label count does not match dimension")

    @property
    def dim(self) -> int:
        return self.c.shape[0]

    @property
    def exact(self) -> bool:
        return self.c.dtype == object

    @classmethod
    def from_brackets(
        cls,
        dim: int,
        brackets: Mapping[tuple[int, int], Mapping[int, object]],
        labels: Iterable[str] | None = None,
        name: str = "",
        exact: bool = True,
        one_based: bool = True,
    ) -> "LieAlgebra":
        """Build from ``{(i, j): {k: value}}``; antisymmetric completion is implicit."""
        off = 1 if one_based else 0
        c = la.zeros((dim, dim, dim), exact)
        for (i, j), terms in brackets.items():
            i0, j0 = i - off, j - off
            for k, v in terms.items():
                val = to_exact(v) if exact else float(v)
                c[i0, j0, k - off] = c[i0, j0, k - off] + val
                c[j0, i0, k - off] = c[j0, i0, k - off] - val
        return cls(c, tuple(labels) if labels else (), name)

    @classmethod
    def abelian(cls, n: int, exact: bool = True, name: str = "") -> "LieAlgebra":
        return cls(la.zeros((n, n, n), exact), (), name or f"R^{n}")

    def to_float(self) -> "LieAlgebra":
        return LieAlgebra(la.to_float(self.c), self.labels, self.name) if self.exact else self

    def zero_vector(self) -> np.ndarray:
        return la.zeros(self.dim, self.exact)

    def basis_vector(self, i: int) -> np.ndarray:
        v = self.zero_vector()
        v[i] = Fraction(1) if self.exact else 1.0
        return v

    def vector(self, coords) -> np.ndarray:
        v = np.asarray(coords)
        if v.shape != (self.dim,):
            raise DimensionMismatch(f"expected {self.dim} coordinates, got shape {v.shape}")
        return la.exact_array(v) if self.exact and v.dtype != object else (
            v if self.exact else la.to_float(v)
        )

    def bracket(self, x, y) -> np.ndarray:
        return bracket(self, x, y)

    def ad(self, x) -> np.ndarray:
        return ad_matrix(self, x)


def _check_vec(g: LieAlgebra, x) -> np.ndarray:
    x = np.asarray(x)
    if x.shape != (g.dim,):
        raise DimensionMismatch(f"vector of shape {x.shape} for an algebra of dimension {g.dim}")
    if not g.exact and x.dtype == object:
        x = la.to_float(x)
    return x


def _ctensor(g: LieAlgebra, *vecs) -> np.ndarray:
    if g.exact and any(np.asarray(v).dtype != object for v in vecs):
        return la.to_float(g.c)
    return g.c


def _nonzero_constants(g: LieAlgebra) -> list[tuple[int, int, int, object]]:
    cached = g.__dict__.get("_sparse")
    if cached is None:
        cached = [(i, j, k, g.c[i, j, k]) for i, j, k in zip(*np.nonzero(g.c != 0))]
        object.__setattr__(g, "_sparse", cached)
    return cached


def _exact_mode(g: LieAlgebra, *vecs) -> bool:
    return g.exact and all(v.dtype == object for v in vecs)


def bracket(g: LieAlgebra, x, y) -> np.ndarray:
    """[X, Y]^k = sum_ij X^i Y^j c_ij^k."""
    x, y = _check_vec(g, x), _check_vec(g, y)
    if _exact_mode(g, x, y):
        # sparse loop: dense object einsums dominate exact structure computations
        out = la.zeros(g.dim, True)
        for i, j, k, v in _nonzero_constants(g):
            if x[i] != 0 and y[j] != 0:
                out[k] = out[k] + x[i] * y[j] * v
        return out
    c = _ctensor(g, x, y)
    return np.einsum("i,j,ijk->k", x, y, c)


def ad_matrix(g: LieAlgebra, x) -> np.ndarray:
    """Matrix of ad(X); column j is [X, e_j]."""
    x = _check_vec(g, x)
    if _exact_mode(g, x):
        out = la.zeros((g.dim, g.dim), True)
        for i, j, k, v in _nonzero_constants(g):
            if x[i] != 0:
                out[k, j] = out[k, j] + x[i] * v
        return out
    c = _ctensor(g, x)
    return np.einsum("i,ijk->kj", x, c)


def ad_basis(g: LieAlgebra) -> list[np.ndarray]:
    return [np.ascontiguousarray(g.c[i].T) for i in range(g.dim)]


# -- validation ----------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str
    indices: tuple[int, ...]
    residual: float

    def __str__(self):
        idx = ",".join(str(i) for i in self.indices)
        return f"{self.kind} violation at ({idx}): residual {self.residual:.3g}"


def validate(g: LieAlgebra, tol: float = JACOBI_TOL) -> list[Violation]:
    """Antisymmetry and Jacobi violations, 1-based indices."""
    n, c = g.dim, g.c
    out: list[Violation] = []

    def nz(v):
        return v != 0 if g.exact else abs(v) > tol

    for i in range(n):
        for j in range(i, n):
            for k in range(n):
                s = c[i, j, k] + c[j, i, k]
                if nz(s):
                    out.append(Violation("antisymmetry", (i + 1, j + 1, k + 1), abs(float(s))))
    t = np.einsum("ijm,mkl->ijkl", c, c)
    jac = t + t.transpose(2, 0, 1, 3) + t.transpose(1, 2, 0, 3)
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                for l in range(n):
                    v = jac[i, j, k, l]
                    if nz(v):
                        out.append(Violation("jacobi", (i + 1, j + 1, k + 1, l + 1), abs(float(v))))
    return out


def is_valid(g: LieAlgebra) -> bool:
    return not validate(g)


# -- subspaces and series ------------------------------------------------


def span(g: LieAlgebra, vectors) -> Subspace:
    arr = np.asarray(vectors)
    if arr.size == 0:
        return Subspace.zero(g.dim, g.exact)
    return Subspace.span(arr.reshape(-1, g.dim), g.dim, g.exact and arr.dtype == object)


def bracket_subspaces(g: LieAlgebra, a: Subspace, b: Subspace) -> Subspace:
    vecs = [bracket(g, x, y) for x in a.rows for y in b.rows]
    exact = a.exact and b.exact and g.exact
    if not vecs:
        return Subspace.zero(g.dim, exact)
    arr = np.array(vecs, dtype=object if exact else float)
    return Subspace.span(arr, g.dim, exact)


def full_space(g: LieAlgebra) -> Subspace:
    return Subspace.full(g.dim, g.exact)


def derived_subalgebra(g: LieAlgebra) -> Subspace:
    n = g.dim
    vecs = [g.c[i, j] for i in range(n) for j in range(i + 1, n)]
    if not vecs:
        return Subspace.zero(n, g.exact)
    return Subspace.span(np.array(vecs, dtype=g.c.dtype), n, g.exact)


def _series(g: LieAlgebra, step) -> list[Subspace]:
    out: list[Subspace] = []
    cur = full_space(g)
    while True:
        nxt = step(cur)
        out.append(nxt)
        if nxt.dim == cur.dim:
            return out
        if nxt.dim == 0:
            return out
        cur = nxt


def derived_series(g: LieAlgebra) -> list[Subspace]:
    """g', g'', ... up to and including the first repeated (or zero) term."""
    return _series(g, lambda s: bracket_subspaces(g, s, s))


def lower_central_series(g: LieAlgebra) -> list[Subspace]:
    """[g,g], [g,[g,g]], ... up to stabilization."""
    whole = full_space(g)
    return _series(g, lambda s: bracket_subspaces(g, whole, s))


def is_solvable(g: LieAlgebra) -> bool:
    return derived_series(g)[-1].dim == 0


def is_nilpotent(g: LieAlgebra) -> bool:
    return lower_central_series(g)[-1].dim == 0


def is_abelian(g: LieAlgebra) -> bool:
    return la.all_zero(g.c)


def center(g: LieAlgebra) -> Subspace:
    """Null space of X -> ad(X), flattened to an n^2 x n system."""
    n = g.dim
    m = g.c.transpose(1, 2, 0).reshape(n * n, n)
    return Subspace.span(la.nullspace(m), n, g.exact)


def is_ideal(g: LieAlgebra, h: Subspace) -> bool:
    return all(
        h.contains(bracket(g, g.basis_vector(i), x)) for i in range(g.dim) for x in h.rows
    )


def is_abelian_subspace(g: LieAlgebra, h: Subspace) -> bool:
    return all(
        la.all_zero(bracket(g, x, y)) for a, x in enumerate(h.rows) for y in h.rows[a + 1:]
    )


def coordinates_in(h: Subspace, v) -> np.ndarray:
    """Coordinates of ``v`` in the RREF basis of ``h`` (v must lie in h)."""
    rows = h.rows
    v = np.asarray(v)
    if h.exact and v.dtype == object:
        # RREF rows: coefficient on row a is the entry at its pivot column
        _, piv = la.rref(rows)
        return np.array([v[p] for p in piv], dtype=object)
    rows_f = la.to_float(rows)
    coef, *_ = np.linalg.lstsq(rows_f.T, la.to_float(v), rcond=None)
    return coef


def subalgebra(g: LieAlgebra, h: Subspace, name: str = "") -> LieAlgebra:
    """The subalgebra spanned by ``h`` in the basis of its RREF rows."""
    r = h.dim
    exact = g.exact and h.exact
    c = la.zeros((r, r, r), exact)
    for a in range(r):
        for b in range(r):
            br = bracket(g, h.rows[a], h.rows[b])
            if not h.contains(br):
                raise NotAnIdeal("subspace is not closed under the bracket")
            c[a, b] = coordinates_in(h, br)
    return LieAlgebra(c, (), name)


# -- unimodularity -------------------------------------------------------


def trace_character(g: LieAlgebra) -> np.ndarray:
    """chi(X) = Tr ad(X) as a covector."""
    return np.array([sum(g.c[j, k, k] for k in range(g.dim)) for j in range(g.dim)],
                    dtype=g.c.dtype)


def is_unimodular(g: LieAlgebra) -> bool:
    return la.all_zero(trace_character(g))


def unimodular_kernel(g: LieAlgebra) -> Subspace:
    chi = trace_character(g)
    if la.all_zero(chi):
        return full_space(g)
    return Subspace.span(la.nullspace(chi.reshape(1, -1)), g.dim, g.exact)


# -- nilradical ----------------------------------------------------------


def _adapted_flag(g: LieAlgebra, gd: Subspace) -> list[Subspace]:
    """V_{k+1} = {v : [Y, v] in V_k for all Y in g'}; ad(g)-invariant flag."""
    n = g.dim
    flag = [Subspace.zero(n, g.exact)]
    ads = [ad_matrix(g, y) for y in gd.rows]
    while flag[-1].dim < n:
        cur = flag[-1]
        perp = cur.perp()
        if perp.dim == 0:
            break
        blocks = [perp.rows.dot(a) for a in ads] if ads else []
        if not blocks:
            nxt = full_space(g)
        else:
            nxt = Subspace.span(la.nullspace(np.concatenate(blocks, axis=0)), n, g.exact)
        if nxt.dim <= cur.dim:
            raise NumericalFailure("derived algebra does not act nilpotently")
        flag.append(nxt)
    return flag


def _quotient_blocks(g: LieAlgebra, flag: list[Subspace]):
    """Float basis adapted to ``flag`` plus the slice of each quotient."""
    cols: list[np.ndarray] = []
    slices = []
    cur = np.zeros((0, g.dim))
    for sub in flag[1:]:
        start = len(cols)
        for row in la.to_float(sub.rows):
            trial = np.vstack([cur, row])
            if la.rank(trial) > cur.shape[0]:
                cur = trial
                cols.append(row)
        slices.append(slice(start, len(cols)))
    return np.array(cols).T, slices


def _weights(g: LieAlgebra) -> list[np.ndarray]:
    """Real covectors whose common kernel is the nilradical of solvable g."""
    gd = derived_subalgebra(g)
    flag = _adapted_flag(g, gd)
    basis, slices = _quotient_blocks(g, flag)
    binv = np.linalg.inv(basis)
    gf = g.to_float()
    ads = [binv @ ad_matrix(gf, gf.basis_vector(i)) @ basis for i in range(g.dim)]
    out: list[np.ndarray] = []
    for sl in slices:
        fam = [a[sl, sl] for a in ads]
        dec = decompose_commuting_family(fam)
        for blk in dec.blocks:
            if blk.kind == "real":
                out.append(np.array(blk.values))
            else:
                out.append(np.array([ab[0] for ab in blk.values]))
                out.append(np.array([ab[1] for ab in blk.values]))
    return out


def _snap_exact(g: LieAlgebra, sub: Subspace) -> Subspace | None:
    rows = la.to_float(sub.rows)
    snapped = np.empty(rows.shape, dtype=object)
    for idx, v in np.ndenumerate(rows):
        q = Fraction(v).limit_denominator(10**6)
        if abs(float(q) - v) > 1e-9:
            return None
        snapped[idx] = q
    cand = Subspace.span(snapped, g.dim, True)
    if cand.dim != sub.dim or not is_ideal(g, cand):
        return None
    if not derived_subalgebra(g) <= cand:
        return None
    if not is_nilpotent(subalgebra(g, cand)):
        return None
    return cand


def nilradical_solvable(g: LieAlgebra, tol: float = 1e-8) -> Subspace:
    """Maximal nilpotent ideal of a solvable algebra.

    The ad-invariant flag built from the derived algebra has quotients on
    which ad(g) acts through commuting operators; their joint weights are the
    diagonal functionals of a simultaneous triangularization, and the
    nilradical is their common kernel.  Exact inputs get an exact answer
    whenever the float result rationalizes and passes exact verification.
    """
    if not is_solvable(g):
        raise NotSolvable(f"{g.name or 'algebra'} is not solvable")
    if is_nilpotent(g):
        return full_space(g)
    ws = _weights(g)
    mat = np.array(ws) if ws else np.zeros((1, g.dim))
    scale = max(1.0, float(np.max(np.abs(mat))))
    mat = mat / scale
    null = la.nullspace(mat, tol)
    result = Subspace.span(null, g.dim, False) if null.size else Subspace.zero(g.dim, False)
    gf = g.to_float()
    if not is_ideal(gf, result):
        raise NumericalFailure("computed nilradical is not an ideal")
    if not derived_subalgebra(gf) <= result:
        raise NumericalFailure("computed nilradical misses the derived algebra")
    if g.exact:
        snapped = _snap_exact(g, result)
        if snapped is not None:
            return snapped
    if not is_nilpotent(subalgebra(gf, result)):
        raise NumericalFailure("computed nilradical is not nilpotent")
    return result


# -- constructions -------------------------------------------------------


def killing_form(g: LieAlgebra) -> np.ndarray:
    ads = ad_basis(g)
    n = g.dim
    out = la.zeros((n, n), g.exact)
    for i in range(n):
        for j in range(i, n):
            v = np.trace(ads[i].dot(ads[j]))
            out[i, j] = v
            out[j, i] = v
    return out


@dataclass(frozen=True, eq=False)
class Quotient:
    """g/h with basis the images of the standard vectors ``section_indices``.

    ``projection`` (r x n) maps g-coordinates to quotient coordinates and
    ``section`` (n x r) is the linear lift that sends quotient basis vector a
    to the standard basis vector ``section_indices[a]``.
    """

    algebra: LieAlgebra
    projection: np.ndarray
    section: np.ndarray
    section_indices: tuple[int, ...]
    ideal: Subspace


def quotient_by_ideal(g: LieAlgebra, h: Subspace, name: str = "") -> Quotient:
    if not is_ideal(g, h):
        raise NotAnIdeal("subspace is not an ideal")
    exact = g.exact and h.exact
    comp = h.complement_indices()
    r, n = len(comp), g.dim
    basis = la.zeros((n, n), exact)
    for a, i in enumerate(comp):
        basis[i, a] = Fraction(1) if exact else 1.0
    hrows = h.rows if exact else la.to_float(h.rows)
    for b, row in enumerate(hrows):
        basis[:, r + b] = row
    proj = la.inverse(basis)[:r]
    section = basis[:, :r]
    c = la.zeros((r, r, r), exact)
    gc = g.c if exact else la.to_float(g.c)
    for a in range(r):
        for b in range(r):
            c[a, b] = proj.dot(gc[comp[a], comp[b]])
    labels = tuple(g.labels[i] for i in comp)
    q = LieAlgebra(c, labels, name or (f"{g.name}/ideal" if g.name else ""))
    return Quotient(q, proj, section, tuple(comp), h)


def is_derivation(h: LieAlgebra, phi: np.ndarray) -> bool:
    n = h.dim
    for i in range(n):
        for j in range(i + 1, n):
            ei, ej = h.basis_vector(i), h.basis_vector(j)
            lhs = phi.dot(bracket(h, ei, ej))
            rhs = bracket(h, phi.dot(ei), ej) + bracket(h, ei, phi.dot(ej))
            if not la.all_zero(lhs - rhs):
                return False
    return True


def suspension(h: LieAlgebra, phi, name: str = "", generator: str = "X0") -> LieAlgebra:
    """h extended by X0 acting through the derivation phi (X0 comes first)."""
    phi = np.asarray(phi)
    if h.exact:
        phi = la.exact_array(phi) if phi.dtype != object else phi
    else:
        phi = la.to_float(phi)
    n = h.dim
    if phi.shape != (n, n):
        raise DimensionMismatch("derivation has the wrong shape")
    if not is_derivation(h, phi):
        raise NotADerivation("map is not a derivation of the algebra")
    c = la.zeros((n + 1, n + 1, n + 1), h.exact)
    c[1:, 1:, 1:] = h.c
    for j in range(n):
        c[0, j + 1, 1:] = phi[:, j]
        c[j + 1, 0, 1:] = -phi[:, j]
    return LieAlgebra(c, (generator,) + tuple(h.labels), name)


def direct_sum(a: LieAlgebra, b: LieAlgebra, name: str = "") -> LieAlgebra:
    exact = a.exact and b.exact
    n, m = a.dim, b.dim
    c = la.zeros((n + m, n + m, n + m), exact)
    c[:n, :n, :n] = a.c if exact else la.to_float(a.c)
    c[n:, n:, n:] = b.c if exact else la.to_float(b.c)
    labels = tuple(a.labels) + tuple(b.labels)
    if len(set(labels)) < len(labels):
        labels = tuple(f"X{i + 1}" for i in range(n + m))
    return LieAlgebra(c, labels, name)


# -- inner products ------------------------------------------------------


@dataclass(frozen=True, eq=False)
class InnerProduct:
    gram: np.ndarray

    def __post_init__(self):
        g = self.gram
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise DimensionMismatch("Gram matrix must be square")
        if not la.is_positive_definite(g):
            raise ValueError("Gram matrix is not symmetric positive definite")

    @property
    def dim(self) -> int:
        return self.gram.shape[0]

    @property
    def exact(self) -> bool:
        return self.gram.dtype == object

    @classmethod
    def identity(cls, n: int, exact: bool = True) -> "InnerProduct":
        return cls(la.identity(n, exact))

    @classmethod
    def from_orthonormal_basis(cls, vectors) -> "InnerProduct":
        """The inner product in which the given rows are orthonormal."""
        b = np.asarray(vectors)
        binv = la.inverse(b)
        return cls(binv.dot(binv.T))

    def to_float(self) -> "InnerProduct":
        return InnerProduct(la.to_float(self.gram)) if self.exact else self

    def inner(self, x, y):
        return np.asarray(x).dot(self.gram).dot(np.asarray(y))


def random_metric(n: int, rng: np.random.Generator, spread: float = 1.0) -> InnerProduct:
    """A random SPD Gram matrix with eigenvalues in [e^-spread, e^spread]."""
    q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    d = np.exp(rng.uniform(-spread, spread, n))
    g = (q * d) @ q.T
    return InnerProduct((g + g.T) / 2)
