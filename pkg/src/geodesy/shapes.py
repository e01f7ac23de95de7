"""Recognizers for the algebra shapes the constructions dispatch on."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from . import algebra as alg
from . import linalg as la
from .algebra import LieAlgebra
from .linalg import Subspace

DET_TOL = 1e-10


def complement_vector(g: LieAlgebra, h: Subspace) -> np.ndarray:
    """First standard basis vector outside ``h``."""
    idx = h.complement_indices()
    if not idx:
        raise ValueError("subspace is the whole algebra")
    return g.basis_vector(idx[0])


def restriction(g: LieAlgebra, y, h: Subspace) -> np.ndarray:
    """Matrix of ad(y)|_h in the RREF basis of the invariant subspace h."""
    cols = [alg.coordinates_in(h, alg.bracket(g, y, row)) for row in h.rows]
    if not cols:
        return la.zeros((0, 0), g.exact)
    return np.array(cols, dtype=cols[0].dtype).T


def _dedup(subs: list[Subspace]) -> list[Subspace]:
    out: list[Subspace] = []
    for s in subs:
        if not any(s == t for t in out):
            out.append(s)
    return out


def codim1_ideal_candidates(g: LieAlgebra) -> list[Subspace]:
    """Canonical codimension-one ideals: unimodular kernel, nilradical, g'.

    Every codim-1 abelian or Heisenberg ideal of a non-nilpotent algebra is
    among these; nilpotent algebras go through the centre instead.
    """
    n = g.dim
    cands: list[Subspace] = []
    uk = alg.unimodular_kernel(g)
    if uk.dim == n - 1:
        cands.append(uk)
    if alg.is_solvable(g):
        nil = alg.nilradical_solvable(g)
        if nil.dim == n - 1:
            cands.append(nil)
    gd = alg.derived_subalgebra(g)
    if gd.dim == n - 1:
        cands.append(gd)
    return _dedup(cands)


def codim1_abelian_ideal(g: LieAlgebra) -> Subspace | None:
    for h in codim1_ideal_candidates(g):
        if alg.is_abelian_subspace(g, h):
            return h
    return None


def heisenberg_center(g: LieAlgebra, h: Subspace) -> Subspace | None:
    """Centre of ``h`` when ``h`` is isomorphic to a Heisenberg algebra."""
    if h.dim < 3 or h.dim % 2 == 0:
        return None
    try:
        sub = alg.subalgebra(g, h)
    except Exception:
        return None
    z = alg.center(sub)
    if z.dim != 1:
        return None
    if not alg.derived_subalgebra(sub) <= z:
        return None
    comp = z.complement_indices()
    zvec = z.rows[0]
    piv = next(i for i, v in enumerate(zvec) if (v != 0 if sub.exact else abs(v) > 1e-12))
    form = la.zeros((len(comp), len(comp)), sub.exact)
    for a, i in enumerate(comp):
        for b, j in enumerate(comp):
            form[a, b] = sub.c[i, j, piv] / zvec[piv]
    d = la.det(form)
    if (d == 0) if sub.exact else abs(d) <= DET_TOL:
        return None
    # centre of h as a subspace of g
    return alg.span(g, np.array([z.rows[0].dot(h.rows)]))


def heisenberg_ideal(g: LieAlgebra) -> tuple[Subspace, Subspace] | None:
    for h in codim1_ideal_candidates(g):
        z = heisenberg_center(g, h)
        if z is not None:
            return h, z
    return None


def scalar_action(a: np.ndarray, exact: bool):
    """c if the square matrix ``a`` equals c*I, else None."""
    n = a.shape[0]
    if n == 0:
        return None
    c = a[0, 0]
    eye = la.identity(n, exact)
    diff = a - c * eye
    return c if la.all_zero(diff, 1e-9) else None


def an_shape(g: LieAlgebra) -> tuple[Subspace, object] | None:
    """(h, c) when g has a codim-1 abelian ideal on which ad(Y) acts as c*I, c != 0."""
    h = codim1_abelian_ideal(g)
    if h is None:
        return None
    y = complement_vector(g, h)
    c = scalar_action(restriction(g, y, h), g.exact)
    if c is None or la.scalar_is_zero(c):
        return None
    return h, c


def one(exact: bool):
    return Fraction(1) if exact else 1.0
