from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from geodesy import linalg as la
from geodesy.linalg import Subspace

small = st.integers(-4, 4)


def int_matrix(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


def test_rref_canonical_rows():
    r, piv = la.rref(la.exact_array([[2, 4], [1, 3]]))
    assert piv == [0, 1]
    assert la.all_zero(r - la.identity(2, True), 0.0)


def test_exact_det_and_inverse():
    m = la.exact_array([[2, 1, 0], [1, 3, 1], [0, 1, 4]])
    assert la.det(m) == 18
    assert la.all_zero(m.dot(la.inverse(m)) - la.identity(3, True), 0.0)


def test_charpoly_of_diagonal():
    m = la.exact_array(np.diag([3, -4, -1, 2]))
    assert la.charpoly(m) == [1, 0, -15, 10, 24]


@given(int_matrix(4, 4))
def test_charpoly_matches_numpy(rows):
    m = np.array(rows)
    exact = la.charpoly(la.exact_array(m))
    assert all(isinstance(c, Fraction) for c in exact)
    assert np.allclose([float(c) for c in exact], np.poly(m.astype(float)), atol=1e-6)


@given(int_matrix(3, 5))
def test_nullspace_is_annihilated(rows):
    m = la.exact_array(rows)
    ns = la.nullspace(m)
    assert ns.shape[0] + la.rank(m) == 5
    if ns.size:
        assert la.all_zero(m.dot(ns.T), 0.0)


@given(int_matrix(3, 4), st.permutations(range(3)))
def test_subspace_equality_ignores_order(rows, perm):
    a = Subspace.span(la.exact_array(rows))
    b = Subspace.span(la.exact_array([rows[i] for i in perm]))
    assert a == b
    assert la.all_zero(a.rows - b.rows, 0.0)


@given(int_matrix(2, 4), st.integers(-3, 3), st.integers(1, 3))
def test_subspace_equality_ignores_combinations(rows, s, t):
    r = la.exact_array(rows)
    mixed = np.array([r[0] * t + r[1] * s, r[1]], dtype=object)
    assert Subspace.span(r) == Subspace.span(mixed)


def test_perp_and_complement():
    s = Subspace.span(la.exact_array([[1, 1, 0]]))
    p = s.perp()
    assert p.dim == 2
    assert all(sum(a * b for a, b in zip(row, s.rows[0])) == 0 for row in p.rows)
    assert s.complement_indices() == [0, 2]


def test_subspace_order_relation():
    line = Subspace.span(la.exact_array([[1, 0, 0]]))
    plane = Subspace.span(la.exact_array([[1, 0, 0], [0, 1, 0]]))
    assert line <= plane and not plane <= line
    assert (line + Subspace.span(la.exact_array([[0, 1, 0]]))) == plane
    assert plane.intersect(Subspace.span(la.exact_array([[1, 0, 1], [0, 0, 1]]))) == line


def test_float_and_exact_spans_compare():
    a = Subspace.span(np.array([[1.0, 2.0, 0.0]]))
    b = Subspace.span(la.exact_array([[2, 4, 0]]))
    assert a == b


def test_positive_definite_exact():
    assert la.is_positive_definite(la.exact_array([[2, 1], [1, 2]]))
    assert not la.is_positive_definite(la.exact_array([[1, 2], [2, 1]]))


def test_gram_schmidt_orthonormal():
    rng = np.random.default_rng(3)
    a = rng.standard_normal((4, 4))
    gram = a @ a.T + np.eye(4)
    q = la.gram_schmidt(np.eye(4), gram)
    assert np.allclose(q @ gram @ q.T, np.eye(4), atol=1e-12)


def test_singular_inverse_raises():
    with pytest.raises(np.linalg.LinAlgError):
        la.inverse(la.exact_array([[1, 2], [2, 4]]))
