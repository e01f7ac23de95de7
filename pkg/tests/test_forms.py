import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geodesy.errors import DefiniteForm, NonzeroTrace
from geodesy.forms import indefinite_zero_span, zero_diagonal_rotate


@st.composite
def traceless_symmetric(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, n)) * draw(st.sampled_from([1e-3, 1.0, 50.0]))
    s = a + a.T
    return s - np.trace(s) / n * np.eye(n)


@st.composite
def indefinite(draw):
    m = draw(st.integers(2, 7))
    rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    mu = rng.uniform(0.2, 3.0, m) * rng.choice([-1.0, 1.0], m)
    mu[0], mu[1] = abs(mu[0]), -abs(mu[1])
    mu[rng.random(m) < 0.2] = 0.0
    mu[0], mu[1] = abs(mu[0]) or 1.0, -abs(mu[1]) or -1.0
    q, _ = np.linalg.qr(rng.standard_normal((m, m)))
    return (q * mu) @ q.T


def test_rotates_known_diagonal():
    s = np.diag([2.0, -1.0, -1.0])
    q = zero_diagonal_rotate(s)
    assert np.allclose(q.T @ q, np.eye(3), atol=1e-12)
    assert np.max(np.abs(np.diag(q.T @ s @ q))) <= 1e-10


def test_zero_matrix_is_left_alone():
    assert np.array_equal(zero_diagonal_rotate(np.zeros((3, 3))), np.eye(3))


def test_nonzero_trace_rejected():
    with pytest.raises(NonzeroTrace):
        zero_diagonal_rotate(np.diag([1.0, 1.0]))


@settings(max_examples=100)
@given(traceless_symmetric())
def test_rotation_postconditions(s):
    q = zero_diagonal_rotate(s)
    assert np.max(np.abs(q.T @ q - np.eye(len(s)))) <= 1e-12
    scale = max(1.0, np.max(np.abs(s)))
    assert np.max(np.abs(np.diag(q.T @ s @ q))) <= 1e-10 * scale


def test_zero_span_of_signature_form():
    phi = np.diag([1.0, 1.0, -2.0])
    rows = indefinite_zero_span(phi)
    assert rows.shape == (3, 3)
    assert abs(np.linalg.det(rows)) > 1e-6
    for v in rows:
        assert abs(v[0] ** 2 + v[1] ** 2 - 2 * v[2] ** 2) <= 1e-10


def test_definite_form_rejected():
    with pytest.raises(DefiniteForm):
        indefinite_zero_span(np.diag([1.0, 2.0]))


def test_zero_form_gives_any_basis():
    assert np.array_equal(indefinite_zero_span(np.zeros((2, 2))), np.eye(2))


@given(indefinite())
def test_zero_span_postconditions(phi):
    rows = indefinite_zero_span(phi)
    m = phi.shape[0]
    assert rows.shape == (m, m)
    assert np.linalg.matrix_rank(rows, tol=1e-8) == m
    assert max(abs(v @ phi @ v) for v in rows) <= 1e-10
