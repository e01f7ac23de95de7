import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from geodesy.commuting import decompose_commuting_family
from geodesy.errors import NotCommuting
from geodesy.families import commuting_traceless_family


def offsets(dec):
    out = [0]
    for b in dec.blocks:
        out.append(out[-1] + b.dim)
    return out


def test_diagonal_pair_splits_into_lines():
    a1 = np.diag([1.0, 0.0, -1.0])
    a2 = np.diag([0.0, 1.0, -1.0])
    dec = decompose_commuting_family([a1, a2])
    assert [b.dim for b in dec.blocks] == [1, 1, 1]
    assert sorted(tuple(np.round(b.values, 9)) for b in dec.blocks) == [(-1, -1), (0, 1), (1, 0)]


def test_rotation_gives_complex_block():
    j = np.array([[0.0, -2.0], [2.0, 0.0]])
    dec = decompose_commuting_family([j])
    (block,) = dec.blocks
    assert block.kind == "complex" and block.dim == 2
    a, b = block.values[0]
    assert abs(a) < 1e-12 and abs(abs(b) - 2.0) < 1e-12


def test_jordan_block_stays_together():
    n = np.array([[1.0, 1.0], [0.0, 1.0]])
    dec = decompose_commuting_family([n])
    assert [b.dim for b in dec.blocks] == [2]
    r = dec.restrictions([n])[0]
    assert abs(r[1, 0]) < 1e-12


def test_non_commuting_rejected():
    with pytest.raises(NotCommuting):
        decompose_commuting_family([np.diag([1.0, 2.0]), np.array([[0.0, 1.0], [0.0, 0.0]])])


@given(st.integers(0, 2**32 - 1), st.integers(2, 6), st.integers(1, 3))
def test_random_family_is_block_diagonalised(seed, n, m):
    # a trace-zero diagonalisable family has at most n - 1 independent members
    m = min(m, n - 1)
    rng = np.random.default_rng(seed)
    mats = [a.astype(float) for a in commuting_traceless_family(rng, n, m)]
    dec = decompose_commuting_family(mats)
    assert sum(b.dim for b in dec.blocks) == n
    off = offsets(dec)
    scale = max(1.0, max(np.max(np.abs(a)) for a in mats))
    for r in dec.restrictions(mats):
        for i, b in enumerate(dec.blocks):
            lo, hi = off[i], off[i + 1]
            outside = np.delete(r[:, lo:hi], np.s_[lo:hi], axis=0)
            assert np.max(np.abs(outside), initial=0.0) <= 1e-7 * scale
            if b.kind == "real":
                inner = r[lo:hi, lo:hi]
                assert np.max(np.abs(np.tril(inner, -1)), initial=0.0) <= 1e-7 * scale
