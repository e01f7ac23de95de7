"""Published geodesic bases, typed in by hand as independent reference data.

Each entry returns (gram, rows): the Gram matrix of the metric and the basis
vectors as rows, both as exact object arrays in the catalog's coordinates.
"""

from fractions import Fraction

import numpy as np

from geodesy.linalg import inverse
from geodesy.scalar import sqrt_rational as root


def exact(rows):
    return np.array([[x if not isinstance(x, int) else Fraction(x) for x in r] for r in rows], dtype=object)


def identity(n):
    return exact([[1 if i == j else 0 for j in range(n)] for i in range(n)])


def gram_from_orthonormal(rows):
    """Gram matrix in which the given exact rows are orthonormal."""
    binv = inverse(exact(rows))
    return binv.dot(binv.T)


def g23_g25():
    r2 = root(2)
    return identity(5), exact([
        [1, 0, 0, 0, 0],
        [0, 2, 0, 0, 1],
        [0, 0, 2, 0, 1],
        [0, 0, 0, r2, 1],
        [0, 0, 0, -r2, 1],
    ])


def g28():
    r2, k = root(2), root(Fraction(3, 2))
    return identity(5), exact([
        [1, 0, 0, 0, 0],
        [0, 1, k, 0, 0],
        [0, 1, -k, 0, 0],
        [0, 0, 0, r2, 1],
        [0, 0, 0, -r2, 1],
    ])


def g19(alpha):
    alpha = Fraction(alpha)
    r2 = root(2)
    tail = [[0, 0, 0, r2, 1], [0, 0, 0, -r2, 1]]
    if alpha >= 0:
        k = root(2 * (1 + alpha))
        head = [[1, 0, 0, 0, 0], [0, k, 0, 0, 1], [0, 0, k, 0, root(alpha)]]
    else:
        k = root(-alpha)
        head = [[1, 0, 0, 0, 0], [0, k, 1, 0, 0], [0, -k, 1, 0, 0]]
    return identity(5), exact(head + tail)


def g35():
    h, s = Fraction(1, 2), root(Fraction(3, 4))
    rows = [
        [1, 0, 0, 0, 0],
        [0, 1, 0, 0, 0],
        [0, 0, 1, 1, 0],
        [0, 0, 1, -h, s],
        [0, 0, 1, -h, -s],
    ]
    return gram_from_orthonormal(rows), exact(rows)


def m8():
    onb = [[1, 0, 0, 1], [0, 1, 0, 0], [0, 1, 1, 0], [0, 0, 0, 1]]
    rows = [[1, 0, 0, 0], [1, 0, 0, 1], [0, 0, 1, 0], [0, 1, 1, 0]]
    return gram_from_orthonormal(onb), exact(rows)


def sl2_semidirect():
    r2 = root(2)
    return identity(5), exact([
        [1, 0, 0, 0, 0],
        [0, 1, 0, 0, r2],
        [0, 1, 0, 0, -r2],
        [0, 0, 1, r2, 0],
        [0, 0, 1, -r2, 0],
    ])


# (catalog name, params, reference basis)
CASES = (
    [("g23", {}, g23_g25)]
    + [("g25", {"p": Fraction(p)}, g23_g25) for p in (Fraction(1, 2), Fraction(-1, 2), 1, -1, 2)]
    + [("g28", {}, g28)]
    + [("g19", {"alpha": Fraction(a)}, lambda a=a: g19(a)) for a in (-2, Fraction(-1, 2), 0, 1, 3)]
    + [("g35", {}, g35), ("M8", {}, m8), ("sl2_semidirect_r2", {}, sl2_semidirect)]
)
