"""Quadratic-form engines used by the constructions.

``zero_diagonal_rotate`` finds an orthonormal basis in which a trace-zero
symmetric matrix has zero diagonal; ``indefinite_zero_span`` finds a basis
made of zeros of an indefinite quadratic form.
"""

from __future__ import annotations

import numpy as np

from .errors import DefiniteForm, NonzeroTrace


def _givens_zeroing(a: float, b: float, d: float) -> tuple[float, float]:
    """(c, s) such that the rotated (i, i) entry c^2 a + 2cs b + s^2 d vanishes.

    Requires a and d of opposite signs, so the quadratic a + 2b t + d t^2 in
    t = tan(theta) has real roots; the smaller root keeps the rotation small.
    """
    disc = np.sqrt(b * b - a * d)
    roots = [(-b + disc) / d, (-b - disc) / d]
    t = min(roots, key=abs)
    c = 1.0 / np.sqrt(1.0 + t * t)
    return c, c * t


def zero_diagonal_rotate(s, tol: float = 1e-12) -> np.ndarray:
    """Orthogonal Q with diag(Q^T S Q) = 0 for a symmetric trace-zero S."""
    s = np.array(s, dtype=float)
    n = s.shape[0]
    s = (s + s.T) / 2
    scale = max(1.0, float(np.max(np.abs(s)))) if n else 1.0
    if abs(np.trace(s)) > max(tol, 1e-10) * scale * max(n, 1):
        raise NonzeroTrace(f"trace {np.trace(s):.3g} is not zero")
    q = np.eye(n)
    done: set[int] = set()
    for _ in range(max(n - 1, 0)):
        diag = np.diag(s)
        live = [k for k in range(n) if k not in done and abs(diag[k]) > tol * scale]
        if not live:
            break
        i = max(live, key=lambda k: diag[k])
        j = min(live, key=lambda k: diag[k])
        if diag[i] <= 0 or diag[j] >= 0:
            break
        c, sn = _givens_zeroing(diag[i], s[i, j], diag[j])
        r = np.eye(n)
        r[i, i], r[i, j], r[j, i], r[j, j] = c, -sn, sn, c
        s = r.T @ s @ r
        q = q @ r
        s[i, i] = 0.0
        done.add(i)
    return q


def indefinite_zero_span(phi, tol: float = 1e-10) -> np.ndarray:
    """m independent zeros of the quadratic form x -> x^T phi x, as rows.

    Positive eigenvectors are paired with the most negative one (and
    negative eigenvectors with the most positive one) so that each pair
    combination is isotropic; kernel eigenvectors pass through unchanged.
    """
    phi = np.array(phi, dtype=float)
    m = phi.shape[0]
    sym = (phi + phi.T) / 2
    scale = max(1.0, float(np.max(np.abs(sym)))) if m else 1.0
    if m == 0 or np.max(np.abs(sym)) <= tol * scale:
        return np.eye(m)
    mu, vec = np.linalg.eigh(sym)
    lo, hi = int(np.argmin(mu)), int(np.argmax(mu))
    if mu[lo] >= -tol * scale or mu[hi] <= tol * scale:
        raise DefiniteForm("form is semidefinite and nonzero")
    e_neg, e_pos = vec[:, lo], vec[:, hi]
    a, b = np.sqrt(-mu[lo]), np.sqrt(mu[hi])
    out = []
    sign = 1.0
    for k in range(m):
        e = vec[:, k]
        if k == hi:
            v = a * e_pos + b * e_neg
        elif k == lo:
            # the other isotropic line of the (e_pos, e_neg) plane
            v = a * e_pos - b * e_neg
        elif mu[k] > tol * scale:
            v = a * e + sign * np.sqrt(mu[k]) * e_neg
            sign = -sign
        elif mu[k] < -tol * scale:
            v = b * e + sign * np.sqrt(-mu[k]) * e_pos
            sign = -sign
        else:
            v = e
        out.append(v)
    return np.array(out)
