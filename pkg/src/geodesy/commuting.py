"""Real primary decomposition of a family of commuting operators.

Given commuting ``A_1..A_m`` on R^k, split R^k into common invariant blocks on
which every ``A_j`` has a single real eigenvalue ``c_j`` or a single conjugate
pair ``a_j +- i b_j``.  Inside a block the operators can be brought
simultaneously to upper (block-)triangular form with a constant diagonal,
which is what the abelian-nilradical construction needs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NotCommuting, NumericalFailure

CLUSTER_TOL = 1e-6
COMMUTE_TOL = 1e-9


@dataclass
class Block:
    """One common invariant subspace.

    ``basis`` has the block's vectors as columns (ambient coordinates) and is
    already adapted so that every operator restricted to it is upper
    triangular (real) or upper block-triangular with identical 2x2 diagonal
    blocks ``[[a, -b], [b, a]]`` (complex).
    """

    basis: np.ndarray
    kind: str
    values: tuple = field(default_factory=tuple)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


@dataclass
class CommutingBlockDecomposition:
    blocks: list[Block]
    size: int

    def basis(self) -> np.ndarray:
        return np.concatenate([b.basis for b in self.blocks], axis=1)

    def restrictions(self, mats) -> list[np.ndarray]:
        """Each operator written in the concatenated block basis."""
        b = self.basis()
        binv = np.linalg.inv(b)
        return [binv @ np.asarray(a, dtype=float) @ b for a in mats]


def _restrict(a: np.ndarray, basis: np.ndarray) -> np.ndarray:
    return np.linalg.pinv(basis) @ a @ basis


def _eigen_clusters(r: np.ndarray, tol: float) -> list[tuple[complex, int]]:
    """Group eigenvalues into real values and conjugate pairs.

    Returns ``(representative, multiplicity)`` with the representative taken
    in the closed upper half plane; multiplicity counts both members of a
    conjugate pair.
    """
    ev = np.linalg.eigvals(r)
    scale = max(1.0, float(np.max(np.abs(ev)))) if ev.size else 1.0
    folded = [complex(e.real, abs(e.imag)) for e in ev]
    groups: list[list[complex]] = []
    for e in sorted(folded, key=lambda z: (z.real, z.imag)):
        for g in groups:
            if abs(np.mean(g) - e) <= tol * scale:
                g.append(e)
                break
        else:
            groups.append([e])
    out = []
    for g in groups:
        mu = complex(np.mean(g))
        if abs(mu.imag) <= tol * scale:
            mu = complex(mu.real, 0.0)
        out.append((mu, len(g)))
    return out


def _generalized_eigenspace(r: np.ndarray, mu: complex, mult: int) -> np.ndarray:
    d = r.shape[0]
    eye = np.eye(d)
    if mu.imag == 0.0:
        p = np.linalg.matrix_power(r - mu.real * eye, mult)
    else:
        q = r @ r - 2 * mu.real * r + abs(mu) ** 2 * eye
        p = np.linalg.matrix_power(q, mult // 2)
    _, _, vt = np.linalg.svd(p)
    return vt[d - mult:].T.copy()


def _split(mats: list[np.ndarray], basis: np.ndarray, tol: float) -> list[np.ndarray]:
    for a in mats:
        r = _restrict(a, basis)
        clusters = _eigen_clusters(r, tol)
        if len(clusters) > 1:
            pieces = []
            for mu, mult in clusters:
                sub = _generalized_eigenspace(r, mu, mult)
                q, _ = np.linalg.qr(basis @ sub)
                pieces.extend(_split(mats, q, tol))
            return pieces
    return [basis]


def _common_flag(nils: list[np.ndarray], dim: int, tol: float = 1e-8) -> np.ndarray:
    """Orthonormal basis adapted to the flag V_{k+1} = {v : N_j v in V_k}."""
    dtype = complex if any(np.iscomplexobj(n) for n in nils) else float
    q = np.zeros((dim, 0), dtype=dtype)
    while q.shape[1] < dim:
        proj = np.eye(dim, dtype=dtype) - q @ q.conj().T
        stacked = np.concatenate([proj @ n for n in nils], axis=0) if nils else np.zeros((1, dim))
        _, s, vh = np.linalg.svd(stacked)
        s_full = np.zeros(dim)
        s_full[: s.size] = s
        scale = max(1.0, float(s_full[0])) if s.size else 1.0
        null = vh[s_full <= tol * scale].conj().T
        # drop what is already in the flag, then orthonormalize the new part
        new = null - q @ (q.conj().T @ null)
        u, sv, _ = np.linalg.svd(new, full_matrices=False)
        add = u[:, sv > 1e-6]
        if add.shape[1] == 0:
            raise NumericalFailure("common flag extraction stalled")
        q = np.concatenate([q, add], axis=1)
    return q


def _complex_split(rs: list[np.ndarray], w: np.ndarray, tol: float) -> list[np.ndarray]:
    """Split an invariant complex subspace by joint (unfolded) eigenvalues."""
    for r in rs:
        rw = w.conj().T @ r @ w
        ev = np.linalg.eigvals(rw)
        scale = max(1.0, float(np.max(np.abs(ev))))
        groups: list[list[complex]] = []
        for e in sorted(ev, key=lambda z: (z.real, z.imag)):
            for g in groups:
                if abs(np.mean(g) - e) <= tol * scale:
                    g.append(e)
                    break
            else:
                groups.append([e])
        if len(groups) > 1:
            pieces = []
            d = rw.shape[0]
            for g in groups:
                mu = complex(np.mean(g))
                p = np.linalg.matrix_power(rw - mu * np.eye(d), len(g))
                _, _, vh = np.linalg.svd(p)
                sub, _ = np.linalg.qr(w @ vh[d - len(g):].conj().T)
                pieces.extend(_complex_split(rs, sub, tol))
            return pieces
    return [w]


def _complex_block(rs: list[np.ndarray], basis: np.ndarray, w: np.ndarray) -> Block:
    k = w.shape[1]
    lam = [complex(np.trace(w.conj().T @ r @ w)) / k for r in rs]
    nils = [w.conj().T @ r @ w - lj * np.eye(k) for r, lj in zip(rs, lam)]
    flag = w @ _common_flag(nils, k)
    cols = []
    for j in range(flag.shape[1]):
        cols.append(flag[:, j].real)
        cols.append(flag[:, j].imag)
    values = tuple((lj.real, -lj.imag) for lj in lam)
    return Block(basis @ np.array(cols).T, "complex", values)


def _finalize_block(mats: list[np.ndarray], basis: np.ndarray, tol: float) -> list[Block]:
    rs = [_restrict(a, basis) for a in mats]
    d = basis.shape[1]
    eigs = [np.linalg.eigvals(r) for r in rs]
    scale = max([1.0] + [float(np.max(np.abs(e))) for e in eigs if e.size])
    complex_idx = next(
        (j for j, e in enumerate(eigs) if np.max(np.abs(e.imag)) > tol * scale), None
    )
    if complex_idx is None:
        cs = tuple(float(np.trace(r).real) / d for r in rs)
        nils = [r - c * np.eye(d) for r, c in zip(rs, cs)]
        flag = _common_flag(nils, d)
        return [Block(basis @ flag, "real", cs)]
    if d % 2:
        raise NumericalFailure("odd-dimensional block with complex eigenvalues")
    rf = rs[complex_idx]
    ev = eigs[complex_idx]
    mu = complex(np.mean(ev.real), np.mean(np.abs(ev.imag)))
    # complex eigenspace of the first rotating operator, +Im branch
    p = np.linalg.matrix_power(rf.astype(complex) - mu * np.eye(d), d // 2)
    _, _, vh = np.linalg.svd(p)
    w, _ = np.linalg.qr(vh[d - d // 2:].conj().T)
    # the other operators may rotate either way on this space
    return [_complex_block(rs, basis, piece) for piece in _complex_split(rs, w, tol)]


def check_commuting(mats, tol: float = COMMUTE_TOL) -> None:
    for i, a in enumerate(mats):
        for j in range(i + 1, len(mats)):
            b = mats[j]
            res = float(np.max(np.abs(a @ b - b @ a))) if a.size else 0.0
            if res > tol * max(1.0, float(np.max(np.abs(a))) * float(np.max(np.abs(b)))):
                raise NotCommuting(f"operators {i + 1} and {j + 1} do not commute (residual {res:.3g})")


def decompose_commuting_family(mats, tol: float = CLUSTER_TOL) -> CommutingBlockDecomposition:
    mats = [np.asarray(a, dtype=float) for a in mats]
    if not mats:
        raise ValueError("empty operator family")
    k = mats[0].shape[0]
    check_commuting(mats)
    if k == 0:
        return CommutingBlockDecomposition([], 0)
    pieces = _split(mats, np.eye(k), tol)
    blocks = [b for p in pieces for b in _finalize_block(mats, p, tol)]
    blocks.sort(key=lambda b: (b.kind != "real", _block_key(b)))
    return CommutingBlockDecomposition(blocks, k)


def _block_key(b: Block):
    if b.kind == "real":
        return tuple(-round(c, 9) for c in b.values)
    return tuple(-round(x, 9) for ab in b.values for x in ab)
