"""Constructors for inner products that admit a geodesic basis.

Each constructor returns a :class:`ConstructionResult` whose certificate has
been re-verified by :func:`geodesy.geodesic.verify_basis`, or an
:class:`~geodesy.geodesic.ObstructionCertificate` when the algebra provably
has no geodesic basis.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

import numpy as np

from . import algebra as alg
from . import linalg as la
from . import shapes
from .algebra import InnerProduct, LieAlgebra
from .commuting import decompose_commuting_family
from .errors import (
    DefiniteForm,
    GeodesyError,
    HypothesisFailed,
    IsomorphicToAn,
    NotCodim1Abelian,
    NotHeisenbergIdeal,
    NotRDiagonal,
    NumericalFailure,
    TrivialCenter,
)
from .forms import indefinite_zero_span, zero_diagonal_rotate
from .geodesic import BasisCertificate, ObstructionCertificate, obstruction_certificate, verify_basis
from .linalg import Subspace

TRACE_TOL = 1e-9
SCALAR_TOL = 1e-8


@dataclass
class ConstructionResult:
    metric: InnerProduct
    basis: np.ndarray
    certificate: BasisCertificate
    theorem_tag: str
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.certificate.passed


@dataclass
class Undetermined:
    """No constructor applied; ``failures`` lists (constructor, reason) pairs."""

    failures: list[tuple[str, str]]


@dataclass
class RootDecomposition:
    """Root spaces of ad(t) on an abelian g'.

    ``complement`` holds a basis Y_a of t as rows, ``roots[alpha]`` the values
    lambda_alpha(Y_a), and ``subspaces[alpha]`` a basis of n_alpha as rows.
    """

    gprime: Subspace
    complement: np.ndarray
    roots: np.ndarray
    subspaces: list[np.ndarray]
    flattened: bool = False

    @property
    def m(self) -> int:
        return self.complement.shape[0]


def _finish(
    g: LieAlgebra,
    metric: InnerProduct,
    basis,
    tag: str,
    orthonormal: bool = False,
    details: dict | None = None,
) -> ConstructionResult:
    basis = np.asarray(basis)
    cert = verify_basis(g, metric, basis, require_orthonormal=orthonormal)
    if not cert.passed:
        raise NumericalFailure(f"{tag}: certificate failed: {'; '.join(cert.violations)}")
    return ConstructionResult(metric, basis, cert, tag, details or {})


def _float_metric(rows: np.ndarray) -> InnerProduct:
    """Inner product making the given float rows orthonormal."""
    b = la.to_float(rows)
    binv = np.linalg.inv(b)
    gram = binv @ binv.T
    return InnerProduct((gram + gram.T) / 2)


def _block_metric(rows: np.ndarray, blocks: list[np.ndarray]) -> InnerProduct:
    """Inner product whose Gram in the basis ``rows`` is block-diagonal ``blocks``."""
    b = la.to_float(rows)
    inner = np.zeros((b.shape[0], b.shape[0]))
    k = 0
    for blk in blocks:
        d = blk.shape[0]
        inner[k:k + d, k:k + d] = la.to_float(blk)
        k += d
    binv = np.linalg.inv(b)
    gram = binv @ inner @ binv.T
    return InnerProduct((gram + gram.T) / 2)


def _abelian_result(g: LieAlgebra, tag: str = "abelian") -> ConstructionResult:
    n = g.dim
    return _finish(g, InnerProduct.identity(n, g.exact), la.identity(n, g.exact), tag, orthonormal=True)


# -- abelian nilradical ---------------------------------------------------


def construct_abelian_nilradical(g: LieAlgebra) -> ConstructionResult:
    """Geodesic basis for a unimodular solvable algebra with abelian nilradical."""
    if alg.is_abelian(g):
        return _abelian_result(g, "nilabelian")
    if not alg.is_solvable(g):
        raise HypothesisFailed("solvable", alg.derived_series(g)[-1].rows)
    if not alg.is_unimodular(g):
        raise HypothesisFailed("unimodular", alg.trace_character(g))
    nil = alg.nilradical_solvable(g)
    if not alg.is_abelian_subspace(g, nil):
        raise HypothesisFailed("abelian nilradical", nil.rows)

    gf = g.to_float()
    nrows = la.to_float(nil.rows)
    k = nil.dim
    ys = [gf.basis_vector(i) for i in nil.complement_indices()]
    ops = [la.to_float(shapes.restriction(gf, y, nil.to_float())) for y in ys]
    dec = decompose_commuting_family(ops)

    # block vectors in ambient coordinates; their span is the nilradical
    blocks = [b.basis.T @ nrows for b in dec.blocks]
    rows = np.vstack(ys + blocks)
    metric = _float_metric(rows)
    gram = metric.gram

    traces = [float(np.trace(a)) for a in ops]
    ads = [gf.ad(y) for y in ys]
    weights = [np.sqrt(b.shape[0]) for b in blocks]
    p = len(blocks)
    patterns = [np.ones(p)] + [np.where(np.arange(p) == a, -1.0, 1.0) for a in range(p)] if p > 1 else [np.ones(1)]

    zs: list[np.ndarray] = []
    residual = 0.0
    chosen = np.zeros((0, g.dim))
    for eps in patterns:
        for idx in itertools.product(*[range(b.shape[0]) for b in blocks]):
            z = sum(eps[a] * weights[a] * blocks[a][idx[a]] for a in range(p))
            for ad, tr in zip(ads, traces):
                residual = max(residual, abs(float((ad @ z) @ gram @ z) - tr))
            cand = np.vstack([chosen, z])
            if np.linalg.matrix_rank(cand, tol=1e-8) > chosen.shape[0]:
                chosen = cand
                zs.append(z)
            if len(zs) == k:
                break
        if len(zs) == k:
            break
    if len(zs) < k:
        raise NumericalFailure("Z vectors do not span the nilradical")
    if residual > TRACE_TOL * max(1.0, max(map(abs, traces), default=0.0)):
        raise NumericalFailure(f"trace identity fails (residual {residual:.3g})")

    # blocks must be mutually orthogonal and orthogonal to the complement
    offsets = np.cumsum([len(ys)] + [b.shape[0] for b in blocks])
    cross = rows @ gram @ rows.T
    for a in range(p):
        lo, hi = offsets[a], offsets[a + 1]
        cross[lo:hi, lo:hi] = 0.0
    cross[: len(ys), : len(ys)] = 0.0
    if np.max(np.abs(cross)) > 1e-9:
        raise NumericalFailure("metric is not block-orthogonal")

    basis = np.vstack(ys + zs)
    details = {
        "blocks": [(b.kind, b.values, b.dim) for b in dec.blocks],
        "z_vectors": zs,
        "trace_residual": residual,
    }
    return _finish(g, metric, basis, "nilabelian", details=details)


# -- R-diagonal action on an abelian g' -----------------------------------


def root_space_decomposition(g: LieAlgebra) -> RootDecomposition:
    gd = alg.derived_subalgebra(g)
    if not alg.is_abelian_subspace(g, gd):
        raise HypothesisFailed("abelian derived algebra", gd.rows)
    gf = g.to_float()
    gdf = gd.to_float()
    ys = [gf.basis_vector(i) for i in gd.complement_indices()]
    if not ys or gd.dim == 0:
        raise HypothesisFailed("non-abelian with proper derived algebra")
    ops = [la.to_float(shapes.restriction(gf, y, gdf)) for y in ys]
    dec = decompose_commuting_family(ops)
    roots, subspaces = [], []
    for blk in dec.blocks:
        if blk.kind != "real":
            raise NotRDiagonal("complex eigenvalues on the derived algebra", witness=ys[0])
        pinv = np.linalg.pinv(blk.basis)
        for y, a, c in zip(ys, ops, blk.values):
            r = pinv @ a @ blk.basis
            if np.max(np.abs(r - c * np.eye(blk.dim))) > SCALAR_TOL * max(1.0, abs(c)):
                raise NotRDiagonal("ad(Y) is not diagonalizable on the derived algebra", witness=y)
        roots.append(np.array(blk.values))
        subspaces.append(blk.basis.T @ la.to_float(gd.rows))
    return RootDecomposition(gd, np.array(ys), np.array(roots), subspaces)


def flatten_complement(g: LieAlgebra, rd: RootDecomposition) -> RootDecomposition:
    """Shift the complement by g' so that it becomes an abelian subalgebra."""
    gf = g.to_float()
    m = rd.m
    allx = np.vstack(rd.subspaces)
    offsets = np.cumsum([0] + [s.shape[0] for s in rd.subspaces])
    pairs = [(a, b) for a in range(m) for b in range(a + 1, m)]
    omega = np.zeros((len(pairs), allx.shape[0]))
    for r, (a, b) in enumerate(pairs):
        br = gf.bracket(rd.complement[a], rd.complement[b])
        omega[r] = np.linalg.lstsq(allx.T, br, rcond=None)[0]
    shift = np.zeros((m, allx.shape[0]))
    for alpha, lam in enumerate(rd.roots):
        if not pairs:
            break
        # omega(a, b) = lam(a) psi(b) - lam(b) psi(a)
        mat = np.zeros((len(pairs), m))
        for r, (a, b) in enumerate(pairs):
            mat[r, b] += lam[a]
            mat[r, a] -= lam[b]
        for i in range(offsets[alpha], offsets[alpha + 1]):
            psi = np.linalg.lstsq(mat, omega[:, i], rcond=None)[0]
            shift[:, i] = psi
    comp = rd.complement - shift @ allx
    for a, b in pairs:
        res = np.max(np.abs(gf.bracket(comp[a], comp[b])))
        if res > 1e-9 * max(1.0, float(np.max(np.abs(gf.c)))):
            raise HypothesisFailed("flattened complement is abelian", comp[a])
    return replace(rd, complement=comp, flattened=True)


def _least_kernel_vector(lam: np.ndarray) -> np.ndarray:
    ker = la.nullspace(lam.reshape(1, -1))
    red, _ = la.rref(ker)
    return red[0]


def _an_like(g: LieAlgebra) -> bool:
    return shapes.an_shape(g) is not None


def construct_rdiag(g: LieAlgebra, seed: int = 0, _lift: bool = True) -> ConstructionResult:
    """Geodesic basis when g' is abelian and ad(g) acts on it R-diagonally."""
    if alg.is_abelian(g):
        return _abelian_result(g, "rdiag")
    rd = root_space_decomposition(g)
    z = alg.center(g)
    if z.dim > 0 and _lift:
        try:
            q = alg.quotient_by_ideal(g, z)
            inner = construct_rdiag(q.algebra, seed)
            return lift_center_quotient(g, inner, z)
        except (IsomorphicToAn, HypothesisFailed, NumericalFailure, NotRDiagonal):
            pass
    if rd.m == 1:
        res = construct_codim1_abelian(g, rd.gprime)
        if isinstance(res, ObstructionCertificate):
            raise IsomorphicToAn("algebra is isomorphic to A_n")
        return replace(res, theorem_tag="rdiag")
    rd = flatten_complement(g, rd)
    rng = np.random.default_rng(seed)
    p = len(rd.subspaces)
    dims = [s.shape[0] for s in rd.subspaces]
    allx = np.vstack(rd.subspaces)
    offsets = np.cumsum([0] + dims)
    nonzero = [a for a in range(p) if np.max(np.abs(rd.roots[a])) > 1e-9]
    mus = {a: _least_kernel_vector(rd.roots[a]) for a in nonzero}

    for _ in range(100):
        coords = rng.integers(-3, 4, size=(rd.m, allx.shape[0])) / 2.0
        proj = {a: (mus[a] @ coords)[offsets[a]:offsets[a + 1]] for a in nonzero}
        if all(np.linalg.norm(v) > 1e-9 for v in proj.values()):
            break
    else:
        raise NumericalFailure("no admissible complement inclination found")

    tilt = rd.complement + coords @ allx
    metric = _float_metric(np.vstack([tilt, allx]))
    basis = [row for row in tilt]
    for a in range(p):
        xs = rd.subspaces[a]
        if a not in nonzero:
            basis.extend(xs)
            continue
        w = mus[a] @ tilt
        pv = proj[a]
        r = np.linalg.norm(pv)
        points = [-pv]
        if dims[a] > 1:
            _, _, vt = np.linalg.svd(pv.reshape(1, -1))
            for qk in vt[1:]:
                points.append(-pv / 2 + (r / 2) * qk)
        basis.extend(w + pt @ xs for pt in points)
    details = {
        "roots": rd.roots,
        "kernel_vectors": mus,
        "inclination": coords,
    }
    return _finish(g, metric, np.array(basis), "rdiag", details=details)


# -- codimension-one abelian ideal ----------------------------------------


def _sym(a: np.ndarray) -> np.ndarray:
    return (a + a.T) / 2


def _definiteness(s: np.ndarray, tol: float = 1e-10) -> int:
    """+1 PSD nonzero, -1 NSD nonzero, 0 zero, 2 indefinite."""
    ev = np.linalg.eigvalsh(s)
    scale = max(1.0, float(np.max(np.abs(ev))))
    pos, neg = ev[-1] > tol * scale, ev[0] < -tol * scale
    if pos and neg:
        return 2
    return 1 if pos else (-1 if neg else 0)


def _pick_xprime(a: np.ndarray) -> np.ndarray:
    k = a.shape[0]
    cands = [np.eye(k)[i] for i in range(k)]
    cands += [np.eye(k)[i] + np.eye(k)[j] for i in range(k) for j in range(i + 1, k)]
    for x in cands:
        if np.linalg.matrix_rank(np.vstack([x, a @ x]), tol=1e-9) == 2:
            return x
    raise NumericalFailure("no vector X' with X', AX' independent")


def _indefinite_gram(a: np.ndarray) -> tuple[np.ndarray, dict]:
    """SPD G with x -> <G A x, x> indefinite or zero."""
    k = a.shape[0]
    kind = _definiteness(_sym(a))
    if kind in (0, 2):
        return np.eye(k), {"gram": "identity"}
    sa = kind * a  # now sym(sa) is PSD
    xp = _pick_xprime(sa)
    t = np.linalg.norm(sa @ xp) * xp - np.linalg.norm(xp) * (sa @ xp)
    eps = 1.0
    for step in range(61):
        gm = np.outer(t, t) + eps * np.eye(k)
        if (gm @ sa @ xp) @ xp < 0:
            break
        eps /= 2
    else:
        raise NumericalFailure("epsilon schedule exhausted")
    info = {"gram": "rank-one", "epsilon": eps, "halvings": step}
    if _definiteness(_sym(gm @ sa)) == 2:
        return gm, info
    # the segment from I to gm crosses the indefinite region
    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = (lo + hi) / 2
        gt = (1 - mid) * np.eye(k) + mid * gm
        d = _definiteness(_sym(gt @ sa))
        if d == 2:
            info["bisection"] = mid
            return gt, info
        if d == 1:
            lo = mid
        else:
            hi = mid
    raise NumericalFailure("no indefinite form on the segment")


def _an_obstruction(g: LieAlgebra, h: Subspace, seed: int = 0) -> ObstructionCertificate:
    return obstruction_certificate(g, kind="A_n", trials=50, seed=seed, metrics=5, ideal=h)


def construct_codim1_abelian(g: LieAlgebra, h: Subspace | None = None, seed: int = 0):
    """Geodesic basis, or the A_n obstruction, given a codimension-one abelian ideal ``h``."""
    if h is None:
        h = shapes.codim1_abelian_ideal(g)
        if h is None:
            raise NotCodim1Abelian("no codimension-one abelian ideal found")
    if h.dim != g.dim - 1 or not alg.is_ideal(g, h) or not alg.is_abelian_subspace(g, h):
        raise NotCodim1Abelian("subspace is not a codimension-one abelian ideal")
    y = shapes.complement_vector(g, h)
    a_exact = shapes.restriction(g, y, h)
    if la.all_zero(a_exact):
        return _abelian_result(g, "codim1")
    if shapes.scalar_action(a_exact, g.exact) is not None:
        return _an_obstruction(g, h, seed)
    a = la.to_float(a_exact)
    gm, info = _indefinite_gram(a)
    phi = gm @ a
    zeros = indefinite_zero_span(phi)
    hrows = la.to_float(h.rows)
    yf = la.to_float(y)
    rows = np.vstack([yf, hrows])
    metric = _block_metric(rows, [np.eye(1), gm])
    basis = np.vstack([yf, zeros @ hrows])
    info["A"] = a
    return _finish(g, metric, basis, "codim1", details=info)


# -- orthonormal bases and Heisenberg ideals ------------------------------


def construct_unimodular_codim1(
    g: LieAlgebra, h: Subspace | None = None, metric: InnerProduct | None = None
) -> ConstructionResult:
    """Orthonormal geodesic basis for any metric; g unimodular, h codim-1 abelian."""
    if h is None:
        h = shapes.codim1_abelian_ideal(g)
    if h is None or h.dim != g.dim - 1 or not alg.is_abelian_subspace(g, h) or not alg.is_ideal(g, h):
        raise HypothesisFailed("codimension-one abelian ideal")
    if not alg.is_unimodular(g):
        raise HypothesisFailed("unimodular", alg.trace_character(g))
    metric = (metric or InnerProduct.identity(g.dim, False)).to_float()
    gram = metric.gram
    gf = g.to_float()
    f = la.gram_schmidt(la.to_float(h.rows), gram)
    normal = la.to_float(h.perp(gram).rows)[0]
    y = normal / np.sqrt(normal @ gram @ normal)
    ady = gf.ad(y)
    s = _sym(f @ gram @ ady @ f.T)
    q = zero_diagonal_rotate(s)
    basis = np.vstack([y, q.T @ f])
    return _finish(g, metric, basis, "orthonormal_codim1", orthonormal=True, details={"S": s})


def lift_center_quotient(
    g: LieAlgebra, result: ConstructionResult, z: Subspace | None = None
) -> ConstructionResult:
    """Lift a result on g/z to g with W orthogonal to z and z orthonormal."""
    if z is None:
        z = alg.center(g)
    if z.dim == 0:
        raise TrivialCenter("the centre is trivial")
    q = alg.quotient_by_ideal(g, z)
    section = la.to_float(q.section)
    zrows = la.to_float(z.rows)
    rows = np.vstack([section.T, zrows])
    metric = _block_metric(rows, [la.to_float(result.metric.gram), np.eye(z.dim)])
    basis = np.vstack([la.to_float(result.basis) @ section.T, zrows])
    tag = f"lift({result.theorem_tag})"
    return _finish(
        g,
        metric,
        basis,
        tag,
        orthonormal=result.certificate.orthonormal,
        details={"quotient": result.details},
    )


def construct_heisenberg_codim1(g: LieAlgebra, h: Subspace | None = None, seed: int = 0):
    """Codimension-one ideal isomorphic to a Heisenberg algebra."""
    if h is None:
        found = shapes.heisenberg_ideal(g)
        if found is None:
            raise NotHeisenbergIdeal("no codimension-one Heisenberg ideal found")
        h, z = found
    else:
        if h.dim != g.dim - 1 or not alg.is_ideal(g, h):
            raise NotHeisenbergIdeal("subspace is not a codimension-one ideal")
        z = shapes.heisenberg_center(g, h)
        if z is None:
            raise NotHeisenbergIdeal("ideal is not a Heisenberg algebra")
    y = shapes.complement_vector(g, h)
    lam = alg.coordinates_in(z, alg.bracket(g, y, z.rows[0]))[0]
    if not la.scalar_is_zero(lam):
        return obstruction_certificate(
            g, kind="heisenberg_nonunimodular", trials=100, seed=seed, metrics=3, ideal=h
        )
    quo = alg.quotient_by_ideal(g, z)
    hbar = alg.span(quo.algebra, np.array([quo.projection.dot(r) for r in h.rows]))
    inner = construct_unimodular_codim1(quo.algebra, hbar)
    res = lift_center_quotient(g, inner, z)
    return replace(res, theorem_tag="heisenberg")


# -- dispatcher ------------------------------------------------------------


def auto_construct(g: LieAlgebra, seed: int = 0):
    """Try the constructors in order of hypothesis specificity."""
    if alg.is_abelian(g):
        return _abelian_result(g)
    failures: list[tuple[str, str]] = []
    z = alg.center(g)
    if z.dim > 0:
        q = alg.quotient_by_ideal(g, z)
        inner = auto_construct(q.algebra, seed)
        if isinstance(inner, ConstructionResult):
            try:
                return lift_center_quotient(g, inner, z)
            except GeodesyError as exc:
                failures.append(("center_quotient", str(exc)))
        else:
            failures.append(("center_quotient", "quotient has no construction"))

    attempts = [
        ("heisenberg", lambda: construct_heisenberg_codim1(g, seed=seed)),
        ("codim1", lambda: construct_codim1_abelian(g, seed=seed)),
        ("nilabelian", lambda: construct_abelian_nilradical(g)),
        ("rdiag", lambda: construct_rdiag(g, seed=seed)),
    ]
    for name, attempt in attempts:
        try:
            return attempt()
        except IsomorphicToAn:
            return _an_obstruction(g, shapes.an_shape(g)[0], seed)
        except (GeodesyError, np.linalg.LinAlgError) as exc:
            failures.append((name, str(exc)))
    return Undetermined(failures)
