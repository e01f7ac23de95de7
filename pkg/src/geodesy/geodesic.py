"""The geodesic-element condition, basis certificates and geodesic sampling.

A nonzero X is geodesic for an inner product when <X, [X, Y]> = 0 for every
Y.  Pairing against the basis gives the defect vector ad(X)^T G X.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from . import algebra as alg
from . import linalg as la
from . import shapes
from .algebra import InnerProduct, LieAlgebra
from .errors import DimensionMismatch, WrongShape
from .forms import indefinite_zero_span, zero_diagonal_rotate

__all__ = [
    "BasisCertificate",
    "ObstructionCertificate",
    "defect",
    "is_geodesic",
    "verify_basis",
    "orbit_derivative_check",
    "sample_geodesics",
    "span_rank",
    "obstruction_certificate",
    "zero_diagonal_rotate",
    "indefinite_zero_span",
]

DEFECT_TOL = 1e-9
RANK_TOL = 1e-8
SAMPLE_TOL = 1e-10
DEDUP_TOL = 1e-6
ORTHO_TOL = 1e-8
STEP_TOL = 1e-18


def _as_metric(g: LieAlgebra, metric) -> InnerProduct:
    if metric is None:
        return InnerProduct.identity(g.dim, g.exact)
    if not isinstance(metric, InnerProduct):
        metric = InnerProduct(np.asarray(metric))
    if metric.dim != g.dim:
        raise DimensionMismatch(f"metric of size {metric.dim} for an algebra of dimension {g.dim}")
    return metric


def _mode_arrays(g: LieAlgebra, metric: InnerProduct, *vecs):
    """Structure tensor, Gram matrix and vectors in a common mode."""
    vecs = [np.asarray(v) for v in vecs]
    exact = g.exact and metric.exact and all(v.dtype == object for v in vecs)
    if exact:
        return True, g.c, metric.gram, vecs
    return False, la.to_float(g.c), la.to_float(metric.gram), [la.to_float(v) for v in vecs]


def defect(g: LieAlgebra, metric, x) -> np.ndarray:
    """Entries <X, [X, e_i]> for i = 1..n."""
    metric = _as_metric(g, metric)
    x = np.asarray(x)
    if x.shape != (g.dim,):
        raise DimensionMismatch(f"vector of shape {x.shape} for an algebra of dimension {g.dim}")
    _, c, gram, (x,) = _mode_arrays(g, metric, x)
    ad = np.einsum("i,ijk->kj", x, c)
    return ad.T.dot(gram.dot(x))


def is_geodesic(g: LieAlgebra, metric, x, tol: float | None = None) -> bool:
    d = defect(g, metric, x)
    if d.dtype == object and tol is None:
        return all(v == 0 for v in d)
    return la.max_abs(d) <= (DEFECT_TOL if tol is None else tol)


@dataclass
class BasisCertificate:
    metric: InnerProduct
    vectors: np.ndarray
    defects: list[float]
    gram_rank_witness: object
    orthonormal: bool
    exact: bool
    tol: float
    require_orthonormal: bool = False
    violations: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def max_defect(self) -> float:
        return max(self.defects, default=0.0)


def verify_basis(
    g: LieAlgebra,
    metric,
    vectors,
    require_orthonormal: bool = False,
    tol: float | None = None,
) -> BasisCertificate:
    """Check that ``vectors`` is a geodesic basis; failures are listed, not raised."""
    metric = _as_metric(g, metric)
    rows = np.asarray(vectors)
    n = g.dim
    violations: list[str] = []
    if rows.ndim != 2 or rows.shape[1] != n:
        raise DimensionMismatch(f"expected vectors of length {n}, got array of shape {rows.shape}")
    if rows.shape[0] != n:
        violations.append(f"expected {n} vectors, got {rows.shape[0]}")
    exact, _, gram, (rows,) = _mode_arrays(g, metric, rows)
    eff_tol = 0.0 if exact and tol is None else (DEFECT_TOL if tol is None else tol)

    defects: list[float] = []
    for idx, v in enumerate(rows):
        d = defect(g, metric if exact else metric.to_float(), v)
        m = la.max_abs(d)
        defects.append(m)
        bad = any(e != 0 for e in d) if (exact and tol is None) else m > eff_tol
        if bad:
            violations.append(f"vector {idx + 1} has defect {m:.3g}")

    witness = la.det(rows) if rows.shape[0] == n else 0
    if (witness == 0) if exact else abs(witness) <= RANK_TOL:
        violations.append(f"vectors are dependent (det {float(witness):.3g})")

    if rows.shape[0] == n:
        gv = rows.dot(gram).dot(rows.T)
        diff = gv - la.identity(n, exact)
        orthonormal = la.all_zero(diff, 0.0) if exact else la.max_abs(diff) <= ORTHO_TOL
    else:
        orthonormal = False
    if require_orthonormal and not orthonormal:
        violations.append("vectors are not orthonormal")

    return BasisCertificate(
        metric=metric,
        vectors=rows,
        defects=defects,
        gram_rank_witness=witness,
        orthonormal=orthonormal,
        exact=exact,
        tol=eff_tol,
        require_orthonormal=require_orthonormal,
        violations=violations,
    )


def orbit_derivative_check(g: LieAlgebra, metric, x, z, h: float = 1e-4) -> float:
    """|d/dt |exp(t ad X) Z|^2 at 0, by finite differences, minus 2<[X,Z],Z>|.

    Five-point central stencil: its O(h^4) truncation stays far below the
    roundoff floor at h = 1e-4 even when ad X has entries near 10.
    """
    metric = _as_metric(g, metric).to_float()
    gram = metric.gram
    ad = alg.ad_matrix(g.to_float(), la.to_float(np.asarray(x)))
    z = la.to_float(np.asarray(z))

    def f(t: float) -> float:
        w = scipy.linalg.expm(t * ad) @ z
        return float(w @ gram @ w)

    fd = (8.0 * (f(h) - f(-h)) - (f(2 * h) - f(-2 * h))) / (12 * h)
    analytic = 2.0 * float((ad @ z) @ gram @ z)
    return abs(fd - analytic)


# -- sampling --------------------------------------------------------------


def _quadrics(g: LieAlgebra, gram: np.ndarray) -> np.ndarray:
    """Q_i with defect_i(X) = X^T Q_i X."""
    return np.einsum("ak,bik->iab", gram, la.to_float(g.c))


def _random_unit(rng: np.random.Generator, n: int, gram: np.ndarray, count: int) -> np.ndarray:
    x = rng.standard_normal((count, n))
    norms = np.sqrt(np.einsum("ta,ab,tb->t", x, gram, x))
    return x / norms[:, None]


def _canonical_sign(v: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(v) > 1e-8))
    return -v if v[k] < 0 else v


def sample_geodesics(
    g: LieAlgebra,
    metric=None,
    trials: int = 200,
    seed: int = 0,
    max_iter: int = 120,
    tol: float = SAMPLE_TOL,
) -> list[np.ndarray]:
    """Converged unit geodesics from Gauss-Newton runs at random starts."""
    metric = _as_metric(g, metric).to_float()
    n = g.dim
    gram = metric.gram
    rng = np.random.default_rng(seed)
    if trials <= 0 or n == 0:
        return []
    q = _quadrics(g, gram)
    s = q + q.transpose(0, 2, 1)
    # residuals in extended precision: at a double root the reachable
    # distance to the variety is the square root of the residual floor
    ql = q.astype(np.longdouble)
    gl = gram.astype(np.longdouble)
    x = _random_unit(rng, n, gram, trials).astype(np.longdouble)
    live = np.ones(trials, dtype=bool)
    best = x.copy()
    best_res = np.full(trials, np.inf, dtype=np.longdouble)

    def residual(xs):
        return np.concatenate(
            [
                np.einsum("ta,iab,tb->ti", xs, ql, xs),
                (np.einsum("ta,ab,tb->t", xs, gl, xs) - 1.0)[:, None],
            ],
            axis=1,
        )

    # iterate until the step stalls rather than stopping at the residual
    # threshold; Gauss-Newton only halves the error per step at a double root
    for _ in range(max_iter):
        idx = np.nonzero(live)[0]
        if idx.size == 0:
            break
        xs = x[idx]
        f = residual(xs)
        # keep the lowest-residual iterate; at the noise floor the iterates wander
        res = np.linalg.norm(f.astype(float), axis=1)
        better = res < best_res[idx]
        best[idx[better]] = xs[better]
        best_res[idx[better]] = res[better]
        x64 = xs.astype(float)
        jac = np.concatenate(
            [np.einsum("ta,iab->tib", x64, s), (2.0 * x64 @ gram)[:, None, :]], axis=1
        )
        pinv = np.linalg.pinv(jac).astype(np.longdouble)
        step = np.einsum("tij,tj->ti", pinv, f)
        ok = np.all(np.isfinite(step), axis=1)
        step[~ok] = 0.0
        x[idx[ok]] = xs[ok] - step[ok]
        stalled = np.linalg.norm(step, axis=1) <= STEP_TOL
        live[idx[~ok | stalled]] = False

    res = np.linalg.norm(residual(x).astype(float), axis=1)
    better = res < best_res
    best[better] = x[better]
    x = best
    done = np.linalg.norm(residual(x), axis=1) <= tol
    done &= np.all(np.isfinite(x), axis=1)
    x = x.astype(float)

    out: list[np.ndarray] = []
    for v in x[done]:
        v = _canonical_sign(v)
        if not any(np.linalg.norm(v - w) <= DEDUP_TOL for w in out):
            out.append(v)
    return out


def span_rank(samples, tol: float = 1e-6) -> int:
    if len(samples) == 0:
        return 0
    s = np.linalg.svd(np.asarray(samples, dtype=float), compute_uv=False)
    return int(np.sum(s > tol * max(1.0, float(s[0]))))


# -- obstructions ----------------------------------------------------------

OBSTRUCTION_KINDS = ("A_n", "heisenberg_nonunimodular", "search_evidence")


@dataclass
class ObstructionCertificate:
    """Evidence that the geodesic elements lie in a proper subspace.

    ``witness`` holds covectors as rows: every geodesic X satisfies
    <X, w> = 0 for each row w, paired through the metric used for sampling.
    ``max_sample_pairing`` is the largest such pairing seen over the
    converged samples, and ``details`` records the analytic check.
    """

    kind: str
    witness: np.ndarray
    trials: int
    max_span_rank: int
    metrics: int = 1
    samples: int = 0
    max_sample_pairing: float = 0.0
    tol: float = 1e-8
    dim: int = 0
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        if self.max_span_rank >= self.dim:
            return False
        if self.kind == "search_evidence":
            return True
        if self.kind == "A_n" and not self.details.get("analytic", False):
            return False
        return self.max_sample_pairing <= self.tol


def _an_on(g: LieAlgebra, h):
    if h.dim != g.dim - 1 or not alg.is_abelian_subspace(g, h) or not alg.is_ideal(g, h):
        return None
    y = shapes.complement_vector(g, h)
    c = shapes.scalar_action(shapes.restriction(g, y, h), g.exact)
    if c is None or la.scalar_is_zero(c):
        return None
    return h, c


def _pairing(samples, witness: np.ndarray, gram: np.ndarray) -> float:
    if not samples or witness.size == 0:
        return 0.0
    s = np.asarray(samples)
    return float(np.max(np.abs(s @ gram @ la.to_float(witness).T)))


def _sample_complement(samples, gram: np.ndarray, n: int) -> np.ndarray:
    """Rows w with <s, w> = 0 for every sample, w ranging over the metric-orthogonal complement."""
    if not samples:
        return np.eye(n)
    u, sv, vt = np.linalg.svd(np.asarray(samples) @ gram)
    r = int(np.sum(sv > 1e-6 * max(1.0, float(sv[0]))))
    return vt[r:]


def _an_analytic(g: LieAlgebra, metric: InnerProduct, h, c) -> dict:
    """With N the unit normal to g', <[N, N+Y], N+Y> = k <Y, Y> for Y in g', k != 0."""
    gram = la.to_float(metric.gram)
    hrows = la.to_float(h.rows)
    gf = g.to_float()
    perp = la.to_float(h.perp(gram).rows)[0]
    nvec = perp / np.sqrt(perp @ gram @ perp)
    adn = alg.ad_matrix(gf, nvec)
    img = adn @ hrows.T
    k = float(img[:, 0] @ gram @ hrows[0]) / float(hrows[0] @ gram @ hrows[0])
    scalar_ok = np.allclose(img, k * hrows.T, atol=1e-9)
    return {"c": float(c), "k": k, "analytic": bool(scalar_ok and abs(k) > 1e-9)}


def obstruction_certificate(
    g: LieAlgebra,
    metric=None,
    kind: str = "search_evidence",
    trials: int = 200,
    seed: int = 0,
    metrics: int = 1,
    tol: float = 1e-8,
    ideal=None,
) -> ObstructionCertificate:
    """Build an obstruction certificate of the requested kind.

    With ``metric=None`` and ``metrics > 1`` the sampling runs over that many
    random metrics; the witness pairing is then checked per metric.
    """
    if kind not in OBSTRUCTION_KINDS:
        raise WrongShape(f"unknown obstruction kind {kind!r}")
    n = g.dim
    details: dict = {}
    if kind == "A_n":
        shape = shapes.an_shape(g) if ideal is None else _an_on(g, ideal)
        if shape is None:
            raise WrongShape("algebra has no codimension-one abelian ideal acted on by a nonzero scalar")
        h, c = shape
        witness = h.rows
    elif kind == "heisenberg_nonunimodular":
        if ideal is None:
            found = shapes.heisenberg_ideal(g)
        else:
            zc = shapes.heisenberg_center(g, ideal)
            found = None if zc is None else (ideal, zc)
        if found is None:
            raise WrongShape("algebra has no codimension-one Heisenberg ideal")
        h, z = found
        y = shapes.complement_vector(g, h)
        lam = alg.coordinates_in(z, alg.bracket(g, y, z.rows[0]))[0]
        if la.scalar_is_zero(lam):
            raise WrongShape("the Heisenberg ideal is central-unimodular (lambda = 0)")
        details["lambda"] = float(lam)
        witness = z.rows
    else:
        witness = None

    rng = np.random.default_rng(seed)
    if metric is not None:
        metric_list = [_as_metric(g, metric)]
    elif metrics <= 1:
        metric_list = [InnerProduct.identity(n, g.exact)]
    else:
        metric_list = [alg.random_metric(n, rng) for _ in range(metrics)]

    max_rank = 0
    max_pair = 0.0
    count = 0
    analytic = True
    for k, m in enumerate(metric_list):
        samples = sample_geodesics(g, m, trials, seed=int(rng.integers(2**31)) if metrics > 1 else seed)
        count += len(samples)
        max_rank = max(max_rank, span_rank(samples))
        if witness is not None:
            max_pair = max(max_pair, _pairing(samples, witness, la.to_float(m.gram)))
        if kind == "A_n":
            info = _an_analytic(g, m, h, c)
            analytic = analytic and info["analytic"]
            if k == 0:
                details.update(info)
    if kind == "A_n":
        details["analytic"] = analytic

    if witness is None:
        if len(metric_list) == 1:
            # complement of what the samples span, as metric-dual covectors
            gram = la.to_float(metric_list[0].gram)
            samples = sample_geodesics(g, metric_list[0], trials, seed=seed)
            witness = _sample_complement(samples, gram, n)
            max_pair = _pairing(samples, witness, gram)
        else:
            witness = la.zeros((0, n), False)

    return ObstructionCertificate(
        kind=kind,
        witness=witness,
        trials=trials,
        max_span_rank=max_rank,
        metrics=len(metric_list),
        samples=count,
        max_sample_pairing=max_pair,
        tol=tol,
        details=details,
        dim=n,
    )
