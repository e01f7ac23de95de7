"""Named Lie algebras with verdicts and explicit geodesic-basis witnesses.

Verdicts are pairs ``(geodesic_basis, orthonormal_geodesic_basis)`` with
values "yes" / "no".  A witness is an exact ``(InnerProduct, vectors)`` pair.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from . import algebra as alg
from .algebra import InnerProduct, LieAlgebra
from .errors import ParamOutOfRange, UnknownName
from .scalar import sqrt_rational, to_exact

Params = dict[str, Fraction]


@dataclass(frozen=True)
class Param:
    name: str
    default: Fraction
    constraint: str = ""
    check: Callable[[Fraction], bool] = lambda v: True


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    make: Callable[..., LieAlgebra]
    verdict: Callable[..., tuple[str, str]]
    params: tuple[Param, ...] = ()
    witness: Callable[..., tuple[InnerProduct, np.ndarray]] | None = None
    source: str = ""
    unimodular: bool | None = None
    grid: tuple[dict, ...] = field(default_factory=tuple)

    @property
    def has_witness(self) -> bool:
        return self.witness is not None


# -- helpers ---------------------------------------------------------------


def _q(x) -> Fraction:
    return to_exact(x)


def _vec(coords) -> np.ndarray:
    return np.array([to_exact(c) for c in coords], dtype=object)


def _rows(rows) -> np.ndarray:
    return np.array([[to_exact(c) for c in r] for r in rows], dtype=object)


def _identity(n: int) -> InnerProduct:
    return InnerProduct.identity(n, True)


def _std(n: int) -> tuple[InnerProduct, np.ndarray]:
    return _identity(n), alg.la.identity(n, True)


def _brackets(dim: int, table: dict, labels=None, name: str = "") -> LieAlgebra:
    return LieAlgebra.from_brackets(dim, table, labels=labels, name=name)


def _suspend(h: LieAlgebra, columns, name: str) -> LieAlgebra:
    """Suspension with the derivation given column-wise (column j = phi(X_j))."""
    phi = np.array([[_q(v) for v in row] for row in columns], dtype=object)
    return alg.suspension(h, phi, name=name)


def _abelian(n: int) -> LieAlgebra:
    return LieAlgebra.abelian(n, True)


def _heis(m: int) -> LieAlgebra:
    n = 2 * m + 1
    return _brackets(n, {(i, i + m): {n: 1} for i in range(1, m + 1)}, name=f"H{n}")


def _h3_plus_r() -> LieAlgebra:
    return _brackets(4, {(1, 2): {3: 1}})


def _matrix_diag(vals) -> list[list]:
    n = len(vals)
    return [[vals[i] if i == j else 0 for j in range(n)] for i in range(n)]


# -- small algebras --------------------------------------------------------


def make_abelian(n=3) -> LieAlgebra:
    return LieAlgebra.abelian(int(n), True, name=f"R^{int(n)}")


def make_an(n=3) -> LieAlgebra:
    n = int(n)
    return alg.suspension(_abelian(n), alg.la.identity(n, True), name=f"A_{n}")


def make_e2() -> LieAlgebra:
    return _brackets(3, {(1, 2): {3: -1}, (1, 3): {2: 1}}, name="e2")


def make_sl2() -> LieAlgebra:
    return _brackets(3, {(1, 2): {2: 2}, (1, 3): {3: -2}, (2, 3): {1: 1}}, ("H", "E", "F"), "sl2")


def make_so3() -> LieAlgebra:
    return _brackets(3, {(1, 2): {3: 1}, (2, 3): {1: 1}, (3, 1): {2: 1}}, name="so3")


def make_sl2_semidirect() -> LieAlgebra:
    table = {
        (1, 2): {2: 2},
        (1, 3): {3: -2},
        (1, 4): {4: 1},
        (1, 5): {5: -1},
        (2, 3): {1: 1},
        (3, 4): {5: 1},
        (2, 5): {4: 1},
    }
    return _brackets(5, table, name="sl2_semidirect_r2")


def make_m04() -> LieAlgebra:
    return _brackets(4, {(1, 2): {3: 1}, (1, 3): {4: 1}}, name="m0_4")


def make_clnn() -> LieAlgebra:
    g = _suspend(make_m04(), _matrix_diag([3, -4, -1, 2]), "clnn")
    return LieAlgebra(g.c, ("X0", "Y1", "Y2", "Y3", "Y4"), "clnn")


def make_oscillator() -> LieAlgebra:
    cols = [[0, -1, 0], [1, 0, 0], [0, 0, 0]]
    return _suspend(_heis(1), cols, "oscillator")


def make_sl2_plus_r2() -> LieAlgebra:
    return alg.direct_sum(make_sl2(), _abelian(2), name="sl2_plus_r2")


def make_so3_plus_r2() -> LieAlgebra:
    return alg.direct_sum(make_so3(), _abelian(2), name="so3_plus_r2")


# -- dimension 4, nonunimodular -------------------------------------------


def make_m2() -> LieAlgebra:
    return _brackets(4, {(1, 2): {2: 1}, (1, 3): {3: 1}, (1, 4): {4: 1}}, name="M2")


def make_m3(a=0) -> LieAlgebra:
    a = _q(a)
    return _brackets(4, {(1, 2): {2: 1}, (1, 3): {4: 1}, (1, 4): {3: -a, 4: a + 1}}, name="M3")


def make_m4() -> LieAlgebra:
    return _brackets(4, {(1, 2): {3: 1}, (1, 3): {3: 1}}, name="M4")


def make_m6(a=0, b=0) -> LieAlgebra:
    a, b = _q(a), _q(b)
    return _brackets(4, {(1, 2): {3: 1}, (1, 3): {4: 1}, (1, 4): {2: a, 3: b, 4: 1}}, name="M6")


def make_m8() -> LieAlgebra:
    return _brackets(4, {(1, 2): {2: 1}, (3, 4): {4: 1}}, name="M8")


def make_m9() -> LieAlgebra:
    table = {(1, 2): {2: 1, 3: -1}, (1, 3): {2: 1}, (4, 2): {2: 1}, (4, 3): {3: 1}}
    return _brackets(4, table, name="M9")


def make_m12() -> LieAlgebra:
    table = {(1, 2): {2: 1}, (1, 3): {3: 2}, (1, 4): {4: 1}, (4, 2): {3: 1}}
    return _brackets(4, table, name="M12")


def make_m13(a=0) -> LieAlgebra:
    a = _q(a)
    table = {(1, 2): {2: 1, 4: a}, (1, 3): {3: 1}, (1, 4): {2: 1}, (4, 2): {3: 1}}
    return _brackets(4, table, name="M13")


# -- dimension 5, solvable -------------------------------------------------


def _g_series(columns, name: str) -> LieAlgebra:
    return _suspend(_h3_plus_r(), columns, name)


def make_g19(alpha=0) -> LieAlgebra:
    al = _q(alpha)
    return _g_series(_matrix_diag([1, al, 1 + al, -2 * (1 + al)]), "g19")


def make_g23() -> LieAlgebra:
    return _g_series([[1, 0, 0, 0], [1, 1, 0, 0], [0, 0, 2, 0], [0, 0, 0, -4]], "g23")


def make_g25(p=1) -> LieAlgebra:
    p = _q(p)
    return _g_series([[p, -1, 0, 0], [1, p, 0, 0], [0, 0, 2 * p, 0], [0, 0, 0, -4 * p]], "g25")


def make_g28() -> LieAlgebra:
    h = Fraction(-3, 2)
    return _g_series([[h, 0, 0, 0], [0, 1, 0, 0], [0, 0, Fraction(-1, 2), 0], [0, 1, 0, 1]], "g28")


def _nilabelian(a1, a2, name: str) -> LieAlgebra:
    """R^2 acting on R^3 = span(X3, X4, X5) through the column-wise matrices a1, a2."""
    table: dict = {}
    for gen, mat in ((1, a1), (2, a2)):
        for j in range(3):
            terms = {k + 3: mat[k][j] for k in range(3) if mat[k][j] != 0}
            if terms:
                table[(gen, j + 3)] = terms
    return _brackets(5, table, name=name)


def make_g33() -> LieAlgebra:
    return _nilabelian(_matrix_diag([1, 0, -1]), _matrix_diag([0, 1, -1]), "g33")


def make_g35() -> LieAlgebra:
    return _nilabelian(_matrix_diag([-2, 1, 1]), [[0, 0, 0], [0, 0, 1], [0, -1, 0]], "g35")


# -- witnesses -------------------------------------------------------------


def _s(q) -> object:
    return sqrt_rational(_q(q))


def witness_sl2():
    r = _s(Fraction(1, 2))
    return _identity(3), _rows([[1, 0, 0], [0, r, r], [0, r, -r]])


def witness_sl2_semidirect():
    r2 = _s(2)
    vecs = [
        [1, 0, 0, 0, 0],
        [0, 1, 0, 0, r2],
        [0, 1, 0, 0, -r2],
        [0, 0, 1, r2, 0],
        [0, 0, 1, -r2, 0],
    ]
    return _identity(5), _rows(vecs)


def _with_r2(witness):
    metric, vecs = witness()
    n = metric.dim
    gram = alg.la.identity(n + 2, True)
    gram[:n, :n] = metric.gram
    rows = alg.la.identity(n + 2, True)
    rows[:n, :n] = vecs
    return InnerProduct(gram), rows


def witness_m8():
    onb = _rows([[1, 0, 0, 1], [0, 1, 0, 0], [0, 1, 1, 0], [0, 0, 0, 1]])
    vecs = _rows([[1, 0, 0, 0], [1, 0, 0, 1], [0, 0, 1, 0], [0, 1, 1, 0]])
    return InnerProduct.from_orthonormal_basis(onb), vecs


def _pm_x3_x4(r2) -> list[list]:
    return [[0, 0, 0, r2, 1], [0, 0, 0, -r2, 1]]


def witness_g19(alpha=0):
    al = _q(alpha)
    r2 = _s(2)
    if al >= 0:
        k = _s(2 * (1 + al))
        vecs = [[1, 0, 0, 0, 0], [0, k, 0, 0, 1], [0, 0, k, 0, _s(al)]] + _pm_x3_x4(r2)
    else:
        k = _s(-al)
        vecs = [[1, 0, 0, 0, 0], [0, k, 1, 0, 0], [0, -k, 1, 0, 0]] + _pm_x3_x4(r2)
    return _identity(5), _rows(vecs)


def witness_g23_g25(*_):
    r2 = _s(2)
    vecs = [[1, 0, 0, 0, 0], [0, 2, 0, 0, 1], [0, 0, 2, 0, 1]] + _pm_x3_x4(r2)
    return _identity(5), _rows(vecs)


def witness_g28():
    r2, k = _s(2), _s(Fraction(3, 2))
    vecs = [[1, 0, 0, 0, 0], [0, 1, k, 0, 0], [0, 1, -k, 0, 0]] + _pm_x3_x4(r2)
    return _identity(5), _rows(vecs)


def witness_g35():
    h = Fraction(1, 2)
    r3h = _s(Fraction(3, 4))
    onb = _rows(
        [
            [1, 0, 0, 0, 0],
            [0, 1, 0, 0, 0],
            [0, 0, 1, 1, 0],
            [0, 0, 1, -h, r3h],
            [0, 0, 1, -h, -r3h],
        ]
    )
    return InnerProduct.from_orthonormal_basis(onb), onb


def witness_clnn():
    # X0 orthogonal to the nilradical; Y1..Y4 orthogonal with weights 3, 1, 2, 1
    gram = _rows(_matrix_diag([1, 3, 1, 2, 1]))
    r2 = _s(2)
    vecs = [
        [1, 0, 0, 0, 0],
        [0, 2, 3, 0, 0],
        [0, 0, 1, 0, r2],
        [0, 0, 1, 0, -r2],
        [0, 0, -1, r2, 2],
    ]
    return InnerProduct(gram), _rows(vecs)


# -- registry --------------------------------------------------------------

YES, NO = "yes", "no"


def _const(v):
    return lambda **_: v


def _nonzero(v) -> bool:
    return v != 0


def _int_range(lo: int, hi: int):
    return lambda v: v.denominator == 1 and lo <= v <= hi


def _std_witness(factory):
    return lambda **_: _std(factory().dim)


_ENTRIES: list[CatalogEntry] = [
    CatalogEntry(
        "R_n", make_abelian, _const((YES, YES)),
        (Param("n", Fraction(3), "1 <= n <= 8", _int_range(1, 8)),),
        witness=lambda n=3: _std(int(n)), source="abelian", unimodular=True,
        grid=({"n": Fraction(1)}, {"n": Fraction(3)}, {"n": Fraction(5)}),
    ),
    CatalogEntry(
        "A_n", make_an, _const((NO, NO)),
        (Param("n", Fraction(3), "1 <= n <= 6", _int_range(1, 6)),),
        source="suspension of R^n by the identity", unimodular=False,
        grid=tuple({"n": Fraction(k)} for k in range(1, 7)),
    ),
    CatalogEntry("H3", lambda: _heis(1), _const((YES, YES)), witness=_std_witness(lambda: _heis(1)),
                 source="Heisenberg, dim 3", unimodular=True),
    CatalogEntry("H5", lambda: _heis(2), _const((YES, YES)), witness=_std_witness(lambda: _heis(2)),
                 source="Heisenberg, dim 5", unimodular=True),
    CatalogEntry("e2", make_e2, _const((YES, YES)), witness=_std_witness(make_e2),
                 source="Euclidean plane isometries", unimodular=True),
    CatalogEntry("sl2", make_sl2, _const((YES, YES)), witness=lambda: witness_sl2(),
                 source="simple, split", unimodular=True),
    CatalogEntry("so3", make_so3, _const((YES, YES)), witness=_std_witness(make_so3),
                 source="simple, compact", unimodular=True),
    CatalogEntry("sl2_semidirect_r2", make_sl2_semidirect, _const((YES, NO)),
                 witness=lambda: witness_sl2_semidirect(),
                 source="dimension 5, nonsolvable, indecomposable", unimodular=True),
    CatalogEntry("m0_4", make_m04, _const((YES, YES)), witness=_std_witness(make_m04),
                 source="filiform, dim 4", unimodular=True),
    CatalogEntry("clnn", make_clnn, _const((YES, NO)), witness=lambda: witness_clnn(),
                 source="dimension 5, nilradical m0(4), weights 3,-4,-1,2", unimodular=True),
    CatalogEntry("oscillator", make_oscillator, _const((YES, YES)), witness=_std_witness(make_oscillator),
                 source="rotation suspension of H3", unimodular=True),
    CatalogEntry("sl2_plus_r2", make_sl2_plus_r2, _const((YES, YES)),
                 witness=lambda: _with_r2(witness_sl2), source="reductive, dim 5", unimodular=True),
    CatalogEntry("so3_plus_r2", make_so3_plus_r2, _const((YES, YES)),
                 witness=lambda: _std(5), source="reductive, dim 5", unimodular=True),
    CatalogEntry("M2", make_m2, _const((NO, NO)), source="dimension 4, isomorphic to A_3", unimodular=False),
    CatalogEntry(
        "M3", make_m3, _const((YES, NO)),
        (Param("a", Fraction(0), "a != -2", lambda v: v != -2),),
        source="dimension 4, nonunimodular", unimodular=False,
        grid=({"a": Fraction(-1)}, {"a": Fraction(0)}, {"a": Fraction(2)}),
    ),
    CatalogEntry("M4", make_m4, _const((YES, NO)), source="dimension 4, nonunimodular", unimodular=False),
    CatalogEntry(
        "M6", make_m6, _const((YES, NO)),
        (Param("a", Fraction(0)), Param("b", Fraction(0))),
        source="dimension 4, nonunimodular", unimodular=False,
        grid=tuple({"a": Fraction(a), "b": Fraction(b)} for a in (-1, 0, 1) for b in (-1, 0, 1)),
    ),
    CatalogEntry("M8", make_m8, _const((YES, NO)), witness=lambda: witness_m8(),
                 source="dimension 4, nonunimodular, abelian derived algebra", unimodular=False),
    CatalogEntry("M9", make_m9, _const((NO, NO)),
                 source="dimension 4, unimodular kernel e(2)", unimodular=False),
    CatalogEntry("M12", make_m12, _const((NO, NO)),
                 source="dimension 4, unimodular kernel H3", unimodular=False),
    CatalogEntry(
        "M13", make_m13, _const((NO, NO)), (Param("a", Fraction(0)),),
        source="dimension 4, unimodular kernel H3", unimodular=False,
        grid=({"a": Fraction(0)}, {"a": Fraction(1)}, {"a": Fraction(-2)}),
    ),
    CatalogEntry(
        "g19", make_g19, _const((YES, NO)),
        (Param("alpha", Fraction(0), "alpha != -1", lambda v: v != -1),),
        witness=lambda alpha=0: witness_g19(alpha),
        source="dimension 5, nilradical H3+R", unimodular=True,
        grid=tuple({"alpha": Fraction(v)} for v in (-2, Fraction(-1, 2), 0, 1, 3)),
    ),
    CatalogEntry("g23", make_g23, _const((YES, NO)), witness=lambda: witness_g23_g25(),
                 source="dimension 5, nilradical H3+R", unimodular=True),
    CatalogEntry(
        "g25", make_g25, _const((YES, NO)),
        (Param("p", Fraction(1), "p != 0", _nonzero),),
        witness=lambda p=1: witness_g23_g25(p),
        source="dimension 5, nilradical H3+R", unimodular=True,
        grid=tuple({"p": Fraction(v)} for v in (Fraction(-1, 2), Fraction(1, 2), -1, 1, 2)),
    ),
    CatalogEntry("g28", make_g28, _const((YES, NO)), witness=lambda: witness_g28(),
                 source="dimension 5, nilradical H3+R, parameter -3/2", unimodular=True),
    CatalogEntry("g33", make_g33, _const((YES, NO)),
                 source="dimension 5, abelian nilradical R^3", unimodular=True),
    CatalogEntry("g35", make_g35, _const((YES, YES)), witness=lambda: witness_g35(),
                 source="dimension 5, abelian nilradical R^3, rotation", unimodular=True),
]

_BY_NAME = {e.name: e for e in _ENTRIES}
_INDEXED = re.compile(r"^(A|R)_(\d+)$")


def entries() -> list[CatalogEntry]:
    return list(_ENTRIES)


def names() -> list[str]:
    return [e.name for e in _ENTRIES]


def lookup(name: str) -> tuple[CatalogEntry, Params]:
    """Resolve a name; ``A_3`` and ``R_4`` fix the dimension parameter."""
    if name in _BY_NAME:
        return _BY_NAME[name], {}
    m = _INDEXED.match(name)
    if m:
        return _BY_NAME[f"{m.group(1)}_n"], {"n": Fraction(int(m.group(2)))}
    raise UnknownName(f"unknown catalog entry {name!r}")


def resolve_params(entry: CatalogEntry, params: dict | None = None) -> Params:
    params = dict(params or {})
    known = {p.name: p for p in entry.params}
    out: Params = {}
    for key in params:
        if key not in known:
            raise ParamOutOfRange(f"{entry.name} has no parameter {key!r}")
    for p in entry.params:
        v = _q(params.get(p.name, p.default))
        if not isinstance(v, Fraction):
            raise ParamOutOfRange(f"{entry.name}: parameter {p.name} must be rational")
        if not p.check(v):
            raise ParamOutOfRange(f"{entry.name}: {p.constraint} (got {p.name}={v})")
        out[p.name] = v
    return out


def _split(name: str, params: dict | None):
    entry, implied = lookup(name)
    merged = {**implied, **(params or {})}
    return entry, resolve_params(entry, merged)


def instantiate(name: str, params: dict | None = None) -> LieAlgebra:
    entry, p = _split(name, params)
    g = entry.make(**p)
    suffix = ",".join(f"{k}={v}" for k, v in p.items())
    label = f"{entry.name}({suffix})" if suffix else entry.name
    if entry.name in ("A_n", "R_n"):
        label = f"{entry.name[0]}_{p['n']}"
    return LieAlgebra(g.c, g.labels, label)


def witness(name: str, params: dict | None = None) -> tuple[InnerProduct, np.ndarray] | None:
    entry, p = _split(name, params)
    if entry.witness is None:
        return None
    return entry.witness(**p)


def verdict(name: str, params: dict | None = None) -> tuple[str, str]:
    entry, p = _split(name, params)
    return entry.verdict(**p)


def parameter_grid(entry: CatalogEntry) -> list[Params]:
    """Parameter values used for verification sweeps (defaults when none listed)."""
    if entry.grid:
        return [resolve_params(entry, g) for g in entry.grid]
    return [resolve_params(entry, {})]
