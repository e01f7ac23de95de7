"""JSON algebra documents: structure constants plus an optional metric and basis.

Layout::

    {"name": ..., "dim": n, "labels": [...], "mode": "float",   # mode optional
     "brackets": [{"i": 1, "j": 2, "terms": [{"k": 3, "v": "1"}]}, ...],
     "metric": [[...], ...], "basis": [[...], ...]}           # both optional

Indices are 1-based with i < j; the antisymmetric half is implied.  Exact
documents store scalars as ``a/b*sqrt(d)`` sums, float documents as decimal
strings with 17 significant digits.  ``render`` is canonical, so
``render(parse(render(doc))) == render(doc)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .algebra import InnerProduct, LieAlgebra
from .errors import DocumentError
from .scalar import ScalarSyntaxError, parse_scalar, render_scalar

EXACT = "exact"
FLOAT = "float"

_TOP_KEYS = ("name", "dim", "labels", "mode", "brackets", "metric", "basis")
_REQUIRED = ("name", "dim", "labels", "brackets")


@dataclass(frozen=True, eq=False)
class AlgebraDocument:
    algebra: LieAlgebra
    metric: InnerProduct | None = None
    basis: np.ndarray | None = None

    @property
    def mode(self) -> str:
        parts = [self.algebra.c]
        if self.metric is not None:
            parts.append(self.metric.gram)
        if self.basis is not None:
            parts.append(self.basis)
        return EXACT if all(p.dtype == object for p in parts) else FLOAT


# -- rendering -----------------------------------------------------------


def format_float(x: float) -> str:
    return format(float(x), ".17g")


def _scalar_text(x, mode: str) -> str:
    return render_scalar(x) if mode == EXACT else format_float(la.to_float(np.asarray(x)))


def to_dict(doc: AlgebraDocument) -> dict:
    g = doc.algebra
    mode = doc.mode
    n = g.dim
    c = g.c if mode == EXACT else la.to_float(g.c)
    brackets = []
    for i in range(n):
        for j in range(i + 1, n):
            terms = [
                {"k": k + 1, "v": _scalar_text(c[i, j, k], mode)}
                for k in range(n)
                if not la.scalar_is_zero(c[i, j, k], 0.0)
            ]
            if terms:
                brackets.append({"i": i + 1, "j": j + 1, "terms": terms})
    out: dict = {"name": g.name, "dim": n, "labels": list(g.labels)}
    if mode == FLOAT:
        out["mode"] = FLOAT
    out["brackets"] = brackets
    if doc.metric is not None:
        gram = doc.metric.gram if mode == EXACT else la.to_float(doc.metric.gram)
        out["metric"] = [[_scalar_text(x, mode) for x in row] for row in gram]
    if doc.basis is not None:
        basis = doc.basis if mode == EXACT else la.to_float(doc.basis)
        out["basis"] = [[_scalar_text(x, mode) for x in row] for row in basis]
    return out


def _compact(x) -> str:
    return json.dumps(x, ensure_ascii=False, separators=(", ", ": "))


def render(doc: AlgebraDocument) -> str:
    """Canonical text: one bracket or matrix row per line."""
    d = to_dict(doc)
    lines = []
    for key, val in d.items():
        if key in ("brackets", "metric", "basis") and val:
            inner = ",\n".join("    " + _compact(v) for v in val)
            lines.append(f"  {json.dumps(key)}: [\n{inner}\n  ]")
        else:
            lines.append(f"  {json.dumps(key)}: {_compact(val)}")
    return "{\n" + ",\n".join(lines) + "\n}\n"


# -- parsing -------------------------------------------------------------


class _Locator:
    """Maps a JSON string literal back to its first position in the source."""

    def __init__(self, text: str):
        self.text = text

    def at(self, needle: str) -> tuple[int | None, int | None]:
        pos = self.text.find(json.dumps(needle))
        if pos < 0:
            return None, None
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def error(self, msg: str, needle: str | None = None) -> DocumentError:
        line, col = self.at(needle) if needle is not None else (None, None)
        return DocumentError(msg, line, col)


def _no_duplicates(pairs):
    seen = {}
    for k, v in pairs:
        if k in seen:
            raise ValueError(f"duplicate key {k!r}")
        seen[k] = v
    return seen


def _int(value, what: str, loc: _Locator, needle: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise loc.error(f"{what} must be an integer", needle)
    return value


def _scalar(text, mode: str, loc: _Locator, what: str):
    if not isinstance(text, str):
        raise loc.error(f"{what} must be a scalar string")
    if mode == EXACT:
        try:
            return parse_scalar(text)
        except ScalarSyntaxError as e:
            line, col = loc.at(text)
            if line is not None:
                col += e.column  # the opening quote occupies the reported column
            raise DocumentError(f"{what}: {e}", line, col) from None
    try:
        x = float(text)
    except ValueError:
        raise loc.error(f"{what}: not a decimal number: {text!r}", text) from None
    if not np.isfinite(x):
        raise loc.error(f"{what}: non-finite value {text!r}", text)
    return x


def _keys(obj: dict, allowed, required, where: str, loc: _Locator) -> None:
    for k in obj:
        if k not in allowed:
            raise loc.error(f"unknown field {k!r} in {where}", k)
    for k in required:
        if k not in obj:
            raise loc.error(f"missing field {k!r} in {where}")


def _matrix(rows, mode: str, loc: _Locator, what: str, ncols: int, nrows: int | None):
    if not isinstance(rows, list) or (nrows is not None and len(rows) != nrows):
        raise loc.error(f"{what} must be a list of {nrows if nrows is not None else ''} rows", what)
    out = la.zeros((len(rows), ncols), mode == EXACT)
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != ncols:
            raise loc.error(f"{what} row {r + 1} must have {ncols} entries", what)
        for col, v in enumerate(row):
            out[r, col] = _scalar(v, mode, loc, f"{what}[{r + 1}][{col + 1}]")
    return out


def from_dict(obj, loc: _Locator | None = None) -> AlgebraDocument:
    loc = loc or _Locator("")
    if not isinstance(obj, dict):
        raise loc.error("document must be a JSON object")
    _keys(obj, _TOP_KEYS, _REQUIRED, "document", loc)
    mode = obj.get("mode", EXACT)
    if mode not in (EXACT, FLOAT):
        raise loc.error(f"mode must be 'exact' or 'float', not {mode!r}", "mode")
    exact = mode == EXACT
    name = obj["name"]
    if not isinstance(name, str):
        raise loc.error("name must be a string", "name")
    n = _int(obj["dim"], "dim", loc, "dim")
    if n < 1:
        raise loc.error("dim must be positive", "dim")
    labels = obj["labels"]
    if (
        not isinstance(labels, list)
        or len(labels) != n
        or not all(isinstance(s, str) for s in labels)
        or len(set(labels)) != n
    ):
        raise loc.error(f"labels must be {n} distinct strings", "labels")
    brackets = obj["brackets"]
    if not isinstance(brackets, list):
        raise loc.error("brackets must be a list", "brackets")
    c = la.zeros((n, n, n), exact)
    seen: set[tuple[int, int]] = set()
    for b in brackets:
        if not isinstance(b, dict):
            raise loc.error("each bracket must be an object", "brackets")
        _keys(b, ("i", "j", "terms"), ("i", "j", "terms"), "bracket", loc)
        i = _int(b["i"], "i", loc, "i")
        j = _int(b["j"], "j", loc, "j")
        if not 1 <= i < j <= n:
            raise loc.error(f"bracket indices need 1 <= i < j <= {n}, got ({i}, {j})", "i")
        if (i, j) in seen:
            raise loc.error(f"bracket ({i}, {j}) listed twice", "i")
        seen.add((i, j))
        terms = b["terms"]
        if not isinstance(terms, list):
            raise loc.error("terms must be a list", "terms")
        ks: set[int] = set()
        for t in terms:
            if not isinstance(t, dict):
                raise loc.error("each term must be an object", "terms")
            _keys(t, ("k", "v"), ("k", "v"), "term", loc)
            k = _int(t["k"], "k", loc, "k")
            if not 1 <= k <= n or k in ks:
                raise loc.error(f"term index k={k} out of range or repeated in ({i}, {j})", "k")
            ks.add(k)
            v = _scalar(t["v"], mode, loc, f"[{i},{j}] coefficient of {k}")
            c[i - 1, j - 1, k - 1] = v
            c[j - 1, i - 1, k - 1] = -v
    g = LieAlgebra(c, tuple(labels), name)
    metric = None
    if "metric" in obj:
        gram = _matrix(obj["metric"], mode, loc, "metric", n, n)
        try:
            metric = InnerProduct(gram)
        except ValueError as e:
            raise loc.error(f"metric: {e}", "metric") from None
    basis = None
    if "basis" in obj:
        rows = obj["basis"]
        basis = _matrix(rows, mode, loc, "basis", n, None)
    return AlgebraDocument(g, metric, basis)


def parse(text: str) -> AlgebraDocument:
    loc = _Locator(text)
    try:
        obj = json.loads(text, object_pairs_hook=_no_duplicates)
    except json.JSONDecodeError as e:
        raise DocumentError(e.msg, e.lineno, e.colno) from None
    except ValueError as e:
        raise DocumentError(str(e)) from None
    return from_dict(obj, loc)


def load(path: str) -> AlgebraDocument:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())
