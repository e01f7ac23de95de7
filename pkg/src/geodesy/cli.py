"""``geodesy`` command line.

Algebras are named by a JSON document path, ``-`` for stdin, or
``catalog:NAME`` followed by ``key=value`` parameters.  Exit codes: 0 pass,
1 usage or parse error, 2 check failed, 3 obstruction, 4 undetermined.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import algebra as alg
from . import catalog as cat
from . import constructions as con
from . import document as doc
from . import geodesic as geo
from . import linalg as la
from . import reports
from . import reproduce
from .algebra import InnerProduct, LieAlgebra
from .constructions import ConstructionResult, Undetermined
from .errors import DocumentError, GeodesyError
from .geodesic import ObstructionCertificate
from .scalar import ScalarSyntaxError, parse_scalar

EXIT_OK, EXIT_USAGE, EXIT_FAILED, EXIT_OBSTRUCTION, EXIT_UNDETERMINED = 0, 1, 2, 3, 4
SEED_ENV = "GEODESY_SEED"

THEOREMS = {
    "auto": lambda g, seed: con.auto_construct(g, seed=seed),
    "nilabelian": lambda g, seed: con.construct_abelian_nilradical(g),
    "rdiag": lambda g, seed: con.construct_rdiag(g, seed=seed),
    "codim1": lambda g, seed: con.construct_codim1_abelian(g, seed=seed),
    "heisenberg": lambda g, seed: con.construct_heisenberg_codim1(g, seed=seed),
}


class UsageError(Exception):
    pass


@dataclass
class Source:
    """An algebra plus whatever metric/basis came with it."""

    algebra: LieAlgebra
    metric: InnerProduct | None
    basis: np.ndarray | None
    catalog: tuple[str, dict] | None = None


# -- loading -------------------------------------------------------------


def _params(pairs: list[str]) -> dict:
    out = {}
    for p in pairs:
        key, sep, value = p.partition("=")
        if not sep or not key:
            raise UsageError(f"expected key=value, got {p!r}")
        try:
            out[key] = parse_scalar(value)
        except ScalarSyntaxError as e:
            raise UsageError(f"parameter {key}: {e}") from None
    return out


def load_source(ref: str, pairs: list[str]) -> Source:
    if ref.startswith("catalog:"):
        name = ref[len("catalog:"):]
        params = _params(pairs)
        g = cat.instantiate(name, params)
        w = cat.witness(name, params)
        metric, basis = w if w is not None else (None, None)
        return Source(g, metric, basis, (name, params))
    if pairs:
        raise UsageError("key=value parameters only apply to catalog:NAME")
    if ref == "-":
        text, where = sys.stdin.read(), "<stdin>"
    else:
        try:
            with open(ref, encoding="utf-8") as fh:
                text, where = fh.read(), ref
        except OSError as e:
            raise UsageError(f"cannot read {ref}: {e.strerror}") from None
    try:
        d = doc.parse(text)
    except DocumentError as e:
        loc = f":{e.line}:{e.column}" if e.line is not None else ""
        raise UsageError(f"{where}{loc}: {e.msg}") from None
    return Source(d.algebra, d.metric, d.basis)


def _require_valid(g: LieAlgebra) -> None:
    violations = alg.validate(g)
    if violations:
        lines = "\n".join(f"  {v}" for v in violations[:20])
        raise UsageError(f"invalid algebra ({len(violations)} violations):\n{lines}")


def _matrix_option(spec: str | None, src: Source, field: str, n: int):
    """Resolve --metric / --basis: identity, standard, witness or a document path."""
    if spec is None:
        return getattr(src, field)
    if spec in ("identity", "standard"):
        return InnerProduct.identity(n, True) if field == "metric" else la.identity(n, True)
    if spec == "witness":
        if src.catalog is None:
            raise UsageError("'witness' needs a catalog algebra")
        w = cat.witness(*src.catalog)
        if w is None:
            raise UsageError(f"{src.catalog[0]} has no catalog witness")
        return w[0] if field == "metric" else w[1]
    other = load_source(spec, [])
    value = getattr(other, field)
    if value is None:
        raise UsageError(f"{spec} has no {field}")
    return value


def _seed(value: int | None, default: int) -> int:
    if value is not None:
        return value
    env = os.environ.get(SEED_ENV)
    if env is None:
        return default
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {env!r}") from None


def _subspace(s) -> dict:
    return {"dim": s.dim, "basis": reports.rows_text(s.rows) if s.dim else []}


# -- commands ------------------------------------------------------------


def cmd_info(args) -> tuple[dict, int]:
    src = load_source(args.algebra, args.params)
    g = src.algebra
    violations = alg.validate(g)
    rep: dict = {
        "command": "info",
        "name": g.name,
        "dim": g.dim,
        "labels": list(g.labels),
        "mode": "exact" if g.exact else "float",
        "valid": not violations,
    }
    if violations:
        rep["violations"] = [str(v) for v in violations]
        return rep, EXIT_FAILED
    solvable = alg.is_solvable(g)
    uni = alg.is_unimodular(g)
    kernel = alg.unimodular_kernel(g)
    rep.update({
        "abelian": alg.is_abelian(g),
        "nilpotent": alg.is_nilpotent(g),
        "solvable": solvable,
        "derived_series": [s.dim for s in alg.derived_series(g)],
        "lower_central_series": [s.dim for s in alg.lower_central_series(g)],
        "derived_algebra": _subspace(alg.derived_subalgebra(g)),
        "center": _subspace(alg.center(g)),
    })
    if solvable:
        nil = alg.nilradical_solvable(g)
        rep["nilradical"] = {**_subspace(nil), "abelian": alg.is_abelian_subspace(g, nil)}
    rep["unimodular"] = uni
    kernel_alg = alg.subalgebra(g, kernel)
    rep["unimodular_kernel"] = {**_subspace(kernel), "center_dim": alg.center(kernel_alg).dim}
    return rep, EXIT_OK


def cmd_check(args) -> tuple[dict, int]:
    src = load_source(args.algebra, args.params)
    g = src.algebra
    _require_valid(g)
    metric = _matrix_option(args.metric, src, "metric", g.dim)
    basis = _matrix_option(args.basis, src, "basis", g.dim)
    if metric is None:
        metric = InnerProduct.identity(g.dim, g.exact)
    if basis is None:
        raise UsageError("no basis given (use --basis standard|witness|FILE)")
    cert = geo.verify_basis(g, metric, basis, require_orthonormal=args.orthonormal, tol=args.tol)
    rep = {"command": "check", "name": g.name, **reports.certificate(cert)}
    return rep, EXIT_OK if cert.passed else EXIT_FAILED


def cmd_construct(args) -> tuple[dict, int]:
    src = load_source(args.algebra, args.params)
    g = src.algebra
    _require_valid(g)
    seed = _seed(args.seed, 0)
    try:
        res = THEOREMS[args.theorem](g, seed)
    except GeodesyError as exc:
        res = Undetermined([(args.theorem, str(exc))])
    rep = {"command": "construct", "name": g.name, "theorem": args.theorem, "seed": seed,
           **reports.outcome(res)}
    if isinstance(res, ConstructionResult):
        code = EXIT_OK if res.passed else EXIT_FAILED
        if args.out:
            text = doc.render(doc.AlgebraDocument(g, res.metric, np.asarray(res.basis)))
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
    elif isinstance(res, ObstructionCertificate):
        code = EXIT_OBSTRUCTION
    else:
        code = EXIT_UNDETERMINED
    return rep, code


def cmd_sample(args) -> tuple[dict, int]:
    src = load_source(args.algebra, args.params)
    g = src.algebra
    _require_valid(g)
    seed = _seed(args.seed, 0)
    metric = _matrix_option(args.metric, src, "metric", g.dim) if args.metric else None
    metric = metric or InnerProduct.identity(g.dim, False)
    samples = geo.sample_geodesics(g, metric, trials=args.trials, seed=seed)
    rep = {
        "command": "sample",
        "name": g.name,
        "seed": seed,
        "trials": args.trials,
        "converged": len(samples),
        "span_rank": geo.span_rank(samples),
        "samples": reports.rows_text(np.asarray(samples)) if samples else [],
    }
    return rep, EXIT_OK


def cmd_verify_paper(args) -> tuple[dict, int]:
    seed = _seed(args.seed, reproduce.DEFAULT_SEED)
    rep = reproduce.run(args.filter, seed)
    if rep["total"] == 0:
        raise UsageError(f"no checks match {args.filter!r}")
    return rep, EXIT_OK if rep["failed"] == 0 else EXIT_FAILED


# -- entry point ---------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text",
                        help="text report (default) or the JSON machine form")

    algebra = argparse.ArgumentParser(add_help=False)
    algebra.add_argument("algebra", help="document path, '-' for stdin, or catalog:NAME")
    algebra.add_argument("params", nargs="*", help="catalog parameters as key=value")

    p = argparse.ArgumentParser(prog="geodesy", description="Geodesic bases of Lie algebras.")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("info", parents=[common, algebra], help="structural invariants")

    c = sub.add_parser("check", parents=[common, algebra], help="verify a geodesic basis")
    c.add_argument("--metric", help="identity, witness, or a document with a metric")
    c.add_argument("--basis", help="standard, witness, or a document with a basis")
    c.add_argument("--orthonormal", action="store_true", help="also require an orthonormal basis")
    c.add_argument("--tol", type=float, help="defect tolerance (default: exact, or 1e-9 in float mode)")

    k = sub.add_parser("construct", parents=[common, algebra], help="build a metric and geodesic basis")
    k.add_argument("--theorem", choices=sorted(THEOREMS), default="auto")
    k.add_argument("--seed", type=int, help=f"random seed (default ${SEED_ENV} or 0)")
    k.add_argument("--out", help="write the algebra with the constructed metric and basis here")

    s = sub.add_parser("sample", parents=[common, algebra], help="random search for geodesic elements")
    s.add_argument("--metric", help="identity, witness, or a document with a metric")
    s.add_argument("--trials", type=int, default=200)
    s.add_argument("--seed", type=int, help=f"random seed (default ${SEED_ENV} or 0)")

    v = sub.add_parser("verify-paper", parents=[common], help="run every reproduction check")
    v.add_argument("--filter", help="fnmatch pattern on check names, e.g. 'nilabelian/*'")
    v.add_argument("--seed", type=int, help=f"random seed (default ${SEED_ENV} or built in)")
    return p


COMMANDS = {
    "info": cmd_info,
    "check": cmd_check,
    "construct": cmd_construct,
    "sample": cmd_sample,
    "verify-paper": cmd_verify_paper,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    try:
        rep, code = COMMANDS[args.command](args)
    except (UsageError, GeodesyError) as e:
        print(f"geodesy: {e}", file=sys.stderr)
        return EXIT_USAGE
    out = reports.dumps(rep) if args.format == "json" else reports.human(rep)
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
