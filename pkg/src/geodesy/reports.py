"""Machine-form reports (plain JSON data) and the text view derived from them."""

from __future__ import annotations

import json

import numpy as np

from .constructions import ConstructionResult, Undetermined
from .document import format_float
from .geodesic import BasisCertificate, ObstructionCertificate
from .scalar import render_scalar


def scalar_text(x) -> str:
    if isinstance(x, (float, np.floating)):
        return format_float(x)
    return render_scalar(x)


def rows_text(rows) -> list[list[str]]:
    rows = np.asarray(rows)
    if rows.dtype != object:
        return [[format_float(v) for v in r] for r in rows]
    return [[render_scalar(v) for v in r] for r in rows]


def number(x) -> float:
    return float(x)


def certificate(cert: BasisCertificate) -> dict:
    return {
        "passed": cert.passed,
        "exact": cert.exact,
        "tolerance": cert.tol,
        "defects": [number(d) for d in cert.defects],
        "max_defect": number(cert.max_defect),
        "rank_witness": scalar_text(cert.gram_rank_witness),
        "orthonormal": bool(cert.orthonormal),
        "violations": list(cert.violations),
    }


def obstruction(ob: ObstructionCertificate) -> dict:
    details = {k: (float(v) if isinstance(v, (float, np.floating)) else v) for k, v in ob.details.items()}
    return {
        "kind": ob.kind,
        "passed": ob.passed,
        "witness": rows_text(ob.witness) if ob.witness.size else [],
        "trials": ob.trials,
        "metrics": ob.metrics,
        "samples": ob.samples,
        "max_span_rank": ob.max_span_rank,
        "max_sample_pairing": float(ob.max_sample_pairing),
        "tolerance": ob.tol,
        "details": details,
    }


def outcome(res) -> dict:
    """Machine form of anything auto_construct can return."""
    if isinstance(res, ConstructionResult):
        return {
            "outcome": "construction",
            "theorem": res.theorem_tag,
            "certificate": certificate(res.certificate),
            "metric": rows_text(res.metric.gram),
            "basis": rows_text(res.basis),
        }
    if isinstance(res, ObstructionCertificate):
        return {"outcome": "obstruction", "obstruction": obstruction(res)}
    if isinstance(res, Undetermined):
        return {
            "outcome": "undetermined",
            "failures": [{"constructor": n, "reason": r} for n, r in res.failures],
        }
    raise TypeError(f"cannot report {type(res).__name__}")


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


# -- text view -------------------------------------------------------------


def _leaf(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v):
        return "[" + ", ".join(_leaf(x) for x in v) + "]"
    if isinstance(v, list) and all(isinstance(x, list) for x in v):
        return "; ".join(_leaf(x) for x in v) or "[]"
    return str(v)


def _flatten(obj, prefix: str = "") -> list[tuple[str, str]]:
    out: list[tuple[str, str]] = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            key = f"{prefix}{k}"
            if isinstance(v, dict):
                out.extend(_flatten(v, key + "."))
            elif isinstance(v, list) and v and all(isinstance(x, dict) for x in v):
                for i, x in enumerate(v):
                    out.extend(_flatten(x, f"{key}[{i}]."))
            else:
                out.append((key, _leaf(v)))
    else:
        out.append((prefix.rstrip("."), _leaf(obj)))
    return out


def _check_table(checks: list[dict]) -> list[str]:
    width = max((len(c["name"]) for c in checks), default=0)
    lines = []
    for c in checks:
        mark = "PASS" if c["passed"] else "FAIL"
        note = c.get("summary", "")
        lines.append(f"{mark}  {c['name']:<{width}}  {note}".rstrip())
    return lines


def human(report: dict) -> str:
    """Aligned text built only from the machine form."""
    body = dict(report)
    lines: list[str] = []
    checks = body.pop("checks", None)
    pairs = _flatten(body)
    width = max((len(k) for k, _ in pairs), default=0)
    lines.extend(f"{k:<{width}}  {v}" for k, v in pairs)
    if checks is not None:
        lines.append("")
        lines.extend(_check_table(checks))
    return "\n".join(lines) + "\n"
