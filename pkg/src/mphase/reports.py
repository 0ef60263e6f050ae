"""Machine-readable and human-readable result reports.

JSON reports use a stable key order and exact rational strings only,
so parsing and re-serializing a report is byte-identical.
"""

from __future__ import annotations

import json
from typing import Optional, Sequence

from .core import AffineFunc, rat_str
from .bounds import BoundReport
from .loops import (
    INTEGER_DOMAIN,
    RankTuple,
    SLCLoop,
    TransitionPoint,
    format_affine,
)
from .polyhedra import FarkasCert

DOMAIN_SHORT = {INTEGER_DOMAIN: "int", "rational": "rat"}


def tuple_entry(f: AffineFunc, names: Sequence[str]) -> dict:
    return {
        "coeffs": {name: rat_str(c) for name, c in zip(names, f.coeffs)},
        "const": rat_str(f.const),
    }


def witness_entry(point: TransitionPoint, loop: SLCLoop) -> dict:
    return {name: rat_str(v)
            for name, v in zip(loop.all_names(), point.values)}


def cert_entries(certs: Sequence[FarkasCert]) -> list:
    return [c.as_strings() for c in certs]


def bound_entry(report: BoundReport) -> dict:
    out = {
        "mu": [w.as_strings() for w in report.mus],
        "c": [rat_str(v) for v in report.c],
        "d": [rat_str(v) for v in report.d],
        "coefficient": rat_str(report.coefficient),
        "m_definition": report.m_definition,
    }
    if report.m_value is not None:
        out["m"] = rat_str(report.m_value)
        out["numeric"] = rat_str(report.numeric_bound)
        out["iterations"] = report.iterations
    return out


def build_report(status: str, loop: SLCLoop, *,
                 depth: Optional[int] = None,
                 domain: Optional[str] = None,
                 hull_applied: bool = False,
                 tup: Optional[RankTuple] = None,
                 certs: Sequence[FarkasCert] = (),
                 bound: Optional[BoundReport] = None,
                 witness: Optional[TransitionPoint] = None,
                 extra: Optional[dict] = None) -> dict:
    """Assemble the report dictionary in its canonical key order."""
    report: dict = {"status": status}
    if depth is not None:
        report["depth"] = depth
    report["domain"] = DOMAIN_SHORT.get(domain or loop.domain, "rat")
    report["hull_applied"] = hull_applied
    if tup is not None:
        report["tuple"] = [tuple_entry(f, loop.var_names)
                           for f in tup.components]
    if certs:
        report["certificates"] = cert_entries(certs)
    if bound is not None:
        report["bound"] = bound_entry(bound)
    if witness is not None:
        report["witness"] = witness_entry(witness, loop)
    if extra:
        report.update(extra)
    return report


def emit_report(report: dict, fmt: str, loop: Optional[SLCLoop] = None) -> str:
    if fmt == "json":
        return json.dumps(report)
    lines = []
    for key, value in report.items():
        if key == "tuple" and loop is not None:
            lines.append("tuple:")
            for i, entry in enumerate(value, start=1):
                f = AffineFunc.make(
                    [entry["coeffs"][name] for name in loop.var_names],
                    entry["const"])
                lines.append(f"  f{i} = {format_affine(f, loop.var_names)}")
        elif key == "witness":
            parts = ", ".join(f"{k}={v}" for k, v in value.items())
            lines.append(f"witness: {parts}")
        elif key == "bound":
            lines.append("bound:")
            for k, v in value.items():
                lines.append(f"  {k}: {v}")
        elif key == "certificates":
            lines.append(f"certificates: {len(value)} verified")
        else:
            lines.append(f"{key}: {value}")
    return "\n".join(lines)
