"""JSON reports."""

from __future__ import annotations

import json

from .classification import classify
from .quiver import GentleQuiver, NotGentleError, presentation, validate_gentle
from .threads import check_sum_identities


def build_report(q, trace=None, measures=None) -> dict:
    """Report for a quiver; non-gentle input gives ``gentle: false`` plus
    the violations."""
    if not isinstance(q, GentleQuiver):
        try:
            q = validate_gentle(presentation(q))
        except NotGentleError as exc:
            return {
                "gentle": False,
                "violations": [
                    {"kind": v.kind.value, "witness": list(v.witness)} for v in exc.violations
                ],
            }
    c = classify(q)
    sums = check_sum_identities(q, c.invariant)
    out = {
        "gentle": True,
        "invariant": c.invariant.to_records(),
        "sums": {"p": sums.p_sum, "q": sums.q_sum, "ok": sums.ok},
        "classification": c.to_json(),
    }
    if trace is not None:
        out["trace"] = [s.to_json() for s in trace]
    if measures is not None:
        out["measures"] = [m.to_json() for m in measures]
    return out


def emit_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=False) + "\n"
