"""Command line interface.

Exit codes: 0 success or a positive verdict, 1 a negative verdict,
2 usage or input errors, 3 an internal consistency failure.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .classification import Equivalence, classify, derived_equivalent, gorenstein_dimension
from .dsl import DslError, QuiverDocument, emit_dsl, load
from .errors import InvariantBreach, QuiverError
from .generators import GenerationError, generate_random_instance
from .normalization import normalize
from .quiver import NotGentleError, Relation, gentleness_violations, validate_gentle
from .report import build_report, emit_json
from .threads import check_sum_identities
from .transforms import (
    CompletionNotGentle,
    ReflectionError,
    complete_relations,
    coreflect,
    model_of,
    reflect,
    standard_model,
)

OK, NEGATIVE, USAGE, BREACH = 0, 1, 2, 3


def _gentle(path):
    doc = load(path)
    return doc, validate_gentle(doc.body)


def _write(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_quiver(name, g, out):
    _write(emit_dsl(QuiverDocument(name, g.presentation)), out)


def cmd_validate(args) -> int:
    doc = load(args.file)
    problems = gentleness_violations(doc.body)
    if problems:
        for v in problems:
            print(v)
        return NEGATIVE
    print(f"{doc.name}: gentle")
    return OK


def cmd_invariant(args) -> int:
    _, g = _gentle(args.file)
    if args.json:
        rep = build_report(g)
        _write(emit_json({"invariant": rep["invariant"], "sums": rep["sums"]}), None)
    else:
        c = classify(g)
        s = check_sum_identities(g, c.invariant)
        print(c.invariant)
        print(f"sum p = {s.p_sum} (expected {s.expected_p}), sum q = {s.q_sum} (expected {s.expected_q})")
    return OK


def cmd_classify(args) -> int:
    _, g = _gentle(args.file)
    if args.json:
        _write(emit_json(build_report(g)), None)
        return OK
    c = classify(g)
    print(f"invariant      {c.invariant}")
    print(f"tree type      {c.tree_type}")
    print(f"one cycle      {c.one_cycle}")
    if c.type_a_tilde is not None:
        print(f"type A-tilde   {c.type_a_tilde}")
    print(f"class A        {c.class_a}")
    print(f"class A-tilde  {c.class_a_tilde}")
    print(f"cluster tilted {c.cluster_tilted.value if c.cluster_tilted else None}")
    print(f"gorenstein     {c.gorenstein}")
    return OK


def cmd_reflect(args) -> int:
    doc, g = _gentle(args.file)
    op = reflect if args.command == "reflect" else coreflect
    try:
        h = op(g, args.at)
    except ReflectionError as exc:
        print(exc, file=sys.stderr)
        return NEGATIVE
    _emit_quiver(doc.name, h, args.output)
    return OK


def _parse_rels(text: str) -> list[Relation]:
    rels = []
    for item in text.split(","):
        parts = item.strip().split(":")
        if len(parts) != 2 or not all(parts):
            raise QuiverError(f"bad relation {item!r}; expected A:B")
        rels.append(Relation(*parts))
    return rels


def cmd_complete(args) -> int:
    doc, g = _gentle(args.file)
    try:
        h = complete_relations(g, _parse_rels(args.rels))
    except CompletionNotGentle as exc:
        print(exc, file=sys.stderr)
        return NEGATIVE
    _emit_quiver(doc.name, h, args.output)
    return OK


def cmd_model(args) -> int:
    doc, g = _gentle(args.file)
    if args.standard:
        _emit_quiver(doc.name, standard_model(g), args.output)
    else:
        m, removed = model_of(g)
        print("# removed: " + (" ".join(removed) or "nothing"))
        _emit_quiver(doc.name, m, args.output)
    return OK


def cmd_normalize(args) -> int:
    doc, g = _gentle(args.file)
    res = normalize(g)
    if args.json:
        rep = build_report(res.final, res.trace.steps, res.measure_log)
        _write(emit_json(rep), None)
        if args.output:
            _emit_quiver(doc.name, res.final, args.output)
    else:
        for step in res.trace.steps:
            print(f"# {step}")
        _emit_quiver(doc.name, res.final, args.output)
    return OK


def cmd_gorenstein(args) -> int:
    _, g = _gentle(args.file)
    print(gorenstein_dimension(g))
    return OK


def cmd_equiv(args) -> int:
    _, g1 = _gentle(args.file1)
    _, g2 = _gentle(args.file2)
    verdict = derived_equivalent(g1, g2)
    print(verdict.value)
    return OK if verdict is Equivalence.EQUIVALENT_IN_CLASS else NEGATIVE


def cmd_gen(args) -> int:
    doc = generate_random_instance(args.cls, args.vertices, args.fraction, args.seed)
    _write(emit_dsl(doc), args.output)
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gentlequivers", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help, json=False, out=False):
        sp = sub.add_parser(name, help=help)
        sp.set_defaults(func=func)
        if json:
            sp.add_argument("--json", action="store_true", help="print a JSON report")
        if out:
            sp.add_argument("-o", "--output", help="write the quiver here instead of stdout")
        return sp

    add("validate", cmd_validate, "check the gentle conditions").add_argument("file")
    add("invariant", cmd_invariant, "print the derived invariant", json=True).add_argument("file")
    add("classify", cmd_classify, "classify the quiver", json=True).add_argument("file")
    for name in ("reflect", "coreflect"):
        sp = add(name, cmd_reflect, f"{name} at a vertex", out=True)
        sp.add_argument("file")
        sp.add_argument("--at", required=True, metavar="V")
    sp = add("complete", cmd_complete, "close isolated relations into triangles", out=True)
    sp.add_argument("file")
    sp.add_argument("--rels", required=True, metavar="A:B[,A:B...]")
    sp = add("model", cmd_model, "drop one arrow per triangle", out=True)
    sp.add_argument("file")
    sp.add_argument("--standard", action="store_true", help="use the standard model (class A-tilde)")
    add("normalize", cmd_normalize, "rewrite to a cluster tilted quiver", json=True, out=True).add_argument("file")
    add("gorenstein", cmd_gorenstein, "print the Gorenstein dimension").add_argument("file")
    sp = add("equiv", cmd_equiv, "compare two quivers")
    sp.add_argument("file1")
    sp.add_argument("file2")
    sp = add("gen", cmd_gen, "generate a random instance", out=True)
    sp.add_argument("--class", dest="cls", choices=["A", "Atilde"], required=True)
    sp.add_argument("--vertices", type=int, required=True)
    sp.add_argument("--fraction", type=float, default=0.5)
    sp.add_argument("--seed", type=int, default=0)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return args.func(args)
    except DslError as exc:
        print(exc, file=sys.stderr)
        return USAGE
    except NotGentleError as exc:
        print(f"not gentle: {exc}", file=sys.stderr)
        return NEGATIVE
    except InvariantBreach as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return BREACH
    except (QuiverError, GenerationError, OSError) as exc:
        print(exc, file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
