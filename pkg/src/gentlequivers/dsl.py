"""Line-oriented text format for quivers with relations.

::

    quiver NAME
    vertices V1 V2 ...
    arrow ID SRC DST
    rel A B        # (A, B) is a zero relation: walk B, then A

``#`` starts a comment. Parsing keeps going after an error so that every
problem is reported at once, each with its line and column.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .quiver import TOKEN_RE, Arrow, QuiverWithRelations, Relation, presentation

HEADER = (
    "# rel A B declares the zero relation (A, B): the walk B then A,\n"
    "# so source(A) must equal target(B).\n"
)

_WORD = re.compile(r"\S+")


@dataclass(frozen=True)
class Diagnostic:
    line: int
    column: int
    kind: str
    message: str

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.kind}: {self.message}"


class DslError(ValueError):
    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("\n".join(str(d) for d in diagnostics))


@dataclass(frozen=True)
class QuiverDocument:
    name: str
    body: QuiverWithRelations
    spans: dict = field(default_factory=dict, compare=False, repr=False)


def parse_dsl(text: str) -> QuiverDocument:
    diags: list[Diagnostic] = []
    name = None
    vertices: dict[str, tuple[int, int]] = {}
    arrows: dict[str, tuple[Arrow, tuple[int, int], list]] = {}
    rels: list[tuple[str, str, tuple[int, int], tuple[int, int]]] = []
    spans: dict = {}

    def err(pos, kind, msg):
        diags.append(Diagnostic(pos[0], pos[1], kind, msg))

    def token_ok(tok, pos, what) -> bool:
        if TOKEN_RE.match(tok):
            return True
        err(pos, "BadToken", f"invalid {what} name {tok!r}")
        return False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        words = [(m.group(), (lineno, m.start() + 1)) for m in _WORD.finditer(line)]
        if not words:
            continue
        (kw, kwpos), args = words[0], words[1:]
        if kw == "quiver":
            if len(args) != 1:
                err(kwpos, "Syntax", "expected: quiver NAME")
            elif name is not None:
                err(kwpos, "Syntax", "second quiver header")
            elif token_ok(args[0][0], args[0][1], "quiver"):
                name = args[0][0]
        elif kw == "vertices":
            if not args:
                err(kwpos, "Syntax", "expected at least one vertex")
            for tok, pos in args:
                if not token_ok(tok, pos, "vertex"):
                    continue
                if tok in vertices:
                    err(pos, "DuplicateVertex", f"vertex {tok!r} already declared")
                else:
                    vertices[tok] = pos
                    spans[("vertex", tok)] = pos
        elif kw == "arrow":
            if len(args) != 3:
                err(kwpos, "Syntax", "expected: arrow ID SRC DST")
                continue
            (aid, apos), (src, spos), (dst, dpos) = args
            if not all(token_ok(t, p, "arrow" if i == 0 else "vertex")
                       for i, (t, p) in enumerate(args)):
                continue
            if aid in arrows:
                err(apos, "DuplicateArrow", f"arrow {aid!r} already declared")
                continue
            arrows[aid] = (Arrow(aid, src, dst), apos, [spos, dpos])
            spans[("arrow", aid)] = apos
        elif kw == "rel":
            if len(args) != 2:
                err(kwpos, "Syntax", "expected: rel A B")
                continue
            (a, apos), (b, bpos) = args
            rels.append((a, b, apos, bpos))
            spans[("rel", a, b)] = apos
        else:
            err(kwpos, "Syntax", f"unknown keyword {kw!r}")

    if name is None:
        err((1, 1), "Syntax", "missing 'quiver NAME' header")
    for arrow, _, (spos, dpos) in arrows.values():
        for end, pos in ((arrow.source, spos), (arrow.target, dpos)):
            if end not in vertices:
                err(pos, "UndeclaredVertex", f"vertex {end!r} is not declared")
    seen_rel = set()
    for a, b, apos, bpos in rels:
        bad = False
        for tok, pos in ((a, apos), (b, bpos)):
            if tok not in arrows:
                err(pos, "DanglingRelation", f"relation mentions unknown arrow {tok!r}")
                bad = True
        if bad:
            continue
        if arrows[a][0].source != arrows[b][0].target:
            err(apos, "BadRelationComposability",
                f"source({a}) = {arrows[a][0].source} but target({b}) = {arrows[b][0].target}")
        elif (a, b) in seen_rel:
            err(apos, "DuplicateRelation", f"relation ({a},{b}) repeated")
        seen_rel.add((a, b))
    if not vertices and name is not None:
        err((1, 1), "Syntax", "no vertices declared")

    if diags:
        diags.sort(key=lambda d: (d.line, d.column))
        raise DslError(diags)
    body = QuiverWithRelations(
        tuple(vertices), [a for a, _, _ in arrows.values()],
        [Relation(a, b) for a, b, _, _ in rels],
    )
    return QuiverDocument(name, body, spans)


def emit_dsl(doc_or_quiver, name: str | None = None) -> str:
    """Canonical text: vertices, arrows and relations each in sorted order."""
    if isinstance(doc_or_quiver, QuiverDocument):
        name = name or doc_or_quiver.name
        q = doc_or_quiver.body
    else:
        q = presentation(doc_or_quiver)
    lines = [HEADER.rstrip("\n"), f"quiver {name or 'Q'}", "vertices " + " ".join(q.vertices)]
    lines += [f"arrow {a.id} {a.source} {a.target}" for a in q.arrows]
    lines += [f"rel {r.first} {r.second}" for r in sorted(q.relations)]
    return "\n".join(lines) + "\n"


def load(path) -> QuiverDocument:
    with open(path, encoding="utf-8") as fh:
        return parse_dsl(fh.read())
