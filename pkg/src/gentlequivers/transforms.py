"""Quiver rewrites: reflections, coreflections, completion of isolated
relations, and the models obtained by deleting one arrow per triangle."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .errors import InvariantBreach, QuiverError
from .quiver import (
    Arrow,
    GentleQuiver,
    NotGentleError,
    QuiverWithRelations,
    Relation,
    branch_arrows,
    is_connected,
    opposite,
    remove_arrows,
    validate_gentle,
)
from .threads import Thread, ThreadKind, build_thread_system, make_thread


class ReflectionError(QuiverError):
    """The (co)reflection is not defined at the requested vertex."""


class CompletionNotGentle(QuiverError):
    """Completing the requested relations would break finite-dimensionality."""

    def __init__(self, orbit: tuple[Thread, ...]):
        self.orbit = orbit
        super().__init__(
            "completion is not gentle: the orbit "
            + " ".join(str(w) for w in orbit)
            + " lies entirely inside the completed set"
        )


class StepKind(enum.Enum):
    REFLECT = "Reflect"
    COREFLECT = "Coreflect"
    COMPLETE = "Complete"
    REMOVE_ARROWS = "RemoveArrows"


@dataclass(frozen=True)
class RewriteStep:
    kind: StepKind
    vertex: str | None = None
    relations: tuple[Relation, ...] = ()
    arrows: tuple[str, ...] = ()

    @classmethod
    def reflect(cls, x: str) -> "RewriteStep":
        return cls(StepKind.REFLECT, vertex=x)

    @classmethod
    def coreflect(cls, x: str) -> "RewriteStep":
        return cls(StepKind.COREFLECT, vertex=x)

    def locus(self):
        if self.kind in (StepKind.REFLECT, StepKind.COREFLECT):
            return self.vertex
        if self.kind is StepKind.COMPLETE:
            return [list(r) for r in self.relations]
        return list(self.arrows)

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "locus": self.locus()}

    @classmethod
    def from_json(cls, data: dict) -> "RewriteStep":
        kind = StepKind(data["kind"])
        locus = data["locus"]
        if kind in (StepKind.REFLECT, StepKind.COREFLECT):
            return cls(kind, vertex=locus)
        if kind is StepKind.COMPLETE:
            return cls(kind, relations=tuple(Relation(*r) for r in locus))
        return cls(kind, arrows=tuple(locus))

    def __str__(self) -> str:
        return f"{self.kind.value}({self.locus()})"


@dataclass(frozen=True)
class RewriteTrace:
    initial: GentleQuiver
    steps: tuple[RewriteStep, ...]
    final: GentleQuiver


# -- reflections ---------------------------------------------------------------


def reflection_obstructions(g: GentleQuiver, x: str, strict: bool = False) -> list[str]:
    """Reasons why the reflection at ``x`` is undefined; empty when it is.

    ``strict`` additionally rejects quivers with a loop anywhere.
    """
    if not g.has_vertex(x):
        raise QuiverError(f"unknown vertex {x!r}")
    reasons = []
    loops = g.loops()
    if strict and loops:
        reasons.append(f"quiver has loops {loops}")
    for a in loops:
        if g.source(a) == x:
            reasons.append(f"loop {a} at {x}")
    ins = g.in_arrows(x)
    for a in g.out_arrows(x):
        if g.source(a) == g.target(a):
            continue
        if not any((a, b) not in g.relations for b in ins):
            reasons.append(f"arrow {a} leaves {x} without a relation-free arrow into {x}")
    return reasons


def can_reflect(g: GentleQuiver, x: str, strict: bool = False) -> bool:
    return not reflection_obstructions(g, x, strict)


def coreflection_obstructions(g: GentleQuiver, x: str, strict: bool = False) -> list[str]:
    return reflection_obstructions(_opposite_gentle(g), x, strict)


def can_coreflect(g: GentleQuiver, x: str, strict: bool = False) -> bool:
    return not coreflection_obstructions(g, x, strict)


def _opposite_gentle(g: GentleQuiver) -> GentleQuiver:
    return validate_gentle(opposite(g.presentation))


def reflect_presentation(g: GentleQuiver, x: str) -> QuiverWithRelations:
    """Apply the endpoint and relation rewrite at ``x`` without revalidating."""
    R = g.relations
    ins = g.in_arrows(x)
    outs = g.out_arrows(x)
    partner = {a: next(b for b in ins if (a, b) not in R) for a in outs}

    arrows = []
    for arr in g.arrows:
        a = arr.id
        if arr.target == x:
            s, t = x, arr.source
        else:
            s = g.source(partner[a]) if arr.source == x else arr.source
            if any(g.source(b) == arr.target and (b, a) in R for b in ins):
                t = x
            else:
                t = arr.target
        arrows.append(Arrow(a, s, t))

    new_rel = {
        r for r in R if g.target(r.first) != x and g.source(r.first) != x
    }
    new_rel |= {Relation(a, partner[a]) for a in outs}
    for a in ins:
        for c in ins:
            if c == a:
                continue
            for r in R:
                if r.first == c:
                    new_rel.add(Relation(a, r.second))
    return QuiverWithRelations(g.vertices, arrows, new_rel)


def reflect(g: GentleQuiver, x: str, strict: bool = False) -> GentleQuiver:
    reasons = reflection_obstructions(g, x, strict)
    if reasons:
        raise ReflectionError(f"cannot reflect at {x}: " + "; ".join(reasons))
    q = reflect_presentation(g, x)
    try:
        return validate_gentle(q)
    except NotGentleError as exc:
        raise InvariantBreach(f"reflection at {x} produced a non-gentle quiver: {exc}") from exc


def coreflect(g: GentleQuiver, x: str, strict: bool = False) -> GentleQuiver:
    """The dual rewrite: reflect in the opposite quiver and turn back."""
    reasons = coreflection_obstructions(g, x, strict)
    if reasons:
        raise ReflectionError(f"cannot coreflect at {x}: " + "; ".join(reasons))
    return validate_gentle(opposite(reflect(_opposite_gentle(g), x, strict).presentation))


def apply_step(g: GentleQuiver, step: RewriteStep) -> GentleQuiver:
    if step.kind is StepKind.REFLECT:
        return reflect(g, step.vertex)
    if step.kind is StepKind.COREFLECT:
        return coreflect(g, step.vertex)
    if step.kind is StepKind.COMPLETE:
        return complete_relations(g, step.relations)
    return validate_gentle(remove_arrows(g, step.arrows))


# -- completion ------------------------------------------------------------------


def relation_thread(g: GentleQuiver, r: Relation) -> Thread:
    return make_thread(g, ThreadKind.ANTIPATH, (r.first, r.second))


def isolated_relations(g: GentleQuiver) -> set[Relation]:
    """Relations that are maximal antipaths on their own."""
    N = build_thread_system(g).antipaths
    return {r for r in g.relations if relation_thread(g, r) in N}


def fresh_arrow_name(r: Relation, taken: set[str]) -> str:
    base = f"g_{r.first}_{r.second}"
    name, k = base, 2
    while name in taken:
        name = f"{base}_{k}"
        k += 1
    return name


def complete_relations(
    g: GentleQuiver, relations: Iterable[Relation], names: dict | None = None
) -> GentleQuiver:
    """Close each isolated relation (a, b) into a triangle with a new arrow
    from t(a) to s(b).

    Raises :class:`CompletionNotGentle` when some orbit of maximal antipaths
    consists only of completed relations.
    """
    R0 = sorted({Relation(*r) for r in relations})
    if not R0:
        return g
    system = build_thread_system(g)
    threads = {}
    for r in R0:
        if r not in g.relations:
            raise QuiverError(f"{r} is not a relation")
        w = relation_thread(g, r)
        if w not in system.antipaths:
            raise QuiverError(f"{r} is not an isolated relation")
        threads[w] = r
    for orbit in system.antipath_orbits:
        if all(w in threads for w in orbit):
            raise CompletionNotGentle(orbit)

    taken = set(g.arrow_ids)
    arrows = list(g.arrows)
    rels = set(g.relations)
    for r in R0:
        name = (names or {}).get(r) or fresh_arrow_name(r, taken)
        if name in taken:
            raise QuiverError(f"arrow name {name!r} already in use")
        taken.add(name)
        arrows.append(Arrow(name, g.target(r.first), g.source(r.second)))
        rels |= {Relation(name, r.first), Relation(r.second, name)}
    try:
        return validate_gentle(QuiverWithRelations(g.vertices, arrows, rels))
    except NotGentleError as exc:
        raise InvariantBreach(f"completion of gentle-safe set failed: {exc}") from exc


# -- triangles and models --------------------------------------------------------


def triangles(g: GentleQuiver) -> list[tuple[str, str, str]]:
    """Orbits of size 3 of the cycle set, each in cyclic order."""
    return [o for o in build_thread_system(g).cycle_orbits if len(o) == 3]


def is_branch_triangle(g, tri: Iterable[str]) -> bool:
    return all(not is_connected(g, pair) for pair in combinations(tri, 2))


def model_of(g: GentleQuiver) -> tuple[GentleQuiver, tuple[str, ...]]:
    """Remove the smallest arrow of every triangle.

    Every orbit of the cycle set must be a triangle.
    """
    system = build_thread_system(g)
    bad = [o for o in system.cycle_orbits if len(o) != 3]
    if bad:
        raise QuiverError(f"cycle orbits that are not triangles: {bad}")
    removed = tuple(sorted(min(o) for o in system.cycle_orbits))
    return validate_gentle(remove_arrows(g, removed)), removed


def distinguished_arrow(g: GentleQuiver, tri: Iterable[str]) -> str:
    """The arrow c of the triangle for which deleting the other two still
    disconnects the quiver."""
    tri = tuple(tri)
    hits = [c for c in tri if not is_connected(g, [a for a in tri if a != c])]
    if len(hits) != 1:
        raise InvariantBreach(f"triangle {tri} has {len(hits)} distinguished arrows")
    return hits[0]


def is_cycle(q) -> bool:
    return (
        len(q.vertices) == len(q.arrows)
        and is_connected(q)
        and not branch_arrows(q)
    )


def standard_model(g: GentleQuiver) -> GentleQuiver:
    from .classification import decompose_class_A_tilde
    from .threads import aag_invariant

    if decompose_class_A_tilde(aag_invariant(g)) is None:
        raise QuiverError("standard model needs a quiver in class A-tilde")
    if branch_arrows(g):
        raise QuiverError("standard model needs a quiver without branch arrows")
    tris = build_thread_system(g).cycle_orbits
    if any(len(t) != 3 for t in tris):
        raise QuiverError("cycle set contains non-triangles")
    if any(is_branch_triangle(g, t) for t in tris):
        raise QuiverError("standard model needs a quiver without branch triangles")
    removed = [distinguished_arrow(g, t) for t in tris]
    model = validate_gentle(remove_arrows(g, removed))
    if not is_cycle(model):
        raise InvariantBreach("standard model is not a cycle")
    return model
