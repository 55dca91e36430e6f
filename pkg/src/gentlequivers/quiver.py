"""Quivers with monomial length-2 relations and gentleness checking.

Paths are written right to left: a relation ``Relation(first=a, second=b)``
requires ``source(a) == target(b)`` and stands for the walk "b, then a".
"""

from __future__ import annotations

import enum
import random
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple

from .errors import QuiverError

TOKEN_RE = re.compile(r"[A-Za-z0-9_]+\Z")


class Arrow(NamedTuple):
    id: str
    source: str
    target: str


class Relation(NamedTuple):
    first: str
    second: str

    def __str__(self) -> str:
        return f"({self.first},{self.second})"


def _check_token(kind: str, name: str) -> None:
    if not isinstance(name, str) or not TOKEN_RE.match(name):
        raise QuiverError(f"invalid {kind} name {name!r}")


@dataclass(frozen=True)
class QuiverWithRelations:
    """A finite quiver together with a set of length-2 zero relations.

    Vertices and arrows are stored sorted so that equal presentations compare
    equal. Relations are not checked here (see :func:`gentleness_violations`),
    which lets malformed relation sets reach the validator intact.
    """

    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]
    relations: frozenset[Relation] = field(default_factory=frozenset)

    def __post_init__(self):
        verts = list(self.vertices)
        if not verts:
            raise QuiverError("a quiver needs at least one vertex")
        for v in verts:
            _check_token("vertex", v)
        if len(set(verts)) != len(verts):
            raise QuiverError("duplicate vertex")
        arrows = [Arrow(*a) for a in self.arrows]
        seen = set()
        vset = set(verts)
        for a in arrows:
            _check_token("arrow", a.id)
            if a.id in seen:
                raise QuiverError(f"duplicate arrow id {a.id!r}")
            seen.add(a.id)
            for end in (a.source, a.target):
                if end not in vset:
                    raise QuiverError(f"arrow {a.id!r} uses undeclared vertex {end!r}")
        object.__setattr__(self, "vertices", tuple(sorted(verts)))
        object.__setattr__(self, "arrows", tuple(sorted(arrows)))
        object.__setattr__(
            self, "relations", frozenset(Relation(*r) for r in self.relations)
        )

    # -- lookups -------------------------------------------------------------

    @cached_property
    def arrow_map(self) -> dict[str, Arrow]:
        return {a.id: a for a in self.arrows}

    @cached_property
    def arrow_ids(self) -> tuple[str, ...]:
        return tuple(a.id for a in self.arrows)

    @cached_property
    def _out(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {v: [] for v in self.vertices}
        for a in self.arrows:
            out[a.source].append(a.id)
        return {v: tuple(ids) for v, ids in out.items()}

    @cached_property
    def _in(self) -> dict[str, tuple[str, ...]]:
        inc: dict[str, list[str]] = {v: [] for v in self.vertices}
        for a in self.arrows:
            inc[a.target].append(a.id)
        return {v: tuple(ids) for v, ids in inc.items()}

    def arrow(self, a: str) -> Arrow:
        try:
            return self.arrow_map[a]
        except KeyError:
            raise QuiverError(f"unknown arrow {a!r}") from None

    def source(self, a: str) -> str:
        return self.arrow(a).source

    def target(self, a: str) -> str:
        return self.arrow(a).target

    def out_arrows(self, v: str) -> tuple[str, ...]:
        return self._out[v]

    def in_arrows(self, v: str) -> tuple[str, ...]:
        return self._in[v]

    def has_vertex(self, v: str) -> bool:
        return v in self._out

    def has_relation(self, first: str, second: str) -> bool:
        return (first, second) in self.relations

    def loops(self) -> list[str]:
        return [a.id for a in self.arrows if a.source == a.target]

    def __str__(self) -> str:
        arrows = ", ".join(f"{a.id}:{a.source}->{a.target}" for a in self.arrows)
        rels = ", ".join(str(r) for r in sorted(self.relations))
        return f"Quiver[{arrows}; R={{{rels}}}]"


# -- structural helpers ---------------------------------------------------------


def components(q, without: Iterable[str] = ()) -> list[set[str]]:
    """Connected components of the underlying undirected graph of ``q``
    with the arrows in ``without`` removed."""
    skip = set(without)
    nbrs: dict[str, list[str]] = {v: [] for v in q.vertices}
    for a in q.arrows:
        if a.id in skip:
            continue
        nbrs[a.source].append(a.target)
        nbrs[a.target].append(a.source)
    seen: set[str] = set()
    comps = []
    for start in q.vertices:
        if start in seen:
            continue
        comp = {start}
        todo = deque([start])
        while todo:
            v = todo.popleft()
            for w in nbrs[v]:
                if w not in comp:
                    comp.add(w)
                    todo.append(w)
        seen |= comp
        comps.append(comp)
    return comps


def is_connected(q, without: Iterable[str] = ()) -> bool:
    return len(components(q, without)) == 1


def component_of(q, vertex: str, without: Iterable[str] = ()) -> set[str]:
    for comp in components(q, without):
        if vertex in comp:
            return comp
    raise QuiverError(f"unknown vertex {vertex!r}")


class ArrowKind(enum.Enum):
    BRANCH = "Branch"
    CYCLE = "Cycle"


def arrow_kind(q, a: str) -> ArrowKind:
    """Branch if deleting ``a`` disconnects the underlying graph."""
    q.arrow(a)
    return ArrowKind.CYCLE if is_connected(q, [a]) else ArrowKind.BRANCH


def branch_arrows(q) -> set[str]:
    return {a for a in q.arrow_ids if not is_connected(q, [a])}


def remove_arrows(q, ids: Iterable[str]) -> QuiverWithRelations:
    """Delete arrows and every relation that mentions one of them.

    The vertex set is kept as is, so the result may be disconnected.
    """
    ids = set(ids)
    for a in ids:
        q.arrow(a)
    return QuiverWithRelations(
        q.vertices,
        [a for a in q.arrows if a.id not in ids],
        [r for r in q.relations if r.first not in ids and r.second not in ids],
    )


def opposite(q) -> QuiverWithRelations:
    """Reverse every arrow; the relation (a, b) becomes (b, a)."""
    return QuiverWithRelations(
        q.vertices,
        [Arrow(a.id, a.target, a.source) for a in q.arrows],
        [Relation(r.second, r.first) for r in q.relations],
    )


def rename_arrows(q, mapping: Mapping[str, str]) -> QuiverWithRelations:
    def ren(a):
        return mapping.get(a, a)

    return QuiverWithRelations(
        q.vertices,
        [Arrow(ren(a.id), a.source, a.target) for a in q.arrows],
        [Relation(ren(r.first), ren(r.second)) for r in q.relations],
    )


def presentation(q) -> QuiverWithRelations:
    return q.presentation if isinstance(q, GentleQuiver) else q


# -- gentleness ----------------------------------------------------------------


class ViolationKind(enum.Enum):
    DISCONNECTED = "Disconnected"
    OUT_DEGREE_EXCEEDED = "OutDegreeExceeded"
    IN_DEGREE_EXCEEDED = "InDegreeExceeded"
    NON_RELATION_SUCCESSOR_NOT_UNIQUE = "NonRelationSuccessorNotUnique"
    RELATION_SUCCESSOR_NOT_UNIQUE = "RelationSuccessorNotUnique"
    NON_RELATION_PREDECESSOR_NOT_UNIQUE = "NonRelationPredecessorNotUnique"
    RELATION_PREDECESSOR_NOT_UNIQUE = "RelationPredecessorNotUnique"
    INFINITE_DIMENSIONAL = "InfiniteDimensional"
    DANGLING_RELATION = "DanglingRelation"
    BAD_RELATION_COMPOSABILITY = "BadRelationComposability"


@dataclass(frozen=True)
class GentlenessViolation:
    kind: ViolationKind
    witness: tuple[str, ...]

    def __str__(self) -> str:
        return f"{self.kind.value}: {' '.join(self.witness)}"


class NotGentleError(QuiverError):
    def __init__(self, violations: list[GentlenessViolation]):
        self.violations = violations
        super().__init__("; ".join(str(v) for v in violations))


def _composition_cycle(q) -> list[str] | None:
    """Return arrows of a directed cycle in the graph with an edge b -> a
    whenever a can follow b without hitting a relation, or None."""
    succ = {
        b: [
            a
            for a in q.out_arrows(q.target(b))
            if (a, b) not in q.relations
        ]
        for b in q.arrow_ids
    }
    WHITE, GREY, BLACK = 0, 1, 2
    color = dict.fromkeys(q.arrow_ids, WHITE)
    for root in q.arrow_ids:
        if color[root] != WHITE:
            continue
        stack = [(root, iter(succ[root]))]
        path = [root]
        color[root] = GREY
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                color[node] = BLACK
                stack.pop()
                path.pop()
            elif color[nxt] == GREY:
                return path[path.index(nxt):]
            elif color[nxt] == WHITE:
                color[nxt] = GREY
                stack.append((nxt, iter(succ[nxt])))
                path.append(nxt)
    return None


def gentleness_violations(q: QuiverWithRelations) -> list[GentlenessViolation]:
    """Every violated gentleness condition, each with its witnesses.

    Relation problems (unknown arrows, non-composable pairs) are reported
    alone since the remaining checks presuppose well-formed relations.
    """
    V = ViolationKind
    out: list[GentlenessViolation] = []
    for r in sorted(q.relations):
        if r.first not in q.arrow_map or r.second not in q.arrow_map:
            out.append(GentlenessViolation(V.DANGLING_RELATION, tuple(r)))
        elif q.source(r.first) != q.target(r.second):
            out.append(GentlenessViolation(V.BAD_RELATION_COMPOSABILITY, tuple(r)))
    if out:
        return out

    comps = components(q)
    if len(comps) > 1:
        stray = sorted(set(q.vertices) - comps[0])
        out.append(GentlenessViolation(V.DISCONNECTED, tuple(stray)))

    for v in q.vertices:
        if len(q.out_arrows(v)) > 2:
            out.append(GentlenessViolation(V.OUT_DEGREE_EXCEEDED, (v, *q.out_arrows(v))))
        if len(q.in_arrows(v)) > 2:
            out.append(GentlenessViolation(V.IN_DEGREE_EXCEEDED, (v, *q.in_arrows(v))))

    R = q.relations
    for a in q.arrow_ids:
        nexts = q.out_arrows(q.target(a))
        prevs = q.in_arrows(q.source(a))
        free_next = [b for b in nexts if (b, a) not in R]
        rel_next = [b for b in nexts if (b, a) in R]
        free_prev = [c for c in prevs if (a, c) not in R]
        rel_prev = [c for c in prevs if (a, c) in R]
        if len(free_next) > 1:
            out.append(GentlenessViolation(V.NON_RELATION_SUCCESSOR_NOT_UNIQUE, (a, *free_next)))
        if len(free_prev) > 1:
            out.append(GentlenessViolation(V.NON_RELATION_PREDECESSOR_NOT_UNIQUE, (a, *free_prev)))
        if len(rel_next) > 1:
            out.append(GentlenessViolation(V.RELATION_SUCCESSOR_NOT_UNIQUE, (a, *rel_next)))
        if len(rel_prev) > 1:
            out.append(GentlenessViolation(V.RELATION_PREDECESSOR_NOT_UNIQUE, (a, *rel_prev)))

    cycle = _composition_cycle(q)
    if cycle is not None:
        out.append(GentlenessViolation(V.INFINITE_DIMENSIONAL, tuple(cycle)))
    return out


# -- signs -----------------------------------------------------------------------


class SignConflictError(QuiverError):
    def __init__(self, witness: tuple[str, ...]):
        self.witness = witness
        super().__init__(f"no consistent sign assignment; conflict at arrows {witness}")


class _ParityUnionFind:
    """Union-find where each element carries its parity relative to the root."""

    def __init__(self, elements):
        self.parent = {e: e for e in elements}
        self.parity = dict.fromkeys(self.parent, 0)

    def find(self, e):
        path = []
        while self.parent[e] != e:
            path.append(e)
            e = self.parent[e]
        root = e
        # compress, accumulating parity from the far end
        acc = 0
        for node in reversed(path):
            acc ^= self.parity[node]
            self.parity[node] = acc
            self.parent[node] = root
        return root

    def union(self, a, b, differ: int) -> bool:
        """Record value(a) != value(b) if differ else value(a) == value(b).
        Returns False on contradiction."""
        ra, rb = self.find(a), self.find(b)
        pa, pb = self.parity[a], self.parity[b]
        if ra == rb:
            return (pa ^ pb) == differ
        self.parent[rb] = ra
        self.parity[rb] = pa ^ pb ^ differ
        return True


SIGMA, TAU = 0, 1


@dataclass(frozen=True)
class SignAssignment:
    sigma: dict[str, int]
    tau: dict[str, int]


def compute_sign_assignment(q, rng: random.Random | None = None) -> SignAssignment:
    """Solve the parity constraints on the sign functions sigma and tau.

    Each connected constraint component is seeded by giving its smallest
    variable (ordered by arrow id, sigma before tau) the value +1. With
    ``rng`` the seed values are drawn at random instead, which yields some
    other valid assignment.
    """
    variables = [(a, k) for a in q.arrow_ids for k in (SIGMA, TAU)]
    uf = _ParityUnionFind(variables)

    def link(x, y, differ, witness):
        if not uf.union(x, y, differ):
            raise SignConflictError(witness)

    for v in q.vertices:
        outs, ins = q.out_arrows(v), q.in_arrows(v)
        for i, a in enumerate(outs):
            for b in outs[i + 1:]:
                link((a, SIGMA), (b, SIGMA), 1, (a, b))
        for i, a in enumerate(ins):
            for b in ins[i + 1:]:
                link((a, TAU), (b, TAU), 1, (a, b))
        for a in outs:
            for b in ins:
                # (a, b) in R  <=>  sigma a == tau b
                link((a, SIGMA), (b, TAU), 0 if (a, b) in q.relations else 1, (a, b))

    seeds: dict = {}
    for var in variables:
        root = uf.find(var)
        if root not in seeds:
            # variables are visited in sorted order, so var is the component minimum
            val = 1 if rng is None else rng.choice((1, -1))
            seeds[root] = val * (-1 if uf.parity[var] else 1)
    sigma, tau = {}, {}
    for a, k in variables:
        root = uf.find((a, k))
        val = seeds[root] * (-1 if uf.parity[(a, k)] else 1)
        (sigma if k == SIGMA else tau)[a] = val
    return SignAssignment(sigma, tau)


def check_sign_assignment(q, signs: SignAssignment) -> bool:
    for v in q.vertices:
        outs, ins = q.out_arrows(v), q.in_arrows(v)
        if len(outs) == 2 and signs.sigma[outs[0]] == signs.sigma[outs[1]]:
            return False
        if len(ins) == 2 and signs.tau[ins[0]] == signs.tau[ins[1]]:
            return False
        for a in outs:
            for b in ins:
                if ((a, b) in q.relations) != (signs.sigma[a] == signs.tau[b]):
                    return False
    return True


@dataclass(frozen=True, eq=False)
class GentleQuiver:
    """A validated gentle presentation together with its sign functions.

    Build instances with :func:`validate_gentle`. The read-only quiver API of
    :class:`QuiverWithRelations` is forwarded, so most functions accept either.
    """

    presentation: QuiverWithRelations
    signs: SignAssignment

    def __eq__(self, other):
        if isinstance(other, GentleQuiver):
            return self.presentation == other.presentation
        return NotImplemented

    def __hash__(self):
        return hash(self.presentation)

    def __getattr__(self, name):
        # forward vertices/arrows/relations/source/target/... to the presentation
        if name.startswith("__") or name in ("presentation", "signs"):
            raise AttributeError(name)
        return getattr(self.presentation, name)

    def sigma(self, a: str) -> int:
        return self.signs.sigma[a]

    def tau(self, a: str) -> int:
        return self.signs.tau[a]

    def __str__(self) -> str:
        return str(self.presentation)


def validate_gentle(q, rng: random.Random | None = None) -> GentleQuiver:
    """Check gentleness and attach a sign assignment.

    Raises :class:`NotGentleError` listing every violation.
    """
    q = presentation(q)
    violations = gentleness_violations(q)
    if violations:
        raise NotGentleError(violations)
    return GentleQuiver(q, compute_sign_assignment(q, rng))


def is_gentle(q) -> bool:
    return not gentleness_violations(presentation(q))
