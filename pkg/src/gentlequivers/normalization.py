"""Rewrite class A and class A-tilde quivers into cluster tilted shape.

Each pipeline phase repeatedly picks a move from a local case analysis,
applies it, and checks that a lexicographic measure went down. The move
that the case analysis names comes first; if it is not defined or does
not lower the measure, the same vertices are tried with the dual
rewrite, and after that a small search over sequences of one or two
legal rewrites is made before giving up with :class:`NormalizationError`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Callable

from .classification import (
    branch_relations,
    classify,
    decompose_class_A,
    decompose_class_A_tilde,
)
from .errors import InvariantBreach, QuiverError
from .quiver import (
    GentleQuiver,
    Relation,
    branch_arrows,
    component_of,
    components,
    opposite,
    validate_gentle,
)
from .threads import aag_invariant, build_thread_system
from .transforms import (
    ReflectionError,
    RewriteStep,
    RewriteTrace,
    StepKind,
    apply_step,
    can_coreflect,
    can_reflect,
    is_branch_triangle,
    standard_model,
)

INF = math.inf


class NormalizationError(InvariantBreach):
    """A pipeline got stuck or ran past its iteration cap."""


@dataclass(frozen=True)
class MeasureSnapshot:
    phase: str
    r: int | None = None
    n: float | None = None
    m: float | None = None
    k: float | None = None
    s: int | None = None
    inversions: int | None = None

    _KEYS = {
        "branch_relations": ("r", "n"),
        "branch_arrows": ("r", "m"),
        "free_relations": ("s", "k", "inversions"),
    }

    def key(self) -> tuple:
        return tuple(getattr(self, f) for f in self._KEYS[self.phase])

    def to_json(self) -> dict:
        out = {"phase": self.phase}
        for f in ("r", "n", "m", "k", "s", "inversions"):
            v = getattr(self, f)
            if v is not None:
                out[f] = "inf" if v == INF else int(v)
        return out


@dataclass(frozen=True)
class FallbackUse:
    phase: str
    step_index: int
    wanted: tuple[RewriteStep, ...]
    used: tuple[RewriteStep, ...]


@dataclass(frozen=True)
class NormalizationResult:
    final: GentleQuiver
    trace: RewriteTrace
    measure_log: tuple[MeasureSnapshot, ...]
    fallbacks: tuple[FallbackUse, ...] = ()

    def to_json(self) -> dict:
        return {
            "trace": [s.to_json() for s in self.trace.steps],
            "measures": [m.to_json() for m in self.measure_log],
            "fallbacks": len(self.fallbacks),
        }


# -- shared machinery -------------------------------------------------------------


def _tie_key(g, arrows) -> str:
    return min(arrows)


def _reject_loops(g):
    if g.loops():
        raise QuiverError(f"normalization does not accept loops: {g.loops()}")


def _apply_all(g, steps, f0):
    for step in steps:
        g = apply_step(g, step)
        if aag_invariant(g) != f0:
            raise InvariantBreach(f"{step} changed the invariant")
    return g


def _run_phase(
    g: GentleQuiver,
    phase: str,
    measure: Callable[[GentleQuiver], MeasureSnapshot],
    done: Callable[[MeasureSnapshot], bool],
    plan: Callable[[GentleQuiver], list[list[RewriteStep]]],
    keep: Callable[[GentleQuiver], bool],
    cap: int,
    f0,
    steps: list,
    log: list,
    fallbacks: list,
) -> GentleQuiver:
    current = measure(g)
    log.append(current)
    rounds = 0
    while not done(current):
        rounds += 1
        if rounds > cap:
            raise NormalizationError(f"{phase}: iteration cap {cap} exceeded")
        options = plan(g)
        for i, seq, h in _candidates(g, options, f0):
            if not keep(h):
                continue
            snap = measure(h)
            if snap.key() < current.key():
                if i:
                    fallbacks.append(FallbackUse(phase, len(steps), tuple(options[0]), tuple(seq)))
                steps.extend(seq)
                g, current = h, snap
                log.append(snap)
                break
        else:
            raise NormalizationError(
                f"{phase}: no move lowers {current.key()} (tried "
                + ", ".join("[" + " ".join(map(str, s)) + "]" for s in options)
                + f" and all legal sequences of length <= {SEARCH_DEPTH}) on {g}"
            )
    return g


SEARCH_DEPTH = 2


def _legal_steps(g) -> list[RewriteStep]:
    out = []
    for x in g.vertices:
        if can_reflect(g, x):
            out.append(RewriteStep.reflect(x))
        if can_coreflect(g, x):
            out.append(RewriteStep.coreflect(x))
    return out


def _candidates(g, options, f0):
    """Yield (index, sequence, result) for the planned options, then for
    every legal sequence up to SEARCH_DEPTH rewrites long."""
    for i, seq in enumerate(options):
        try:
            yield i, seq, _apply_all(g, seq, f0)
        except ReflectionError:
            continue
    frontier = [((), g)]
    for _ in range(SEARCH_DEPTH):
        grown = []
        for seq, h in frontier:
            for step in _legal_steps(h):
                nxt = _apply_all(h, [step], f0)
                grown.append(((*seq, step), nxt))
                yield len(options), list(grown[-1][0]), nxt
        frontier = grown


def _dual(seq: list[RewriteStep]) -> list[RewriteStep]:
    flip = {StepKind.REFLECT: StepKind.COREFLECT, StepKind.COREFLECT: StepKind.REFLECT}
    return [replace(s, kind=flip[s.kind]) for s in seq]


def _with_duals(primary: list[RewriteStep]) -> list[list[RewriteStep]]:
    """The move itself, then its dual, then mixed single-step variants."""
    out = [primary, _dual(primary)]
    if len(primary) > 1:
        for k in range(len(primary)):
            seq = list(primary)
            seq[k] = _dual([seq[k]])[0]
            if seq not in out:
                out.append(seq)
    return out


# -- class A --------------------------------------------------------------------------


def branch_relations_with_measure(g: GentleQuiver, variant: str = "A") -> list[tuple[Relation, float]]:
    """Branch relations paired with the component-size measure.

    ``variant="A"`` counts the component of the quiver without the first
    arrow that holds that arrow's target; ``"Atilde"`` takes the smaller of
    the two arrows' tails that avoid the strongly cycle part.
    """
    rels = branch_relations(g)
    if variant == "A":
        return [(r, len(component_of(g, g.target(r.first), [r.first]))) for r in rels]
    if variant != "Atilde":
        raise QuiverError(f"unknown variant {variant!r}")
    info = cycle_structure(g)
    return [(r, min(info.tail_size(g, r.first), info.tail_size(g, r.second))) for r in rels]


def _branch_relation_phase(g, variant, f0, steps, log, fallbacks) -> GentleQuiver:
    def measure(h):
        rels = branch_relations_with_measure(h, variant)
        return MeasureSnapshot(
            "branch_relations", r=len(rels), n=min((n for _, n in rels), default=INF)
        )

    def plan(h):
        rels = branch_relations_with_measure(h, variant)
        rho, _ = min(rels, key=lambda rn: (rn[1], _tie_key(h, rn[0]), rn[0]))
        if variant == "A":
            return _with_duals([RewriteStep.reflect(h.target(rho.first))])
        info = cycle_structure(h)
        if info.tail_size(h, rho.first) <= info.tail_size(h, rho.second):
            return _with_duals([RewriteStep.reflect(h.target(rho.first))])
        return _with_duals([RewriteStep.coreflect(h.source(rho.second))])

    start = measure(g)
    cap = len(g.vertices) * (start.r + 1) * (int(min(start.n, len(g.vertices))) + 1)
    if variant == "Atilde":
        # the A-tilde measure can hand the minimum to the other arrow of the
        # relation, so allow the full vertex range for n
        cap = len(g.vertices) * (start.r + 1) * (len(g.vertices) + 1)
    return _run_phase(
        g, "branch_relations", measure, lambda s: s.r == 0, plan,
        lambda h: True, cap, f0, steps, log, fallbacks,
    )


def normalize_A(g: GentleQuiver) -> NormalizationResult:
    _reject_loops(g)
    f0 = aag_invariant(g)
    if decompose_class_A(f0) is None:
        raise QuiverError(f"invariant {f0} is not of class A")
    steps, log, fallbacks = [], [], []
    final = _branch_relation_phase(g, "A", f0, steps, log, fallbacks)
    if classify(final).cluster_tilted is None:
        raise InvariantBreach("class A pipeline ended outside the cluster tilted quivers")
    return NormalizationResult(final, RewriteTrace(g, tuple(steps), final), tuple(log), tuple(fallbacks))


# -- class A-tilde: structure ---------------------------------------------------------


@dataclass
class CycleStructure:
    """Branch/cycle bookkeeping for a quiver in class A-tilde."""

    branch: set[str]
    cycle_set: frozenset[str]
    triangles: list[tuple[str, ...]]
    branch_triangles: list[tuple[str, ...]]
    cycle_triangles: list[tuple[str, ...]]
    strong_arrows: set[str]
    strong_vertices: set[str]
    _tails: dict = field(default_factory=dict)

    def tail_size(self, g, a: str) -> float:
        """Vertices in the part cut off by ``a`` that avoids the strongly cycle
        vertices; infinite for cycle arrows."""
        if a not in self.branch:
            return INF
        if a not in self._tails:
            hits = [c for c in components(g, [a]) if not c & self.strong_vertices]
            if len(hits) != 1:
                raise InvariantBreach(f"branch arrow {a} has {len(hits)} strongly cycle free sides")
            self._tails[a] = len(hits[0])
        return self._tails[a]

    def triangle_at(self, g, x: str, which: list) -> bool:
        return any(x in (g.source(a), g.target(a)) for t in which for a in t)


def cycle_structure(g: GentleQuiver) -> CycleStructure:
    system = build_thread_system(g)
    branch = branch_arrows(g)
    tris = [o for o in system.cycle_orbits if len(o) == 3]
    btris = [t for t in tris if is_branch_triangle(g, t)]
    ctris = [t for t in tris if t not in btris]
    in_ctri = {a for t in ctris for a in t}
    strong = {
        a for a in g.arrow_ids
        if a not in branch and (a not in system.cycle_set or a in in_ctri)
    }
    strong_v = {v for a in strong for v in (g.source(a), g.target(a))}
    return CycleStructure(branch, system.cycle_set, tris, btris, ctris, strong, strong_v)


def _m_prime(g, x, info: CycleStructure, seen=()) -> int:
    if info.triangle_at(g, x, info.cycle_triangles):
        return 0
    chained = [
        a for a in g.in_arrows(x)
        if a in info.strong_arrows and any(r.first == a for r in g.relations)
    ]
    if not chained:
        return 0
    if len(chained) > 1 or x in seen:
        raise InvariantBreach(f"relation chain into {x} is not a simple path")
    return _m_prime(g, g.source(chained[0]), info, (*seen, x)) + 1


def _m_values(g) -> dict[str, tuple[int, bool]]:
    """For each vertex of the candidate set: (m_x, whether m_x was read in
    the opposite quiver)."""
    info = cycle_structure(g)
    op = validate_gentle(opposite(g.presentation))
    info_op = cycle_structure(op)
    btri_vertices = {v for t in info.branch_triangles for a in t for v in (g.source(a), g.target(a))}
    out = {}
    for x in sorted(info.strong_vertices):
        touching_branch = [a for a in info.branch if x in (g.source(a), g.target(a))]
        if not touching_branch and x not in btri_vertices:
            continue
        if x in btri_vertices or any(g.target(a) == x for a in touching_branch):
            out[x] = (_m_prime(g, x, info), False)
        else:
            out[x] = (_m_prime(op, x, info_op), True)
    return out


def _branch_arrow_phase(g, f0, steps, log, fallbacks) -> GentleQuiver:
    def r_value(h):
        info = cycle_structure(h)
        return len(info.branch) + len(info.branch_triangles)

    def measure(h):
        r = r_value(h)
        ms = _m_values(h)
        return MeasureSnapshot("branch_arrows", r=r, m=min((m for m, _ in ms.values()), default=INF))

    def plan(h):
        ms = _m_values(h)
        incident = {x: min(h.in_arrows(x) + h.out_arrows(x)) for x in ms}
        x = min(ms, key=lambda v: (ms[v][0], incident[v], v))
        m, flipped = ms[x]
        work = validate_gentle(opposite(h.presentation)) if flipped else h
        info = cycle_structure(work)
        first = RewriteStep.coreflect(x) if flipped else RewriteStep.reflect(x)
        seq = [first]
        branch_tri = info.triangle_at(work, x, info.branch_triangles)
        if m > 0 and not branch_tri:
            beta = [
                b for b in work.in_arrows(x)
                if b in info.strong_arrows
                and any(r.second == b and work.source(r.first) == x for r in work.relations)
            ]
            if beta:
                y = work.source(beta[0])
                seq.append(RewriteStep.coreflect(y) if flipped else RewriteStep.reflect(y))
        return _with_duals(seq)

    def keep(h):
        return not branch_relations(h)

    start = measure(g)
    nv = len(g.vertices)
    cap = (start.r + 1) * (nv + 1) * 2
    return _run_phase(
        g, "branch_arrows", measure, lambda s: s.r == 0, plan, keep, cap, f0,
        steps, log, fallbacks,
    )


def eliminate_branch_arrows_and_triangles(g: GentleQuiver) -> NormalizationResult:
    _reject_loops(g)
    f0 = aag_invariant(g)
    if decompose_class_A_tilde(f0) is None:
        raise QuiverError(f"invariant {f0} is not of class A-tilde")
    if branch_relations(g):
        raise QuiverError("remove the branch relations first")
    steps, log, fallbacks = [], [], []
    final = _branch_arrow_phase(g, f0, steps, log, fallbacks)
    return NormalizationResult(final, RewriteTrace(g, tuple(steps), final), tuple(log), tuple(fallbacks))


# -- class A-tilde: free relations --------------------------------------------------------


@dataclass(frozen=True)
class _Edge:
    arrow: str
    start: str  # vertex where the walk enters the arrow
    end: str

    def forward(self, g) -> bool:
        return g.source(self.arrow) == self.start


def _cycle_walk(model) -> list[_Edge]:
    a0 = min(model.arrow_ids)
    walk = [_Edge(a0, model.source(a0), model.target(a0))]
    prev, cur = a0, model.target(a0)
    while True:
        nxt = [a for a in model.in_arrows(cur) + model.out_arrows(cur) if a != prev]
        if len(nxt) != 1:
            raise InvariantBreach(f"standard model is not a cycle at {cur}")
        a = nxt[0]
        if a == a0:
            return walk
        other = model.target(a) if model.source(a) == cur else model.source(a)
        walk.append(_Edge(a, cur, other))
        prev, cur = a, other


@dataclass(frozen=True)
class _FreeRelationView:
    rho: Relation
    k: int
    inversions: int
    segment: tuple[_Edge, ...]      # gamma_1 .. gamma_k
    vertices: tuple[str, ...]       # x_0 .. x_k
    y: str
    opposite_first: str             # alpha'
    y_prime: str


def free_relations(g, cycle_set=None) -> list[Relation]:
    C = build_thread_system(g).cycle_set if cycle_set is None else cycle_set
    return sorted(r for r in g.relations if r.first not in C and r.second not in C)


def _free_relation_views(g) -> list[_FreeRelationView]:
    system = build_thread_system(g)
    C = system.cycle_set
    free = free_relations(g, C)
    if not free:
        return []
    model = standard_model(g)
    base = _cycle_walk(model)
    L = len(base)
    views = []
    for rho in free:
        idx = {e.arrow: i for i, e in enumerate(base)}
        walk = base
        if not walk[idx[rho.first]].forward(model):
            walk = [_Edge(e.arrow, e.end, e.start) for e in reversed(base)]
        pos = {e.arrow: i for i, e in enumerate(walk)}
        j = pos[rho.first]
        good = lambda e: e.forward(model) and e.arrow not in C  # noqa: E731
        best = None
        for r2 in model.relations:
            e1, e2 = walk[pos[r2.first]], walk[pos[r2.second]]
            if e1.forward(model) or e2.forward(model):
                continue
            k = (pos[r2.first] - (j + 1)) % L
            if best is None or k < best[0]:
                best = (k, r2)
        if best is None:
            raise InvariantBreach(f"free relation {rho} has no oppositely oriented partner")
        k, r2 = best
        seg = tuple(walk[(j + 1 + i) % L] for i in range(k))
        inv = sum(
            1 for a, b in combinations(range(k), 2) if good(seg[b]) and not good(seg[a])
        )
        xs = tuple(walk[(j + 1 + i) % L].start for i in range(k + 1))
        views.append(
            _FreeRelationView(
                rho, k, inv, seg, xs, g.source(rho.first), r2.first, g.source(r2.first)
            )
        )
    return views


def _free_relation_phase(g, f0, steps, log, fallbacks) -> GentleQuiver:
    def measure(h):
        views = _free_relation_views(h)
        if not views:
            return MeasureSnapshot("free_relations", s=0, k=INF, inversions=0)
        v = min(views, key=lambda v: (v.k, v.inversions))
        return MeasureSnapshot("free_relations", s=len(views), k=v.k, inversions=v.inversions)

    def plan(h):
        views = _free_relation_views(h)
        v = min(views, key=lambda v: (v.k, v.inversions, _tie_key(h, v.rho), v.rho))
        C = build_thread_system(h).cycle_set
        model = standard_model(h)
        good = [e.forward(model) and e.arrow not in C for e in v.segment]
        for i in range(len(good) - 1):
            if good[i + 1] and not good[i]:
                x = v.vertices[i + 1]
                return [[RewriteStep.reflect(x)], [RewriteStep.coreflect(x)]]
        l = 0
        while l < v.k and good[l]:
            l += 1
        if l > 0:
            return _with_duals([RewriteStep.reflect(v.vertices[0])])
        if l < v.k:
            xk = v.vertices[v.k]
            if v.opposite_first not in C:
                return _with_duals([RewriteStep.reflect(xk)])
            return _with_duals([RewriteStep.coreflect(xk)])
        x0 = v.vertices[0]
        if v.opposite_first in C:
            return _with_duals([RewriteStep.reflect(x0), RewriteStep.reflect(v.y_prime)])
        return _with_duals(
            [RewriteStep.reflect(x0), RewriteStep.reflect(v.y), RewriteStep.reflect(v.y_prime)]
        )

    def keep(h):
        info = cycle_structure(h)
        return not info.branch and not info.branch_triangles

    start = measure(g)
    nv = len(g.vertices)
    cap = (start.s + 1) * (nv + 1) * (nv * nv + 1)
    return _run_phase(
        g, "free_relations", measure, lambda s: s.s == 0, plan, keep, cap, f0,
        steps, log, fallbacks,
    )


def eliminate_free_relations(g: GentleQuiver) -> NormalizationResult:
    _reject_loops(g)
    f0 = aag_invariant(g)
    if decompose_class_A_tilde(f0) is None:
        raise QuiverError(f"invariant {f0} is not of class A-tilde")
    info = cycle_structure(g)
    if info.branch or info.branch_triangles:
        raise QuiverError("remove branch arrows and branch triangles first")
    steps, log, fallbacks = [], [], []
    final = _free_relation_phase(g, f0, steps, log, fallbacks)
    return NormalizationResult(final, RewriteTrace(g, tuple(steps), final), tuple(log), tuple(fallbacks))


def normalize_A_tilde(g: GentleQuiver) -> NormalizationResult:
    _reject_loops(g)
    f0 = aag_invariant(g)
    if decompose_class_A_tilde(f0) is None:
        raise QuiverError(f"invariant {f0} is not of class A-tilde")
    steps, log, fallbacks = [], [], []
    h = _branch_relation_phase(g, "Atilde", f0, steps, log, fallbacks)
    h = _branch_arrow_phase(h, f0, steps, log, fallbacks)
    h = _free_relation_phase(h, f0, steps, log, fallbacks)
    if classify(h).cluster_tilted is None:
        raise InvariantBreach("class A-tilde pipeline ended outside the cluster tilted quivers")
    return NormalizationResult(h, RewriteTrace(g, tuple(steps), h), tuple(log), tuple(fallbacks))


def normalize(g: GentleQuiver) -> NormalizationResult:
    """Dispatch on the class read off the invariant."""
    f = aag_invariant(g)
    if decompose_class_A(f) is not None:
        return normalize_A(g)
    if decompose_class_A_tilde(f) is not None:
        return normalize_A_tilde(g)
    raise QuiverError(f"invariant {f} lies in neither class")


# -- replay ------------------------------------------------------------------------------


@dataclass(frozen=True)
class TraceCheck:
    ok: bool
    index: int | None = None
    check: str | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def verify_trace(trace: RewriteTrace) -> TraceCheck:
    """Replay a trace, checking preconditions, gentleness, the invariant
    and the final quiver."""
    g = trace.initial
    f0 = aag_invariant(g)
    for i, step in enumerate(trace.steps):
        if step.kind is StepKind.REFLECT and not can_reflect(g, step.vertex):
            return TraceCheck(False, i, "precondition", f"cannot reflect at {step.vertex}")
        if step.kind is StepKind.COREFLECT and not can_coreflect(g, step.vertex):
            return TraceCheck(False, i, "precondition", f"cannot coreflect at {step.vertex}")
        try:
            g = apply_step(g, step)
        except (QuiverError, InvariantBreach) as exc:
            return TraceCheck(False, i, "gentleness", str(exc))
        if step.kind in (StepKind.REFLECT, StepKind.COREFLECT) and aag_invariant(g) != f0:
            return TraceCheck(False, i, "invariant", f"{aag_invariant(g)} != {f0}")
    if g != trace.final:
        return TraceCheck(False, len(trace.steps), "final", "replay does not reach the recorded final quiver")
    return TraceCheck(True)
