"""Deciding membership in the derived classes of gentle cluster tilted
algebras of types A and A-tilde, cluster-tiltedness and Gorenstein dimension.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import InvariantBreach
from .quiver import GentleQuiver, Relation, branch_arrows
from .threads import AagInvariant, ThreadSystem, build_thread_system

TRIANGLE = AagInvariant.point(0, 3)


@dataclass(frozen=True)
class ClassDecompositionA:
    """f = m*[0,3] + [p+m+2, p]."""

    m: int
    p: int

    def invariant(self) -> AagInvariant:
        return self.m * TRIANGLE + AagInvariant.point(self.p + self.m + 2, self.p)


@dataclass(frozen=True)
class ClassDecompositionAtilde:
    """f = (m1+m2)*[0,3] + [p+m1, p] + [q+m2, q] with p+m1 > 0 and q+m2 > 0."""

    m1: int
    m2: int
    p: int
    q: int

    def invariant(self) -> AagInvariant:
        return (
            (self.m1 + self.m2) * TRIANGLE
            + AagInvariant.point(self.p + self.m1, self.p)
            + AagInvariant.point(self.q + self.m2, self.q)
        )


def decompose_class_A(f: AagInvariant) -> ClassDecompositionA | None:
    m = f(0, 3)
    rest = list(f.minus(m * TRIANGLE).points())
    if len(rest) != 1:
        return None
    a, b = rest[0]
    if a != b + m + 2:
        return None
    return ClassDecompositionA(m, b)


def decompose_class_A_tilde(f: AagInvariant) -> ClassDecompositionAtilde | None:
    m = f(0, 3)
    rest = list(f.minus(m * TRIANGLE).points())
    if len(rest) != 2:
        return None
    (a, b), (c, d) = sorted(rest, reverse=True)
    if a < b or c < d or a == 0 or c == 0 or (a - b) + (c - d) != m:
        return None
    return ClassDecompositionAtilde(a - b, c - d, b, d)


class ClusterType(enum.Enum):
    TYPE_A = "TypeA"
    TYPE_A_TILDE = "TypeAtilde"


@dataclass(frozen=True)
class GorensteinDimension:
    """Exact value, or ``None`` meaning only "at most one" is known."""

    value: int | None

    @property
    def at_most_one(self) -> bool:
        return self.value is None or self.value <= 1

    def to_json(self):
        if self.value is None:
            return {"kind": "AtMostOne"}
        return {"kind": "Exact", "value": self.value}

    def __str__(self) -> str:
        return "AtMostOne" if self.value is None else f"Exact({self.value})"


def gorenstein_dimension(g: GentleQuiver, system: ThreadSystem | None = None) -> GorensteinDimension:
    """Longest maximal antipath; unknown beyond "at most one" if there is none."""
    system = system or build_thread_system(g)
    lengths = [w.length for w in system.antipaths]
    return GorensteinDimension(max(lengths) if lengths else None)


def is_tree_type(g) -> bool:
    return len(g.vertices) == len(g.arrows) + 1


def is_one_cycle(g) -> bool:
    return len(g.vertices) == len(g.arrows)


def type_a_tilde(g, f: AagInvariant) -> bool | None:
    """Whether a 1-cycle quiver has f = [p,p] + [q,q]; None off 1-cycle quivers."""
    if not is_one_cycle(g):
        return None
    pts = list(f.points())
    return len(pts) == 2 and all(p == q for p, q in pts)


def branch_relations(g) -> list[Relation]:
    br = branch_arrows(g)
    return sorted(r for r in g.relations if r.first in br or r.second in br)


def relations_outside_triangles(g, system: ThreadSystem) -> list[Relation]:
    tri_of = {}
    for orbit in system.cycle_orbits:
        if len(orbit) == 3:
            for a in orbit:
                tri_of[a] = orbit
    return sorted(
        r for r in g.relations
        if r.first not in tri_of or tri_of[r.first] is not tri_of.get(r.second)
    )


@dataclass(frozen=True)
class Classification:
    gentle: bool
    tree_type: bool
    one_cycle: bool
    type_a_tilde: bool | None
    class_a: ClassDecompositionA | None
    class_a_tilde: ClassDecompositionAtilde | None
    cluster_tilted: ClusterType | None
    gorenstein: GorensteinDimension
    invariant: AagInvariant

    @property
    def in_class(self) -> bool:
        return self.class_a is not None or self.class_a_tilde is not None

    def to_json(self) -> dict:
        def dec(d):
            return None if d is None else dict(d.__dict__)

        return {
            "gentle": self.gentle,
            "treeType": self.tree_type,
            "oneCycle": self.one_cycle,
            "typeAtilde": self.type_a_tilde,
            "classA": dec(self.class_a),
            "classAtilde": dec(self.class_a_tilde),
            "clusterTilted": None if self.cluster_tilted is None else self.cluster_tilted.value,
            "gorenstein": self.gorenstein.to_json(),
        }


def classify(g: GentleQuiver) -> Classification:
    """Classify a gentle quiver.

    Cluster-tiltedness is decided twice, from the Gorenstein dimension and
    from the shape of the relations, and the two answers must agree.
    """
    system = build_thread_system(g)
    f = system.invariant()
    ca = decompose_class_A(f)
    cat = decompose_class_A_tilde(f)
    if ca is not None and cat is not None:
        raise InvariantBreach(f"invariant {f} decomposes in both classes")
    gdim = gorenstein_dimension(g, system)

    cluster = None
    if ca is not None or cat is not None:
        by_gorenstein = gdim.at_most_one
        if ca is not None:
            by_shape = not branch_relations(g)
        else:
            by_shape = not relations_outside_triangles(g, system)
        if by_gorenstein != by_shape:
            raise InvariantBreach(
                f"cluster-tilted routes disagree (Gorenstein: {by_gorenstein}, shape: {by_shape})"
            )
        if by_gorenstein:
            cluster = ClusterType.TYPE_A if ca is not None else ClusterType.TYPE_A_TILDE

    return Classification(
        gentle=True,
        tree_type=is_tree_type(g),
        one_cycle=is_one_cycle(g),
        type_a_tilde=type_a_tilde(g, f),
        class_a=ca,
        class_a_tilde=cat,
        cluster_tilted=cluster,
        gorenstein=gdim,
        invariant=f,
    )


class Equivalence(enum.Enum):
    EQUIVALENT_IN_CLASS = "EquivalentInClass"
    NOT_EQUIVALENT = "NotEquivalent"
    INCONCLUSIVE_EQUAL_INVARIANT = "InconclusiveEqualInvariant"


def derived_equivalent(g1: GentleQuiver, g2: GentleQuiver) -> Equivalence:
    """Different invariants always separate; equal ones decide only inside
    the two classified families."""
    c1, c2 = classify(g1), classify(g2)
    if c1.invariant != c2.invariant:
        return Equivalence.NOT_EQUIVALENT
    if c1.in_class and c2.in_class:
        return Equivalence.EQUIVALENT_IN_CLASS
    return Equivalence.INCONCLUSIVE_EQUAL_INVARIANT
