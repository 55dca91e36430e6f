"""Permitted and forbidden threads and the derived-equivalence invariant.

A *path* here is a walk with no relation between consecutive arrows and an
*antipath* one where every consecutive pair is a relation. Both are stored
target-to-source, like every path in this package. The maximal ones, the
bijections between them and the orbits of their composite give the
multiset-valued invariant :class:`AagInvariant`.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import InvariantBreach
from .quiver import GentleQuiver


class ThreadKind(enum.Enum):
    PATH = "path"
    ANTIPATH = "antipath"


@dataclass(frozen=True)
class Thread:
    """A path or antipath; trivial threads have no arrows and a sign."""

    kind: ThreadKind
    arrows: tuple[str, ...]
    source: str
    target: str
    sigma: int
    tau: int

    @property
    def length(self) -> int:
        return len(self.arrows)

    @property
    def is_trivial(self) -> bool:
        return not self.arrows

    @property
    def sort_key(self):
        return (self.kind.value, self.arrows, self.source, self.sigma)

    def __lt__(self, other: "Thread") -> bool:
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        if self.is_trivial:
            prime = "'" if self.kind is ThreadKind.ANTIPATH else ""
            return f"1{prime}[{self.source},{self.sigma:+d}]"
        return "(" + ",".join(self.arrows) + ")"


def trivial_thread(kind: ThreadKind, vertex: str, eps: int) -> Thread:
    tau = eps if kind is ThreadKind.ANTIPATH else -eps
    return Thread(kind, (), vertex, vertex, eps, tau)


def make_thread(g: GentleQuiver, kind: ThreadKind, arrows: Iterable[str]) -> Thread:
    """Thread from arrows listed target-to-source (the last one is walked first)."""
    arrows = tuple(arrows)
    if not arrows:
        raise ValueError("use trivial_thread for length-0 threads")
    for later, earlier in zip(arrows, arrows[1:]):
        if g.source(later) != g.target(earlier):
            raise ValueError(f"arrows {later} and {earlier} are not composable")
        related = (later, earlier) in g.relations
        if related != (kind is ThreadKind.ANTIPATH):
            raise ValueError(f"({later},{earlier}) breaks the {kind.value} condition")
    return Thread(
        kind,
        arrows,
        g.source(arrows[-1]),
        g.target(arrows[0]),
        g.sigma(arrows[-1]),
        g.tau(arrows[0]),
    )


def _extends(g: GentleQuiver, w: Thread) -> bool:
    """Whether some arrow prolongs ``w`` at either end."""
    same = 1 if w.kind is ThreadKind.ANTIPATH else -1
    for a in g.out_arrows(w.target):
        if g.sigma(a) == same * w.tau:
            return True
    for b in g.in_arrows(w.source):
        if g.tau(b) == same * w.sigma:
            return True
    return False


def is_maximal(g: GentleQuiver, w: Thread) -> bool:
    return not _extends(g, w)


def _next(g: GentleQuiver, a: str, same: int) -> str | None:
    """The arrow walked right after ``a`` in a path (same=-1) or antipath (same=1)."""
    cands = [b for b in g.out_arrows(g.target(a)) if g.sigma(b) == same * g.tau(a)]
    if len(cands) > 1:
        raise InvariantBreach(f"arrow {a} has two continuations {cands}")
    return cands[0] if cands else None


def _prev(g: GentleQuiver, a: str, same: int) -> str | None:
    cands = [c for c in g.in_arrows(g.source(a)) if g.tau(c) == same * g.sigma(a)]
    if len(cands) > 1:
        raise InvariantBreach(f"arrow {a} has two predecessors {cands}")
    return cands[0] if cands else None


def _chains(g: GentleQuiver, same: int) -> tuple[list[list[str]], set[str]]:
    """Maximal chains of the successor function (in walking order) and the
    arrows left on its cycles."""
    chains = []
    covered: set[str] = set()
    for a in g.arrow_ids:
        if _prev(g, a, same) is not None:
            continue
        chain = [a]
        nxt = _next(g, a, same)
        while nxt is not None:
            if len(chain) > len(g.arrow_ids):
                raise InvariantBreach("successor chain does not terminate")
            chain.append(nxt)
            nxt = _next(g, nxt, same)
        covered.update(chain)
        chains.append(chain)
    return chains, set(g.arrow_ids) - covered


def enumerate_threads(g: GentleQuiver) -> tuple[frozenset[Thread], frozenset[Thread]]:
    """All maximal paths and all maximal antipaths of ``g``."""
    result = []
    for kind, same in ((ThreadKind.PATH, -1), (ThreadKind.ANTIPATH, 1)):
        chains, cyclic = _chains(g, same)
        if kind is ThreadKind.PATH and cyclic:
            raise InvariantBreach(f"relation-free cycle through {sorted(cyclic)}")
        threads = {make_thread(g, kind, reversed(c)) for c in chains}
        for v in g.vertices:
            for eps in (1, -1):
                w = trivial_thread(kind, v, eps)
                if is_maximal(g, w):
                    threads.add(w)
        result.append(frozenset(threads))
    return result[0], result[1]


def cycle_arrows(g: GentleQuiver) -> set[str]:
    """Arrows lying on no maximal antipath (the full-relation oriented cycles)."""
    return _chains(g, 1)[1]


@dataclass(frozen=True)
class OrbitStats:
    p: int
    q: int


class AagInvariant:
    """Finite multiset of points (p, q), read as a function N x N -> N."""

    __slots__ = ("_counts",)

    def __init__(self, counts=None):
        c = Counter()
        if counts:
            items = counts.items() if hasattr(counts, "items") else counts
            for (p, q), mult in items:
                if mult < 0 or p < 0 or q < 0:
                    raise ValueError("invariant entries must be non-negative")
                c[(int(p), int(q))] += int(mult)
        self._counts = {k: v for k, v in c.items() if v}

    @classmethod
    def point(cls, p: int, q: int) -> "AagInvariant":
        return cls({(p, q): 1})

    @classmethod
    def from_points(cls, points: Iterable[tuple[int, int]]) -> "AagInvariant":
        return cls(Counter(points))

    def __call__(self, p: int, q: int) -> int:
        return self._counts.get((p, q), 0)

    def items(self) -> list[tuple[tuple[int, int], int]]:
        return sorted(self._counts.items())

    def points(self) -> Iterator[tuple[int, int]]:
        """Points repeated by multiplicity, in sorted order."""
        for pq, mult in self.items():
            for _ in range(mult):
                yield pq

    def __len__(self) -> int:
        return sum(self._counts.values())

    def __eq__(self, other):
        if isinstance(other, AagInvariant):
            return self._counts == other._counts
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._counts.items()))

    def __add__(self, other: "AagInvariant") -> "AagInvariant":
        c = Counter(self._counts)
        c.update(other._counts)
        return AagInvariant(c)

    def __mul__(self, k: int) -> "AagInvariant":
        if k < 0:
            raise ValueError("negative multiple")
        return AagInvariant({pq: m * k for pq, m in self._counts.items()})

    __rmul__ = __mul__

    def minus(self, other: "AagInvariant") -> "AagInvariant | None":
        """Multiset difference, or None if ``other`` is not contained in self."""
        c = Counter(self._counts)
        for pq, m in other._counts.items():
            if c[pq] < m:
                return None
            c[pq] -= m
        return AagInvariant(c)

    @property
    def p_total(self) -> int:
        return sum(p * m for (p, _), m in self._counts.items())

    @property
    def q_total(self) -> int:
        return sum(q * m for (_, q), m in self._counts.items())

    def to_records(self) -> list[dict[str, int]]:
        return [{"p": p, "q": q, "mult": m} for (p, q), m in self.items()]

    @classmethod
    def from_records(cls, records) -> "AagInvariant":
        return cls({(r["p"], r["q"]): r["mult"] for r in records})

    def __repr__(self) -> str:
        if not self._counts:
            return "0"
        terms = []
        for (p, q), m in self.items():
            terms.append(f"{m}*[{p},{q}]" if m > 1 else f"[{p},{q}]")
        return " + ".join(terms)


@dataclass(frozen=True)
class ThreadSystem:
    paths: frozenset[Thread]
    antipaths: frozenset[Thread]
    phi: dict[Thread, Thread]
    psi: dict[Thread, Thread]
    Phi: dict[Thread, Thread]
    cycle_set: frozenset[str]
    Psi: dict[str, str]
    antipath_orbits: tuple[tuple[Thread, ...], ...]
    cycle_orbits: tuple[tuple[str, ...], ...]

    def orbit_stats(self) -> list[OrbitStats]:
        stats = [OrbitStats(len(o), sum(w.length for w in o)) for o in self.antipath_orbits]
        stats += [OrbitStats(0, len(o)) for o in self.cycle_orbits]
        return stats

    def invariant(self) -> AagInvariant:
        return AagInvariant.from_points((s.p, s.q) for s in self.orbit_stats())

    def orbit_of(self, w: Thread) -> tuple[Thread, ...]:
        for o in self.antipath_orbits:
            if w in o:
                return o
        raise KeyError(w)


def _orbits(perm: dict, key) -> list[tuple]:
    seen = set()
    orbits = []
    for start in sorted(perm, key=key):
        if start in seen:
            continue
        orbit = [start]
        seen.add(start)
        nxt = perm[start]
        while nxt != start:
            orbit.append(nxt)
            seen.add(nxt)
            nxt = perm[nxt]
        orbits.append(tuple(orbit))
    return orbits


def _unique_index(threads, key_of, what: str) -> dict:
    index = {}
    for w in threads:
        k = key_of(w)
        if k in index:
            raise InvariantBreach(f"{what} not unique for {k}: {index[k]} and {w}")
        index[k] = w
    return index


def build_thread_system(g: GentleQuiver) -> ThreadSystem:
    M, N = enumerate_threads(g)
    if len(M) != len(N):
        raise InvariantBreach(f"|M| = {len(M)} but |N| = {len(N)}")
    n_by_end = _unique_index(N, lambda w: (w.target, w.tau), "phi")
    m_by_start = _unique_index(M, lambda w: (w.source, w.sigma), "psi")
    try:
        phi = {w: n_by_end[(w.target, -w.tau)] for w in M}
        psi = {w: m_by_start[(w.source, -w.sigma)] for w in N}
    except KeyError as exc:
        raise InvariantBreach(f"thread bijection undefined at {exc}") from None
    Phi = {w: phi[psi[w]] for w in N}
    if len(set(phi.values())) != len(N) or len(set(psi.values())) != len(M):
        raise InvariantBreach("phi/psi not bijective")

    C = cycle_arrows(g)
    Psi = {}
    for a in C:
        b = _prev(g, a, 1)
        if b is None or b not in C:
            raise InvariantBreach(f"cycle set not closed under Psi at {a}")
        Psi[a] = b

    n_orbits = _orbits(Phi, key=lambda w: w.sort_key)
    c_orbits = _orbits(Psi, key=lambda a: a)
    n_orbits.sort(key=lambda o: (len(o), sum(w.length for w in o), min(w.sort_key for w in o)))
    c_orbits.sort(key=lambda o: (0, len(o), min(o)))
    return ThreadSystem(
        M, N, phi, psi, Phi, frozenset(C), Psi, tuple(n_orbits), tuple(c_orbits)
    )


def aag_invariant(g: GentleQuiver) -> AagInvariant:
    return build_thread_system(g).invariant()


@dataclass(frozen=True)
class SumReport:
    p_sum: int
    q_sum: int
    expected_p: int
    expected_q: int

    @property
    def ok(self) -> bool:
        return self.p_sum == self.expected_p and self.q_sum == self.expected_q


def check_sum_identities(g: GentleQuiver, f: AagInvariant | None = None) -> SumReport:
    f = aag_invariant(g) if f is None else f
    n0, n1 = len(g.vertices), len(g.arrows)
    return SumReport(f.p_total, f.q_total, 2 * n0 - n1, n1)


def gorenstein_bound_from_threads(N: Iterable[Thread]) -> int | None:
    """Longest maximal antipath, or None when there are none."""
    lengths = [w.length for w in N]
    return max(lengths) if lengths else None
