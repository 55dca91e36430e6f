"""One test per acceptance criterion. Each prints a PASS/FAIL line which is
also repeated in the terminal summary."""

import random
from collections import Counter

import oracle
import pytest
from conftest import CRITERIA_LINES
from support import any_gentle, legal_moves, random_chain

from gentlequivers import (
    AagInvariant,
    Equivalence,
    Relation,
    aag_invariant,
    build_thread_system,
    check_sum_identities,
    classify,
    derived_equivalent,
    gorenstein_dimension,
    normalize_A,
    normalize_A_tilde,
    reflect,
    verify_trace,
)
from gentlequivers.dsl import DslError, QuiverDocument, emit_dsl, parse_dsl
from gentlequivers.fixtures import NAMES, fixture_document, fixture_text
from gentlequivers.generators import (
    exhaustive_gentle_quivers,
    generate_random_instance,
    random_completion,
    random_gentle_quiver,
    random_in_class,
)
from gentlequivers.quiver import presentation, rename_arrows
from gentlequivers.threads import enumerate_threads
from gentlequivers.transforms import (
    CompletionNotGentle,
    complete_relations,
    relation_thread,
)


def verdict(n: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}" + (f"  ({detail})" if detail else "")
    print(line)
    CRITERIA_LINES.append(line)
    assert ok, line


def inv(*pts):
    return AagInvariant(Counter(dict(pts)))


def test_criterion_01_golden_invariants(fixtures):
    want = {
        "F1": inv(((4, 2), 1)),
        "F2": inv(((0, 3), 1), ((3, 0), 1)),
        "F7": inv(((4, 5), 1), ((2, 1), 1)),
        "F8": inv(((0, 3), 1), ((3, 3), 1), ((2, 1), 1)),
    }
    got = {k: aag_invariant(fixtures[k]) for k in want}
    bad = [f"{k}: {got[k]} != {want[k]}" for k in want if got[k] != want[k]]
    verdict(1, "golden invariants F1 F2 F7 F8", not bad, "; ".join(bad))


def test_criterion_02_golden_reflection(fixtures):
    h = reflect(fixtures["F3"], "x")
    ends = {a.id: (a.source, a.target) for a in h.arrows}
    want_ends = {
        "al": ("y2", "v"), "al2": ("y", "v2"), "be": ("x", "y"),
        "be2": ("x", "y2"), "ga": ("z", "x"), "ga2": ("z2", "x"),
    }
    want_rel = {Relation("al", "be2"), Relation("be2", "ga"), Relation("al2", "be"), Relation("be", "ga2")}
    ok = ends == want_ends and set(h.relations) == want_rel
    verdict(2, "reflect(F3, x) endpoint table and relations", ok, "" if ok else str(h))


def test_criterion_03_completion_laws(fixtures):
    notes = []
    f8 = complete_relations(fixtures["F7"], [Relation("x5", "x6")])
    renamed = rename_arrows(f8.presentation, {"g_x5_x6": "x7"})
    if renamed != presentation(fixtures["F8"]):
        notes.append("F7 completion differs from F8")
    try:
        complete_relations(fixtures["F4"], [Relation("al", "be")])
        notes.append("F4 completion accepted")
    except CompletionNotGentle:
        pass

    rng = random.Random(3)
    checked = 0
    while checked < 200:
        base = random_gentle_quiver(rng, rng.randint(2, 12), rng.randint(0, 2))
        system = build_thread_system(base)
        iso = sorted(r for r in base.relations if relation_thread(base, r) in system.antipaths)
        R0 = rng.sample(iso, rng.randint(0, len(iso)))
        try:
            g = complete_relations(base, R0)
        except CompletionNotGentle:
            continue
        threads = {relation_thread(base, r) for r in R0}
        expected = len(R0) * AagInvariant.point(0, 3)
        for orbit in system.antipath_orbits:
            m = sum(1 for w in orbit if w in threads)
            expected = expected + AagInvariant.point(
                len(orbit) - m, sum(w.length for w in orbit) - 2 * m
            )
        for orbit in system.cycle_orbits:
            expected = expected + AagInvariant.point(0, len(orbit))
        if aag_invariant(g) != expected:
            notes.append(f"completion formula fails on {base} with {R0}")
            break
        checked += 1
    verdict(3, "completion laws (F7->F8, F4 rejected, 200 random completions)", not notes, "; ".join(notes))


def test_criterion_04_classification_verdicts(fixtures):
    c7, c8, c2 = (classify(fixtures[k]) for k in ("F7", "F8", "F2"))
    notes = []
    if c7.in_class:
        notes.append("F7 in class")
    if c8.class_a_tilde is None or (c8.class_a_tilde.m1, c8.class_a_tilde.m2, c8.class_a_tilde.p, c8.class_a_tilde.q) != (0, 1, 3, 1):
        notes.append(f"F8 gives {c8.class_a_tilde}")
    if c2.cluster_tilted is None or c2.cluster_tilted.value != "TypeA":
        notes.append(f"F2 gives {c2.cluster_tilted}")
    verdict(4, "classification of F7, F8, F2", not notes, "; ".join(notes))


def test_criterion_05_sum_identities():
    rng = random.Random(5)
    bad = 0
    for _ in range(1000):
        g = any_gentle(rng, 14)
        if not check_sum_identities(g).ok:
            bad += 1
    verdict(5, "sum identities on 1000 random gentle quivers", bad == 0, f"{bad} failures")


def test_criterion_06_invariance_under_rewrites():
    rng = random.Random(6)
    moves = bad = 0
    for i in range(500):
        g = random_in_class(rng, "A" if i % 2 else "Atilde", 12)
        f = aag_invariant(g)
        for op, x in legal_moves(g):
            moves += 1
            if aag_invariant(op(g, x)) != f:
                bad += 1
    verdict(6, "f preserved by every legal (co)reflection on 500 instances", bad == 0,
            f"{moves} rewrites, {bad} changed f")


def _as_tuples(threads):
    return {(w.kind.value, w.arrows, w.source, w.target, w.sigma, w.tau) for w in threads}


def test_criterion_07_oracle_equivalence():
    total = bad = 0
    for g in exhaustive_gentle_quivers(5, 5):
        total += 1
        sigma = {a: g.sigma(a) for a in g.arrow_ids}
        tau = {a: g.tau(a) for a in g.arrow_ids}
        M, N = oracle.threads(g, sigma, tau)
        M2, N2 = enumerate_threads(g)
        if (M, N) != (_as_tuples(M2), _as_tuples(N2)):
            bad += 1
        elif oracle.invariant(g, sigma, tau) != Counter(dict(aag_invariant(g).items())):
            bad += 1
    verdict(7, "threads and f match the brute-force oracle (<=5 arrows, <=5 vertices)", bad == 0,
            f"{total} quivers, {bad} mismatches")


def _lex_decreasing(log) -> bool:
    return all(b.key() < a.key() for a, b in zip(log, log[1:]) if a.phase == b.phase)


def test_criterion_08_normalization_soundness():
    rng = random.Random(8)
    problems = []
    for cls, count, run in (("A", 300, normalize_A), ("Atilde", 200, normalize_A_tilde)):
        for _ in range(count):
            g = random_in_class(rng, cls, 12)
            try:
                res = run(g)
            except Exception as exc:  # report, do not stop the campaign
                problems.append(f"{cls}: {type(exc).__name__}: {exc}")
                continue
            c = classify(res.final)
            if c.cluster_tilted is None:
                problems.append(f"{cls}: final not cluster tilted")
            if aag_invariant(res.final) != aag_invariant(g):
                problems.append(f"{cls}: f changed")
            if not _lex_decreasing(res.measure_log):
                problems.append(f"{cls}: measure not decreasing")
            if not verify_trace(res.trace):
                problems.append(f"{cls}: trace rejected")
    verdict(8, "normalization on 300 class-A and 200 class-A-tilde instances", not problems,
            "; ".join(problems[:3]))


def test_criterion_09_gorenstein(fixtures):
    want = {"F1": 1, "F2": 0, "F6": 2}
    got = {k: gorenstein_dimension(fixtures[k]).value for k in want}
    rng = random.Random(9)
    over = 0
    for i in range(200):
        g = random_in_class(rng, "A" if i % 2 else "Atilde", 12)
        c = classify(g)
        if c.cluster_tilted is not None and not c.gorenstein.at_most_one:
            over += 1
    ok = got == want and over == 0
    verdict(9, "Gorenstein values F1=1 F2=0 F6=2; cluster tilted => <= 1", ok, f"{got}, {over} violations")


def test_criterion_10_derived_equivalence(fixtures):
    bad = 0
    for seed in range(100):
        rng = random.Random(seed)
        g = random_in_class(rng, "A" if seed % 2 else "Atilde", 10)
        h1 = random_chain(random.Random(1000 + seed), g, 6)
        h2 = random_chain(random.Random(2000 + seed), g, 6)
        if derived_equivalent(h1, h2) is not Equivalence.EQUIVALENT_IN_CLASS:
            bad += 1
    f1f2 = derived_equivalent(fixtures["F1"], fixtures["F2"])
    ok = bad == 0 and f1f2 is Equivalence.NOT_EQUIVALENT
    verdict(10, "random rewrite chains stay equivalent; F1 vs F2 not equivalent", ok,
            f"{bad} chain failures, F1/F2 -> {f1f2.value}")


def test_criterion_11_parser_round_trip():
    bad = []
    docs = [fixture_document(n) for n in NAMES]
    for seed in range(500):
        docs.append(generate_random_instance("A" if seed % 2 else "Atilde", 2 + seed % 10, (seed % 5) / 4, seed))
    for doc in docs:
        text = emit_dsl(doc)
        again = parse_dsl(text)
        if again != doc or emit_dsl(again) != text:
            bad.append(doc.name)
    for n in NAMES:
        if emit_dsl(parse_dsl(fixture_text(n))) != emit_dsl(fixture_document(n)):
            bad.append(n)
    broken = "quiver X\nvertices 1 2\narrow a 1 2\narrow b 1 2\nrel a b\narrow a 2 1\nrel a zz\nnope\n"
    try:
        parse_dsl(broken)
        bad.append("broken text accepted")
    except DslError as exc:
        if len(exc.diagnostics) < 3 or not all(d.line > 0 and d.column > 0 for d in exc.diagnostics):
            bad.append("diagnostics without positions")
    verdict(11, f"parse/emit round trip on {len(docs)} documents; errors positioned", not bad, ", ".join(bad[:5]))
