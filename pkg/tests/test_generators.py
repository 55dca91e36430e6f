import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gentlequivers.classification import ClusterType, classify, decompose_class_A, decompose_class_A_tilde
from gentlequivers.dsl import emit_dsl
from gentlequivers.errors import QuiverError
from gentlequivers.generators import (
    GenerationError,
    exhaustive_gentle_quivers,
    generate_random_instance,
    local_relation_choices,
    random_gentle_quiver,
)
from gentlequivers.quiver import is_connected, is_gentle, validate_gentle
from gentlequivers.threads import AagInvariant, aag_invariant
from gentlequivers.transforms import triangles


def body(cls, n, frac, seed):
    return validate_gentle(generate_random_instance(cls, n, frac, seed).body)


@given(st.sampled_from(["A", "Atilde"]), st.integers(2, 12), st.floats(0, 1), st.integers(0, 2**32 - 1))
def test_deterministic_in_seed(cls, n, frac, seed):
    a = generate_random_instance(cls, n, frac, seed)
    b = generate_random_instance(cls, n, frac, seed)
    assert emit_dsl(a) == emit_dsl(b)
    assert a.name == f"gen_{cls}_{n}_{seed}"


@given(st.integers(2, 12), st.floats(0, 1), st.integers(0, 2**32 - 1))
def test_class_A_instances(n, frac, seed):
    g = body("A", n, frac, seed)
    assert len(g.vertices) == n
    assert decompose_class_A(aag_invariant(g)) is not None


@given(st.integers(2, 12), st.floats(0, 1), st.integers(0, 2**32 - 1))
def test_class_A_tilde_instances(n, frac, seed):
    g = body("Atilde", n, frac, seed)
    assert decompose_class_A_tilde(aag_invariant(g)) is not None


@given(st.integers(2, 12), st.integers(0, 2**32 - 1))
def test_uncompleted_trees(n, seed):
    g = body("A", n, 0.0, seed)
    assert len(g.arrows) == n - 1
    assert aag_invariant(g) == AagInvariant.point(n + 1, n - 1)


def test_fully_completed_path_on_three_vertices(fixtures):
    g = body("A", 3, 1.0, 0)
    assert len(triangles(g)) == 1
    assert aag_invariant(g) == aag_invariant(fixtures["F2"])
    assert classify(g).cluster_tilted is ClusterType.TYPE_A


def test_fully_completed_cycle_on_six_vertices():
    assert classify(body("Atilde", 6, 1.0, 0)).cluster_tilted is ClusterType.TYPE_A_TILDE


@pytest.mark.parametrize(
    "args",
    [("B", 4, 0.5, 1), ("A", 1, 0.5, 1), ("A", 4, 1.5, 1), ("Atilde", 4, -0.1, 1)],
)
def test_bad_arguments(args):
    with pytest.raises(QuiverError):
        generate_random_instance(*args)


def test_budget_exhaustion():
    with pytest.raises(GenerationError):
        generate_random_instance("Atilde", 2, 0.0, 1, budget=0)


def test_local_relation_choices_are_gentle():
    for ins in ([], ["a"], ["a", "b"]):
        for outs in ([], ["c"], ["c", "d"]):
            for rels in local_relation_choices(ins, outs):
                for a in outs:
                    assert sum(r.first == a for r in rels) <= 1
                for b in ins:
                    assert sum(r.second == b for r in rels) <= 1


@given(st.integers(1, 10), st.integers(0, 4), st.integers(0, 2**32 - 1))
def test_random_gentle_quivers(n, extra, seed):
    try:
        g = random_gentle_quiver(random.Random(seed), n, extra)
    except GenerationError:
        return
    assert is_gentle(g) and is_connected(g)
    assert len(g.vertices) == n and len(g.arrows) == n - 1 + extra
    assert not g.loops()


def test_exhaustive_enumeration_counts():
    small = list(exhaustive_gentle_quivers(2, 2))
    assert all(is_gentle(g) for g in small)
    # one vertex: bare point, loop with its square zero
    assert sum(len(g.vertices) == 1 for g in small) == 2
    no_loops = list(exhaustive_gentle_quivers(2, 2, loops=False))
    assert all(not g.loops() for g in no_loops) and len(no_loops) < len(small)
