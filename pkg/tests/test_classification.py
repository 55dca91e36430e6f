import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gentlequivers.classification import (
    ClassDecompositionA,
    ClassDecompositionAtilde,
    ClusterType,
    Equivalence,
    classify,
    decompose_class_A,
    decompose_class_A_tilde,
    derived_equivalent,
    gorenstein_dimension,
)
from gentlequivers.generators import generate_random_instance
from gentlequivers.quiver import QuiverWithRelations, rename_arrows, validate_gentle
from gentlequivers.threads import AagInvariant
from gentlequivers.transforms import ReflectionError, can_coreflect, can_reflect, reflect


def F(points):
    return AagInvariant(points)


@pytest.mark.parametrize(
    "points, want",
    [
        ({(4, 2): 1}, ClassDecompositionA(0, 2)),
        ({(0, 3): 1, (3, 0): 1}, ClassDecompositionA(1, 0)),
        ({(4, 5): 1, (2, 1): 1}, None),
        ({(0, 3): 2}, None),
        ({(3, 3): 1}, None),
    ],
)
def test_decompose_A(points, want):
    assert decompose_class_A(F(points)) == want


@pytest.mark.parametrize(
    "points, want",
    [
        ({(0, 3): 1, (3, 3): 1, (2, 1): 1}, ClassDecompositionAtilde(0, 1, 3, 1)),
        ({(1, 1): 2}, ClassDecompositionAtilde(0, 0, 1, 1)),
        ({(4, 5): 1, (2, 1): 1}, None),
        ({(0, 0): 2}, None),
        ({(4, 2): 1}, None),
    ],
)
def test_decompose_A_tilde(points, want):
    assert decompose_class_A_tilde(F(points)) == want


@given(st.integers(0, 6), st.integers(0, 8))
def test_class_A_decomposition_round_trips(m, p):
    d = ClassDecompositionA(m, p)
    assert decompose_class_A(d.invariant()) == d
    assert decompose_class_A_tilde(d.invariant()) is None


@given(st.integers(0, 4), st.integers(0, 4), st.integers(0, 6), st.integers(0, 6))
def test_class_A_tilde_decomposition_round_trips(m1, m2, p, q):
    if p + m1 == 0 or q + m2 == 0:
        return
    d = ClassDecompositionAtilde(m1, m2, p, q)
    got = decompose_class_A_tilde(d.invariant())
    assert got is not None and got.invariant() == d.invariant()
    assert decompose_class_A(d.invariant()) is None


@pytest.mark.parametrize("name, value", [("F1", 1), ("F2", 0), ("F6", 2), ("F3", 3), ("F8", 3)])
def test_gorenstein_values(fixtures, name, value):
    gd = gorenstein_dimension(fixtures[name])
    assert gd.value == value and gd.at_most_one == (value <= 1)


def test_gorenstein_without_forbidden_threads():
    single = validate_gentle(QuiverWithRelations(("x",), (), ()))
    assert gorenstein_dimension(single).at_most_one


def test_classify_fixtures(fixtures):
    c2 = classify(fixtures["F2"])
    assert c2.class_a == ClassDecompositionA(1, 0)
    assert c2.cluster_tilted is ClusterType.TYPE_A and c2.gorenstein.value == 0
    c7 = classify(fixtures["F7"])
    assert c7.class_a is None and c7.class_a_tilde is None and c7.one_cycle and not c7.in_class
    c8 = classify(fixtures["F8"])
    assert c8.class_a_tilde == ClassDecompositionAtilde(0, 1, 3, 1) and c8.cluster_tilted is None
    c5 = classify(fixtures["F5"])
    assert c5.cluster_tilted is ClusterType.TYPE_A_TILDE and c5.type_a_tilde
    assert classify(fixtures["F1"]).tree_type


def test_classification_json(fixtures):
    doc = classify(fixtures["F8"]).to_json()
    assert set(doc) == {
        "gentle", "treeType", "oneCycle", "typeAtilde", "classA", "classAtilde", "clusterTilted", "gorenstein",
    }
    assert doc["classA"] is None
    assert doc["classAtilde"] == {"m1": 0, "m2": 1, "p": 3, "q": 1}


def test_derived_equivalence(fixtures):
    f2 = fixtures["F2"]
    # no rewrite is defined anywhere on the relation-full triangle
    assert not any(can_reflect(f2, x) or can_coreflect(f2, x) for x in f2.vertices)
    relabelled = validate_gentle(rename_arrows(f2.presentation, {"a": "p", "b": "q", "c": "r"}))
    assert derived_equivalent(f2, relabelled) is Equivalence.EQUIVALENT_IN_CLASS
    f6 = fixtures["F6"]
    assert derived_equivalent(f6, reflect(f6, "3")) is Equivalence.EQUIVALENT_IN_CLASS
    assert derived_equivalent(fixtures["F1"], f2) is Equivalence.NOT_EQUIVALENT
    assert derived_equivalent(fixtures["F7"], fixtures["F7"]) is Equivalence.INCONCLUSIVE_EQUAL_INVARIANT
    assert derived_equivalent(fixtures["F1"], fixtures["F6"]) is Equivalence.EQUIVALENT_IN_CLASS


@given(st.integers(0, 2**31), st.sampled_from(["A", "Atilde"]), st.integers(2, 11), st.sampled_from([0.0, 0.5, 1.0]))
def test_class_membership_and_exclusivity(seed, cls, n, frac):
    # classify raises if the two cluster-tilted checks ever disagree
    c = classify(validate_gentle(generate_random_instance(cls, n, frac, seed).body))
    assert (c.class_a is not None) == (cls == "A")
    assert (c.class_a_tilde is not None) == (cls == "Atilde")
    if c.cluster_tilted is not None:
        assert c.gorenstein.at_most_one


def test_classes_on_random_chains(fixtures):
    rng = random.Random(4)
    g = fixtures["F8"]
    for _ in range(20):
        x = rng.choice(g.vertices)
        try:
            g = reflect(g, x)
        except ReflectionError:
            continue
        assert classify(g).class_a_tilde == ClassDecompositionAtilde(0, 1, 3, 1)
