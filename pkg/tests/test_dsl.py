import pytest
from hypothesis import given
from hypothesis import strategies as st

from gentlequivers.dsl import DslError, QuiverDocument, emit_dsl, load, parse_dsl
from gentlequivers.fixtures import NAMES, fixture_text
from gentlequivers.generators import generate_random_instance
from gentlequivers.quiver import validate_gentle
from gentlequivers.threads import AagInvariant, aag_invariant


def kinds(text):
    with pytest.raises(DslError) as exc:
        parse_dsl(text)
    return [d.kind for d in exc.value.diagnostics]


def test_f1_text():
    doc = parse_dsl(fixture_text("F1"))
    assert doc.name == "F1"
    assert len(doc.body.vertices) == 3 and len(doc.body.arrows) == 2 and not doc.body.relations


def test_f8_end_to_end():
    doc = parse_dsl(fixture_text("F8"))
    assert len(doc.body.arrows) == 7 and len(doc.body.relations) == 5
    assert aag_invariant(validate_gentle(doc.body)) == AagInvariant({(0, 3): 1, (3, 3): 1, (2, 1): 1})


@pytest.mark.parametrize("name", NAMES)
def test_fixture_round_trip_is_byte_stable(name):
    doc = parse_dsl(fixture_text(name))
    text = emit_dsl(doc)
    assert parse_dsl(text) == doc
    assert emit_dsl(parse_dsl(text)) == text


def test_emit_sorts_everything():
    doc = parse_dsl("quiver Z\nvertices 3 1 2\narrow b 2 3\narrow a 1 2\nrel b a\n")
    lines = [ln for ln in emit_dsl(doc).splitlines() if not ln.startswith("#")]
    assert lines == ["quiver Z", "vertices 1 2 3", "arrow a 1 2", "arrow b 2 3", "rel b a"]


def test_comments_and_blank_lines_are_ignored():
    doc = parse_dsl("# hi\n\nquiver Z   # trailing\nvertices 1 2\n\narrow a 1 2 # x\n")
    assert doc == QuiverDocument("Z", doc.body) and len(doc.body.arrows) == 1


def test_spans_point_at_declarations():
    doc = parse_dsl("quiver Z\nvertices 3 1 2\narrow b 2 3\narrow a 1 2\nrel b a\n")
    assert doc.spans[("vertex", "1")] == (2, 12)
    assert doc.spans[("arrow", "a")] == (4, 7)
    assert doc.spans[("rel", "b", "a")] == (5, 5)


def test_non_composable_relation_is_positioned():
    with pytest.raises(DslError) as exc:
        parse_dsl("quiver Z\nvertices 1 2 3\narrow a 1 2\narrow b 2 3\nrel a b\n")
    (d,) = exc.value.diagnostics
    assert (d.line, d.column, d.kind) == (5, 5, "BadRelationComposability")
    assert str(d).startswith("5:5: BadRelationComposability")


@pytest.mark.parametrize(
    "text, kind",
    [
        ("quiver Z\nvertices 1 1\n", "DuplicateVertex"),
        ("quiver Z\nvertices 1 2\narrow a 1 2\narrow a 2 1\n", "DuplicateArrow"),
        ("quiver Z\nvertices 1\narrow a 1 9\n", "UndeclaredVertex"),
        ("quiver Z\nvertices 1 2\narrow a 1 2\nrel a zz\n", "DanglingRelation"),
        ("quiver Z\nvertices 1\narrow a 1 1\nrel a a\nrel a a\n", "DuplicateRelation"),
        ("quiver Z\nvertices 1\nwhat is this\n", "Syntax"),
        ("quiver Z\nvertices 1\narrow a 1\n", "Syntax"),
        ("quiver bad-name\nvertices 1\n", "BadToken"),
        ("vertices 1\n", "Syntax"),
    ],
)
def test_error_kinds(text, kind):
    assert kind in kinds(text)


def test_all_errors_are_collected():
    text = "quiver X\nvertices 1 2\narrow a 1 2\narrow b 1 2\nrel a b\narrow a 2 1\nrel a zz\nnope\n"
    with pytest.raises(DslError) as exc:
        parse_dsl(text)
    diags = exc.value.diagnostics
    assert len(diags) >= 3
    assert [(d.line, d.column) for d in diags] == sorted((d.line, d.column) for d in diags)


def test_emit_accepts_a_quiver(fixtures):
    text = emit_dsl(fixtures["F5"], "K")
    assert parse_dsl(text).name == "K"


def test_load(tmp_path):
    p = tmp_path / "q.quiver"
    p.write_text(fixture_text("F3"), encoding="utf-8")
    assert load(p) == parse_dsl(fixture_text("F3"))


@given(st.sampled_from(["A", "Atilde"]), st.integers(2, 12), st.floats(0, 1), st.integers(0, 2**32 - 1))
def test_generated_documents_round_trip(cls, n, frac, seed):
    doc = generate_random_instance(cls, n, frac, seed)
    text = emit_dsl(doc)
    assert parse_dsl(text) == doc
    assert emit_dsl(parse_dsl(text)) == text
