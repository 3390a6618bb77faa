from pathlib import Path

import pytest

from ctsmin import (
    AntisymmetryViolation,
    Cts,
    Lats,
    NotDownwardClosed,
    ParseError,
    convert_model,
    ex1,
    ex2,
    parse_model,
    serialise_model,
)

from corpus import cts_corpus

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def test_ex1_fixture_matches_builtin():
    parsed = parse_model((FIXTURES / "EX1").read_text())
    built = ex1()
    assert parsed.states == built.states
    assert parsed.actions == built.actions
    assert parsed.conditions == built.conditions
    assert set(parsed.edges()) == set(built.edges())


def test_ex2_fixture_matches_builtin():
    parsed = parse_model((FIXTURES / "EX2").read_text())
    assert set(parsed.edges()) == set(ex2().edges())


def test_fixture_files_are_canonical():
    for name in ("EX1", "EX2"):
        text = (FIXTURES / name).read_text()
        assert serialise_model(parse_model(text)) == text


def test_serialise_is_canonical_on_corpus():
    for m in cts_corpus(40):
        text = serialise_model(m)
        again = parse_model(text)
        assert set(again.edges()) == set(m.edges())
        assert serialise_model(again) == text


SCRAMBLED = """
# comment first
kind: cts   # trailing comment

[actions]
a
[states]
y x
[conditions]
phi
phi'
phi' <= phi
[transitions]
x a y : phi' phi
"""


def test_parse_tolerates_comments_and_section_order():
    m = parse_model(SCRAMBLED)
    assert isinstance(m, Cts)
    assert m.label("x", "a", "y") == {"phi", "phi'"}
    canonical = serialise_model(m)
    assert "x a y : phi phi'" in canonical


def test_lats_kind_round_trip():
    text = serialise_model(convert_model(ex1(), "lats"))
    assert text.startswith("kind: lats\n")
    model = parse_model(text)
    assert isinstance(model, Lats)
    back = convert_model(model, "cts")
    assert set(back.edges()) == set(ex1().edges())


def test_convert_is_identity_on_matching_kind():
    m = ex1()
    assert convert_model(m, "cts") is m
    with pytest.raises(ValueError):
        convert_model(m, "graph")


@pytest.mark.parametrize(
    "text,line,fragment",
    [
        ("", 1, "empty model"),
        ("kind: petri\n", 1, "unknown kind"),
        ("[states]\n", 1, "expected 'kind:"),
        ("kind: cts\n[bogus]\n", 2, "unknown section"),
        ("kind: cts\n[states]\n[states]\n", 3, "duplicate section"),
        ("kind: cts\nloose\n", 2, "outside any section"),
        ("kind: cts\n[conditions]\np q\n", 3, "one condition name"),
        ("kind: cts\n[conditions]\np\np\n", 4, "declared twice"),
        ("kind: cts\n[conditions]\np\np <= q\n", 4, "undeclared condition 'q'"),
        ("kind: cts\n[conditions]\np\np <= p <= p\n", 4, "order lines read"),
        (
            "kind: cts\n[conditions]\np\n[states]\nx\n[actions]\na\n"
            "[transitions]\nx a : p\n",
            9,
            "transitions read",
        ),
        (
            "kind: cts\n[conditions]\np\n[states]\nx\n[actions]\na\n"
            "[transitions]\nx a z : p\n",
            9,
            "undeclared state 'z'",
        ),
        (
            "kind: cts\n[conditions]\np\n[states]\nx\n[actions]\na\n"
            "[transitions]\nx b x : p\n",
            9,
            "undeclared action 'b'",
        ),
        (
            "kind: cts\n[conditions]\np\n[states]\nx\n[actions]\na\n"
            "[transitions]\nx a x : q\n",
            9,
            "undeclared condition 'q'",
        ),
        ("kind: cts\n[states]\nx\n[actions]\n[transitions]\n", 1, "missing section"),
        (
            "kind: cts\n[conditions]\n[states]\nx\n[actions]\na\n[transitions]\n",
            2,
            "at least one condition",
        ),
    ],
)
def test_parse_errors_carry_line_numbers(text, line, fragment):
    with pytest.raises(ParseError) as err:
        parse_model(text)
    assert err.value.line == line
    assert fragment in str(err.value)


NOT_CLOSED = (
    "kind: cts\n[conditions]\nphi\nphi'\nphi' <= phi\n[states]\nx\n"
    "[actions]\na\n[transitions]\nx a x : phi\n"
)


def test_labels_must_be_downward_closed_unless_closing():
    with pytest.raises(NotDownwardClosed) as err:
        parse_model(NOT_CLOSED)
    assert err.value.line == 11
    closed = parse_model(NOT_CLOSED, close=True)
    assert closed.label("x", "a", "x") == {"phi", "phi'"}


def test_order_cycle_is_rejected():
    text = (
        "kind: cts\n[conditions]\np\nq\np <= q\nq <= p\n[states]\nx\n"
        "[actions]\na\n[transitions]\nx a x : p q\n"
    )
    with pytest.raises(AntisymmetryViolation):
        parse_model(text)
