import json
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from qlprob import builders
from qlprob.io import (
    DuplicateDeclaration,
    ParseError,
    UnknownElement,
    ValueOutOfRange,
    document_from_lattice,
    emit_report,
    json_ready,
    lattice_from_document,
    parse_lattice,
    parse_valuation,
    render_number,
    serialize_lattice,
    serialize_valuation,
    to_dot,
)
from tests.conftest import DATA


@pytest.mark.parametrize("name", ["l12", "mo2", "n5", "o6"])
def test_shipped_documents_round_trip(name):
    text = (DATA / f"{name}.lat").read_text()
    doc = parse_lattice(text)
    assert doc.name == name
    canonical = serialize_lattice(doc)
    assert serialize_lattice(parse_lattice(canonical)) == canonical


def test_shipped_l12_matches_builder(l12):
    doc = parse_lattice((DATA / "l12.lat").read_text())
    parsed = lattice_from_document(doc)
    assert parsed.names == l12.names
    assert parsed.neg == l12.neg
    assert (parsed.lattice.meet_table == l12.lattice.meet_table).all()


def test_parse_reports_line_numbers():
    with pytest.raises(ParseError) as err:
        parse_lattice("lattice x\nelement a\nbogus a b\n")
    assert err.value.line == 3


def test_unknown_element_in_cover():
    with pytest.raises(UnknownElement):
        lattice_from_document(parse_lattice(
            "lattice x\nelement a\nelement b\ncover a c\n"))


def test_duplicate_cover_rejected():
    with pytest.raises(DuplicateDeclaration):
        parse_lattice("lattice x\nelement a\nelement b\ncover a b\ncover a b\n")


def test_conflicting_ortho_rejected():
    text = (
        "lattice x\nelement 0\nelement a\nelement b\nelement 1\n"
        "cover 0 a\ncover 0 b\ncover a 1\ncover b 1\n"
        "ortho 0 1\northo a b\northo a 1\n"
    )
    with pytest.raises(DuplicateDeclaration):
        parse_lattice(text)


def test_comments_and_blank_lines_ignored():
    text = "# heading\n\nlattice x  # trailing\nelement a\nelement b\ncover a b\n"
    doc = parse_lattice(text)
    assert doc.elements == ("a", "b")


def test_serialize_orders_covers_canonically(l12):
    doc = document_from_lattice(l12, "l12")
    text = serialize_lattice(doc)
    shipped = (DATA / "l12.lat").read_text()
    assert text == serialize_lattice(parse_lattice(shipped))


def test_valuation_round_trip():
    text = (DATA / "l12_quarter.val").read_text()
    doc = parse_valuation(text)
    assert doc.lattice_name == "l12"
    assert doc.as_dict()["l"] == Fraction(1, 4)
    assert parse_valuation(serialize_valuation(doc)) == doc


def test_valuation_exact_mode_reads_decimals_as_rationals():
    doc = parse_valuation("valuation for x\na = 0.3\n", exact=True)
    assert doc.as_dict()["a"] == Fraction(3, 10)
    doc_f = parse_valuation("valuation for x\na = 0.3\n")
    assert isinstance(doc_f.as_dict()["a"], float)


def test_valuation_range_enforced():
    with pytest.raises(ValueOutOfRange):
        parse_valuation("valuation for x\na = 3/2\n")
    with pytest.raises(ValueOutOfRange):
        parse_valuation("valuation for x\na = -0.25\n")


def test_valuation_duplicate_entry():
    with pytest.raises(DuplicateDeclaration):
        parse_valuation("valuation for x\na = 1/2\na = 1/2\n")


def test_render_number():
    assert render_number(Fraction(3, 4)) == "3/4"
    assert render_number(Fraction(2, 1)) == "2"
    assert render_number(0.5) == "0.5"
    assert render_number(1 / 3) == "0.333333333333"


def test_json_ready_and_emit():
    payload = {"f": Fraction(1, 3), "x": 3.14159265358979, "n": 2, "t": True,
               "nested": [Fraction(1, 2), {"y": 0.1}]}
    ready = json_ready(payload)
    assert ready["f"] == "1/3"
    assert ready["t"] is True
    text = emit_report(payload)
    parsed = json.loads(text)
    assert list(parsed)[0] == "schema" and parsed["schema"] == 1
    assert parsed["x"] == 3.14159265359


def test_emit_rejects_nan():
    with pytest.raises(ValueError):
        emit_report({"x": float("nan")})


def test_dot_output(p3):
    dot = to_dot(p3, "p3")
    assert dot.startswith('digraph "p3"')
    assert dot.count("->") == len(p3.lattice.poset.covers)


name_strategy = st.text(
    alphabet=st.characters(min_codepoint=33, max_codepoint=126,
                           exclude_characters="#"),
    min_size=1, max_size=8,
)


@settings(max_examples=200, deadline=None)
@given(st.text(max_size=300))
def test_parser_is_total(text):
    """Arbitrary junk either parses or raises ParseError, never anything else."""
    try:
        parse_lattice(text)
    except ParseError:
        pass


@settings(max_examples=200, deadline=None)
@given(st.text(max_size=300))
def test_valuation_parser_is_total(text):
    try:
        parse_valuation(text)
    except ParseError:
        pass


@settings(max_examples=100, deadline=None)
@given(
    names=st.lists(name_strategy, min_size=1, max_size=8, unique=True),
    values=st.lists(
        st.one_of(
            st.fractions(min_value=0, max_value=1),
            st.floats(min_value=0, max_value=1, allow_nan=False),
        ),
        min_size=1, max_size=8,
    ),
)
def test_valuation_round_trip_fuzz(names, values):
    entries = tuple(zip(names, values))
    from qlprob.io import ValuationDocument

    doc = ValuationDocument(lattice_name="fuzzed", entries=entries)
    text = serialize_valuation(doc)
    back = parse_valuation(text)
    assert back.lattice_name == "fuzzed"
    for (n1, v1), (n2, v2) in zip(doc.entries, back.entries):
        assert n1 == n2
        if isinstance(v1, Fraction):
            assert v1 == v2
        else:
            assert abs(v1 - v2) <= 1e-12 * max(1.0, abs(v1))
