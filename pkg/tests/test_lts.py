import logging

import pytest
from hypothesis import given, strategies as st

import fixtures as fx
from ltsdiamond.lts import (AutFormatError, Lts, MalformedHeader, StateOutOfRange,
                            UnterminatedQuote, minimal_alphabet, parse_aut,
                            write_aut, write_dot)
from ltsdiamond.generator import random_lts

CHAIN_DOC = 'des (0,2,3)\n(0,"a",1)\n(1,"b",2)'


def l1_document():
    return write_aut(fx.l1())


def test_parse_minimal_chain():
    lts = parse_aut(CHAIN_DOC)
    assert lts.state_count == 3
    assert lts.initial == 0
    assert lts.transitions == {(0, "a", 1), (1, "b", 2)}


def test_parse_l1_document():
    lts = parse_aut(l1_document())
    assert lts.state_count == 6
    assert len(lts.transitions) == 7
    # the entry state offers exactly the two first actions of the region
    assert {lbl for lbl, _ in lts.outgoing[0]} == {"a1", "b"}


def test_parse_single_state():
    lts = parse_aut("des (0,0,1)")
    assert lts.state_count == 1
    assert lts.transitions == frozenset()


def test_parse_unquoted_labels():
    lts = parse_aut("des (0,1,2)\n(0,tau,1)")
    assert lts.transitions == {(0, "tau", 1)}


def test_write_single_state():
    assert write_aut(Lts(1, 0, [])) == "des (0,0,1)\n"


def test_write_chain_exact_body():
    assert write_aut(parse_aut(CHAIN_DOC)) == CHAIN_DOC + "\n"


def test_l1_write_is_stable_and_round_trips():
    doc = l1_document()
    again = parse_aut(doc)
    assert write_aut(again) == doc
    assert again == fx.l1()


def test_malformed_header():
    with pytest.raises(MalformedHeader):
        parse_aut("desc (0,0,1)")
    with pytest.raises(MalformedHeader):
        parse_aut("")
    with pytest.raises(MalformedHeader):
        parse_aut('des (0,2,3)\n(0,"a",1)')  # declared 2, found 1


def test_state_out_of_range():
    with pytest.raises(StateOutOfRange):
        parse_aut('des (0,1,2)\n(0,"a",5)')
    with pytest.raises(StateOutOfRange):
        parse_aut("des (9,0,2)")


def test_unterminated_quote():
    with pytest.raises(UnterminatedQuote):
        parse_aut('des (0,1,2)\n(0,"a,1)')


def test_bad_body_line():
    with pytest.raises(AutFormatError):
        parse_aut("des (0,1,2)\nnot a transition")


def test_duplicate_transitions_warn_and_dedupe(caplog):
    doc = 'des (0,2,2)\n(0,"a",1)\n(0,"a",1)'
    with caplog.at_level(logging.WARNING, logger="ltsdiamond.lts"):
        lts = parse_aut(doc)
    assert len(lts.transitions) == 1
    assert any("duplicate" in rec.message for rec in caplog.records)


@given(st.integers(1, 8), st.integers(0, 16), st.integers(1, 3), st.integers(0, 10_000))
def test_round_trip_random(n, m, k, seed):
    lts = random_lts(n, m, k, seed)
    back = parse_aut(write_aut(lts))
    assert back.state_count == lts.state_count
    assert back.initial == lts.initial
    assert back.transitions == lts.transitions


@given(st.integers(1, 8), st.integers(0, 16), st.integers(1, 3), st.integers(0, 10_000))
def test_index_coherence(n, m, k, seed):
    lts = random_lts(n, m, k, seed)
    from_out = {(src, lbl, dst) for src in range(n) for lbl, dst in lts.outgoing[src]}
    from_in = {(src, lbl, dst) for dst in range(n) for src, lbl in lts.incoming[dst]}
    assert from_out == lts.transitions
    assert from_in == lts.transitions


def test_minimal_alphabet():
    assert minimal_alphabet(("a",)) == {"a"}
    assert minimal_alphabet(("b", "c", "c")) == {"b", "c"}
    assert minimal_alphabet(("a", "b", "a", "b")) == {"a", "b"}


@given(st.lists(st.sampled_from("abc"), min_size=1, max_size=8))
def test_minimal_alphabet_bounds(seq):
    alpha = minimal_alphabet(tuple(seq))
    assert 1 <= len(alpha) <= len(seq)


def test_dot_single_state():
    dot = write_dot(Lts(1, 0, []))
    assert dot.startswith("digraph")
    assert "->" not in dot
    assert "0 [shape=doublecircle]" in dot


def test_dot_chain():
    dot = write_dot(parse_aut(CHAIN_DOC))
    assert dot.count("->") == 2
    assert '0 -> 1 [label="a"]' in dot


def test_dot_macro_edge():
    from ltsdiamond.reducer import reduce

    reduced = reduce(fx.l1(), 6).lts
    dot = write_dot(reduced)
    assert 'label="(a1 a2)^1 || b^1"' in dot
    assert "arrowhead=normalnormal" in dot
    assert dot.count("->") == 1
