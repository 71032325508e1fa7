"""Finite labelled transition systems: data model, .aut parsing/serialization, DOT export.

States are dense integers 0..n-1.  Action labels are interned strings; the
interning table lives on the Lts (`labels`, first-occurrence order) and is
bijective: equal texts are the same action.  Action sequences are non-empty
tuples of labels.
"""

from __future__ import annotations

import logging
import re
from typing import Iterable

log = logging.getLogger(__name__)


class AutFormatError(ValueError):
    """A .aut document could not be parsed."""


class MalformedHeader(AutFormatError):
    pass


class StateOutOfRange(AutFormatError):
    pass


class UnterminatedQuote(AutFormatError):
    pass


def validate_label(text: str) -> str:
    if not text:
        raise ValueError("action label must be non-empty")
    if '"' in text or "\n" in text:
        raise ValueError("action label may not contain quotes or newlines: %r" % text)
    return text


def minimal_alphabet(seq: Iterable[str]) -> frozenset:
    """The set of distinct actions occurring in a sequence."""
    return frozenset(seq)


class Lts:
    """Immutable labelled transition system with incoming/outgoing adjacency.

    `outgoing[q]` is a sorted tuple of (label, target); `incoming[q]` a sorted
    tuple of (source, label).  Duplicate transition triples are collapsed
    (the transition relation is a set).
    """

    __slots__ = ("state_count", "initial", "labels", "transitions",
                 "outgoing", "incoming", "names", "_label_ids")

    def __init__(self, state_count, initial, transitions, names=None):
        if state_count < 0:
            raise ValueError("state_count must be non-negative")
        if state_count > 0 and not (0 <= initial < state_count):
            raise StateOutOfRange("initial state %d out of range" % initial)
        label_ids = {}
        triples = []
        seen = set()
        for src, label, dst in transitions:
            if not (0 <= src < state_count and 0 <= dst < state_count):
                raise StateOutOfRange("transition (%r,%r,%r) out of range" % (src, label, dst))
            validate_label(label)
            triple = (src, label, dst)
            if triple in seen:
                continue
            seen.add(triple)
            if label not in label_ids:
                label_ids[label] = len(label_ids)
            triples.append(triple)

        outs = [[] for _ in range(state_count)]
        ins = [[] for _ in range(state_count)]
        for src, label, dst in triples:
            outs[src].append((label, dst))
            ins[dst].append((src, label))

        self.state_count = state_count
        self.initial = initial
        self.labels = tuple(label_ids)
        self.transitions = frozenset(triples)
        self.outgoing = tuple(tuple(sorted(o)) for o in outs)
        self.incoming = tuple(tuple(sorted(i)) for i in ins)
        self.names = dict(names) if names else {}
        self._label_ids = label_ids

    def label_id(self, label):
        return self._label_ids[label]

    def transition_count(self):
        return len(self.transitions)

    def successors(self, state, label):
        return [dst for lbl, dst in self.outgoing[state] if lbl == label]

    def __eq__(self, other):
        if not isinstance(other, Lts):
            return NotImplemented
        return (self.state_count == other.state_count
                and self.initial == other.initial
                and self.transitions == other.transitions)

    def __hash__(self):
        return hash((self.state_count, self.initial, self.transitions))

    def __repr__(self):
        return "Lts(states=%d, transitions=%d, initial=%d)" % (
            self.state_count, len(self.transitions), self.initial)


_HEADER_RE = re.compile(r"des\s*\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)\s*$")
_QUOTED_RE = re.compile(r"\(\s*(\d+)\s*,\s*\"([^\"\n]*)\"\s*,\s*(\d+)\s*\)\s*$")
_BARE_RE = re.compile(r"\(\s*(\d+)\s*,\s*([^,\"\s]+)\s*,\s*(\d+)\s*\)\s*$")


def parse_aut(text: str) -> Lts:
    """Parse an Aldebaran .aut document.

    Header `des (<init>,<m>,<n>)`, then m body lines `(<src>,"<label>",<dst>)`
    (label may be unquoted when it contains no comma, space or quote).
    Duplicate transition lines are deduplicated with a warning.
    """
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln]
    if not lines:
        raise MalformedHeader("empty document")
    header = _HEADER_RE.match(lines[0])
    if header is None:
        raise MalformedHeader("bad header line: %r" % lines[0])
    initial, m, n = (int(g) for g in header.groups())
    body = lines[1:]
    if len(body) != m:
        raise MalformedHeader("header declares %d transitions, found %d" % (m, len(body)))
    if n == 0 and (m > 0 or initial > 0):
        raise MalformedHeader("zero states but transitions or initial declared")

    triples = []
    seen = set()
    for ln in body:
        match = _QUOTED_RE.match(ln)
        if match is None:
            if '"' in ln:
                raise UnterminatedQuote("bad quoting in line: %r" % ln)
            match = _BARE_RE.match(ln)
            if match is None:
                raise AutFormatError("bad transition line: %r" % ln)
        src, label, dst = int(match.group(1)), match.group(2), int(match.group(3))
        if not (0 <= src < n and 0 <= dst < n):
            raise StateOutOfRange("state out of range in line: %r" % ln)
        if (src, label, dst) in seen:
            log.warning("duplicate transition %r dropped", (src, label, dst))
            continue
        seen.add((src, label, dst))
        triples.append((src, label, dst))
    if n > 0 and initial >= n:
        raise StateOutOfRange("initial state %d out of range" % initial)
    return Lts(n, initial, triples)


def _edge_triples(x):
    # Lts stores .transitions; ReducedLts stores .edges (labels may be Diamond).
    edges = getattr(x, "transitions", None)
    if edges is None:
        edges = x.edges
    return edges


def write_aut(x) -> str:
    """Serialize an Lts (or ReducedLts) deterministically.

    Transitions are sorted by (source, label text, target); labels are always
    quoted.  parse_aut(write_aut(l)) reproduces l with identical numbering.
    """
    edges = sorted((src, str(label), dst) for src, label, dst in _edge_triples(x))
    out = ["des (%d,%d,%d)" % (x.initial, len(edges), x.state_count)]
    out.extend('(%d,"%s",%d)' % e for e in edges)
    return "\n".join(out) + "\n"


def write_dot(x, name="lts") -> str:
    """Render an Lts or ReducedLts as a Graphviz digraph.

    The initial state is drawn as a double circle.  Macro edges (labels that
    are not plain strings) get the diamond label text and a doubled arrowhead.
    """
    node_names = getattr(x, "names", None) or {}
    out = ["digraph %s {" % name, "  node [shape=circle];"]
    for q in range(x.state_count):
        attrs = []
        if q in node_names:
            attrs.append('label="%s"' % node_names[q])
        if q == x.initial:
            attrs.append("shape=doublecircle")
        out.append("  %d%s;" % (q, " [%s]" % ", ".join(attrs) if attrs else ""))
    decorated = sorted(((s, str(l), d), not isinstance(l, str))
                       for s, l, d in _edge_triples(x))
    for (src, text, dst), macro in decorated:
        attr = 'label="%s"' % text
        if macro:
            attr += ", arrowhead=normalnormal"
        out.append("  %d -> %d [%s];" % (src, dst, attr))
    return "\n".join(out) + "\n}\n"
