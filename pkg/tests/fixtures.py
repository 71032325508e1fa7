"""Shared fixture LTSs, transcribed from the worked examples.

All use dense state numbering with the entry state first and the
convergence target as noted in each builder's docstring.
"""

from ltsdiamond.diamond import make_diamond
from ltsdiamond.lts import Lts


def l1():
    """All interleavings of a1.a2 and b; entry 0, exit 5 (6 states, 7 transitions)."""
    return Lts(6, 0, [
        (0, "a1", 1), (1, "a2", 2),
        (0, "b", 3), (1, "b", 4), (2, "b", 5),
        (3, "a1", 4), (4, "a2", 5),
    ], names={0: "entry", 5: "exit"})


L1_DIAMOND = make_diamond([(("a1", "a2"), 1), ("b", 1)])


def l3a():
    """Grid of ba || ca ending in state 7 via a final `a`; entry 0."""
    return Lts(8, 0, _l3_transitions("a"))


def l3b():
    """Same grid but the final transition is `d`; the interleaving reading breaks."""
    return Lts(8, 0, _l3_transitions("d"))


def _l3_transitions(last):
    return [
        (0, "b", 1), (0, "c", 2),
        (1, "a", 3), (1, "c", 4), (2, "b", 4), (2, "a", 5),
        (3, "c", 6), (4, "a", 6), (5, "b", 6),
        (6, last, 7),
    ]


L3_DIAMOND = make_diamond([(("b", "a"), 1), (("c", "a"), 1)])


def l7():
    """Two diamonds from state 0: a||b into 5 and b||c into 6 (neither strict)."""
    return Lts(7, 0, [
        (0, "a", 1), (0, "b", 2), (0, "b", 3), (0, "c", 4),
        (1, "b", 5), (2, "a", 5), (3, "c", 6), (4, "b", 6),
    ])


def l7p():
    """a||b from 0 fails into 3 under identity: state 2 also reaches 4 by a."""
    return Lts(5, 0, [
        (0, "a", 1), (0, "b", 2),
        (1, "b", 3), (2, "a", 3), (2, "a", 4),
    ])


def l8():
    """Trace-equal twin of l1 with a nondeterministic first a1; no b||(a1 a2)."""
    return Lts(8, 0, [
        (0, "b", 1), (0, "a1", 2), (0, "a1", 3),
        (1, "a1", 4), (2, "b", 5), (3, "a2", 6),
        (4, "a2", 7), (5, "a2", 7), (6, "b", 7),
    ])


L8_DIAMOND = make_diamond([("b", 1), (("a1", "a2"), 1)])


def l4a():
    """Cube of three parallel a actions: 8 states, 12 transitions."""
    transitions = []
    for mask in range(8):
        for bit in range(3):
            if not mask & (1 << bit):
                transitions.append((mask, "a", mask | (1 << bit)))
    return Lts(8, 0, transitions)


def l4b():
    """Chain a.a.a: 4 states."""
    return Lts(4, 0, [(0, "a", 1), (1, "a", 2), (2, "a", 3)])


def simple_equivalence():
    """The three trace-equivalent loop LTSs; initial states p, q, r.

    p's LTS has five states (two a-branches, one with an extra c loop exit),
    q's is its bisimulation quotient, r's is the trace-minimal one that is
    not bisimilar to the others.
    """
    p = Lts(5, 0, [
        (0, "a", 1), (1, "b", 2), (2, "c", 0),
        (0, "a", 3), (3, "c", 0), (3, "b", 4), (4, "c", 0),
    ])
    q = Lts(4, 0, [
        (0, "a", 1), (0, "a", 2),
        (2, "c", 0), (1, "b", 3), (2, "b", 3), (3, "c", 0),
    ])
    r = Lts(3, 0, [
        (0, "a", 1), (1, "c", 0), (1, "b", 2), (2, "c", 0),
    ])
    return p, q, r


def chain(labels):
    """A straight-line LTS over the given labels."""
    return Lts(len(labels) + 1, 0,
               [(i, lbl, i + 1) for i, lbl in enumerate(labels)])


def self_loop(label="a"):
    """One state with a single self loop."""
    return Lts(1, 0, [(0, label, 0)])


FIGURE_DIAMOND = make_diamond([
    ("a", 3), ("c", 1), (("a", "b"), 2), (("b", "c", "c"), 1),
])
