"""Replace maximal strict diamonds with macro-transitions, and re-expand them.

A convergence is only rewritten when its interior states are private (all of
their incoming and outgoing transitions belong to the convergence's own
interleaving structure) and the rewrite does not touch states or transitions
used by another kept rewrite.  Re-expansion rebuilds the canonical suffix
quotient of each macro label, so expand(reduce(l)) is strongly bisimilar to l.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from .detector import DEFAULT_MAX_SIZE, DetectionResult, find_all_diamonds, maximal_strict
from .diamond import Diamond, parse_label, LabelSyntaxError
from .generator import suffix_closure
from .lts import Lts
from .oracle import Convergence


class ReducedLts:
    """An LTS whose edges carry either a plain action label or a Diamond.

    Macro edges (Diamond labels) each stand for one rewritten strict
    convergence; no two of them share interior states by construction.
    """

    __slots__ = ("state_count", "initial", "labels", "edges", "names")

    def __init__(self, state_count, initial, edges, names=None):
        self.state_count = state_count
        self.initial = initial
        self.edges = frozenset(edges)
        self.names = dict(names) if names else {}
        plain = sorted({l for _, l, _ in self.edges if isinstance(l, str)})
        self.labels = tuple(plain)

    def macro_edges(self):
        return sorted(((s, l, t) for s, l, t in self.edges
                       if isinstance(l, Diamond)), key=lambda e: (e[0], str(e[1]), e[2]))

    def plain_edges(self):
        return sorted((s, l, t) for s, l, t in self.edges if isinstance(l, str))

    def __eq__(self, other):
        if not isinstance(other, ReducedLts):
            return NotImplemented
        return (self.state_count == other.state_count
                and self.initial == other.initial and self.edges == other.edges)

    def __hash__(self):
        return hash((self.state_count, self.initial, self.edges))

    def __repr__(self):
        return "ReducedLts(states=%d, edges=%d, macros=%d)" % (
            self.state_count, len(self.edges), len(self.macro_edges()))


def strict_lookup(result: DetectionResult):
    """Index strict convergence records as (source, target) -> set of diamonds."""
    table = defaultdict(set)
    for c in result.convergences:
        if c.strict:
            table[(c.source, c.target)].add(c.diamond)
    return table


def _structure(lts: Lts, conv: Convergence, strict_index):
    """States and transitions of the convergence's interleaving region.

    Forward closure over (state, residue) pairs, keeping only residues that
    are recorded strict convergences into the target.  Returns (states,
    transitions, clean_boundary) or None if some structure transition has no
    valid residue (which a genuinely strict convergence never produces).

    clean_boundary is False when the region re-enters its own endpoints mid
    interleaving (source seen with a different residue, or target with a
    non-empty one); deleting such a region's transitions would cut behaviour
    the endpoints still need, so it must not be rewritten.
    """
    target = conv.target
    pairs = {(conv.source, conv.diamond)}
    stack = [(conv.source, conv.diamond)]
    states = {conv.source}
    covered = set()
    clean = True
    while stack:
        state, residue = stack.pop()
        if residue.is_empty:
            continue
        for lbl, succ in lts.outgoing[state]:
            good = [r for r in residue.tail_action(lbl)
                    if (r.is_empty and succ == target)
                    or r in strict_index.get((succ, target), ())]
            if not good:
                return None
            covered.add((state, lbl, succ))
            states.add(succ)
            for r in good:
                if succ == conv.source and r != conv.diamond:
                    clean = False
                if succ == target and not r.is_empty:
                    clean = False
                if (succ, r) not in pairs:
                    pairs.add((succ, r))
                    stack.append((succ, r))
    return states, covered, clean


def interior_states(lts: Lts, conv: Convergence, detection: DetectionResult = None,
                    max_size: int = DEFAULT_MAX_SIZE):
    """States strictly inside the convergence's interleaving region."""
    if not conv.strict:
        raise ValueError("interior_states needs a strict convergence")
    if detection is None:
        detection = find_all_diamonds(lts, max_size)
    structure = _structure(lts, conv, strict_lookup(detection))
    if structure is None:
        raise ValueError("convergence is not backed by recorded strict residues")
    states, _, _ = structure
    return frozenset(states - {conv.source, conv.target})


@dataclass(frozen=True)
class ReduceResult:
    lts: ReducedLts
    applied: tuple
    skipped: tuple
    truncated: bool


def reduce(lts: Lts, max_size: int = DEFAULT_MAX_SIZE,
           detection: DetectionResult = None) -> ReduceResult:
    """Rewrite private, pairwise-disjoint maximal strict diamonds (size >= 2).

    Kept convergences are chosen greedily by descending size (ties by source,
    then label); each one's interior states and covered transitions are
    removed and replaced by a single macro edge.  Convergences that fail the
    privacy or disjointness conditions are reported in `skipped`.
    """
    if detection is None:
        detection = find_all_diamonds(lts, max_size)
    index = strict_lookup(detection)
    candidates = [c for c in maximal_strict(detection.convergences)
                  if c.diamond.size >= 2]
    candidates.sort(key=lambda c: (-c.diamond.size, c.source, str(c.diamond)))

    applied = []
    skipped = []
    deleted = set()
    used_states = set()
    used_transitions = set()
    plans = []
    for c in candidates:
        structure = _structure(lts, c, index)
        if structure is None:
            skipped.append(c)
            continue
        states, covered, clean_boundary = structure
        interior = states - {c.source, c.target}
        private = clean_boundary and lts.initial not in interior
        for q in interior:
            if not private:
                break
            for s, a in lts.incoming[q]:
                if (s, a, q) not in covered:
                    private = False
                    break
            for a, t in lts.outgoing[q]:
                if (q, a, t) not in covered:
                    private = False
                    break
        if not private:
            skipped.append(c)
            continue
        endpoints = {c.source, c.target}
        if (interior & used_states or endpoints & deleted
                or covered & used_transitions):
            skipped.append(c)
            continue
        applied.append(c)
        plans.append((c, interior, covered))
        deleted |= interior
        used_states |= interior | endpoints
        used_transitions |= covered

    removed_transitions = set()
    for _, _, covered in plans:
        removed_transitions |= covered
    survivors = [q for q in range(lts.state_count) if q not in deleted]
    remap = {q: i for i, q in enumerate(survivors)}
    edges = [(remap[s], a, remap[t]) for s, a, t in lts.transitions
             if (s, a, t) not in removed_transitions]
    for c, _, _ in plans:
        edges.append((remap[c.source], c.diamond, remap[c.target]))
    names = {remap[q]: name for q, name in lts.names.items() if q in remap}
    reduced = ReducedLts(len(survivors), remap[lts.initial] if survivors else 0,
                         edges, names)
    return ReduceResult(reduced, tuple(applied), tuple(skipped),
                        detection.truncated)


def expand(reduced: ReducedLts) -> Lts:
    """Replace each macro edge by the canonical interleaving of its diamond.

    Fresh states are indexed by the reachable suffix diamonds (entry is the
    whole diamond, exit the empty one); plain edges and state numbering are
    kept, fresh states appended deterministically per macro edge.
    """
    transitions = list(reduced.plain_edges())
    next_state = reduced.state_count
    for src, diamond, tgt in reduced.macro_edges():
        steps = suffix_closure(diamond)
        index = {}
        for d in sorted(steps, key=lambda d: (-d.size, str(d))):
            if d == diamond:
                index[d] = src
            elif d.is_empty:
                index[d] = tgt
            else:
                index[d] = next_state
                next_state += 1
        for d, out in steps.items():
            for a, residue in out:
                transitions.append((index[d], a, index[residue]))
    return Lts(next_state, reduced.initial, sorted(transitions),
               names=reduced.names)


def to_reduced(lts: Lts) -> ReducedLts:
    """Reinterpret a plain LTS as reduced: labels in the diamond grammar with
    size >= 2 become macro edges (the .aut format has no separate channel)."""
    edges = []
    for s, label, t in lts.transitions:
        parsed = None
        if "^" in label:
            try:
                parsed = parse_label(label)
            except LabelSyntaxError:
                parsed = None
        if parsed is not None and parsed.size >= 2:
            edges.append((s, parsed, t))
        else:
            edges.append((s, label, t))
    return ReducedLts(lts.state_count, lts.initial, edges, lts.names)
