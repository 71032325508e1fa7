"""Strong bisimulation partition refinement, quotients, and diamond equivalence."""

from __future__ import annotations

from dataclasses import dataclass

from .detector import DEFAULT_MAX_SIZE, find_all_diamonds
from .lts import Lts


@dataclass(frozen=True)
class Partition:
    """Disjoint blocks covering all states; class_of[q] is q's block index."""
    blocks: tuple
    class_of: tuple

    def same_block(self, q1, q2):
        return self.class_of[q1] == self.class_of[q2]


def bisim_partition(lts: Lts) -> Partition:
    """Coarsest strong-bisimulation partition, by signature refinement.

    States are repeatedly split on their set of (action, successor block)
    pairs until stable.  Block ids are assigned in order of first occurrence
    by state index, so the result is deterministic.
    """
    n = lts.state_count
    class_of = [0] * n
    while True:
        sigs = {}
        new = []
        for q in range(n):
            sig = (class_of[q],
                   frozenset((a, class_of[t]) for a, t in lts.outgoing[q]))
            new.append(sigs.setdefault(sig, len(sigs)))
        if new == class_of:
            break
        class_of = new
    blocks = [[] for _ in range(max(class_of) + 1)] if n else []
    for q, b in enumerate(class_of):
        blocks[b].append(q)
    return Partition(tuple(tuple(b) for b in blocks), tuple(class_of))


def quotient(lts: Lts, partition: Partition) -> Lts:
    """The quotient LTS: one state per block, transitions lifted."""
    class_of = partition.class_of
    transitions = sorted({(class_of[s], a, class_of[t]) for s, a, t in lts.transitions})
    n = len(partition.blocks)
    initial = class_of[lts.initial] if lts.state_count else 0
    return Lts(n, initial, transitions)


def minimize(lts: Lts) -> Lts:
    """Smallest LTS strongly bisimilar to the input (no two states bisimilar)."""
    return quotient(lts, bisim_partition(lts))


def disjoint_union(l1: Lts, l2: Lts):
    """One LTS holding both, with a shared interned alphabet.

    Returns (union, offset); l2's state i becomes offset + i, and the union's
    initial state is l1's.
    """
    offset = l1.state_count
    transitions = sorted(l1.transitions)
    transitions += sorted((s + offset, a, t + offset) for s, a, t in l2.transitions)
    union = Lts(offset + l2.state_count, l1.initial if l1.state_count else 0,
                transitions)
    return union, offset


def bisimilar(l1: Lts, l2: Lts) -> bool:
    """Whether the two LTSs' initial states are strongly bisimilar."""
    if l1.state_count == 0 or l2.state_count == 0:
        return l1.state_count == l2.state_count
    union, offset = disjoint_union(l1, l2)
    part = bisim_partition(union)
    return part.same_block(l1.initial, l2.initial + offset)


def bounded_traces(lts: Lts, state: int, k: int):
    """All label sequences of length <= k enabled from `state` (includes ())."""
    if k < 0:
        raise ValueError("k must be >= 0")
    traces = {()}
    frontier = {(): {state}}
    for _ in range(k):
        nxt = {}
        for prefix, states in frontier.items():
            for q in states:
                for a, t in lts.outgoing[q]:
                    nxt.setdefault(prefix + (a,), set()).add(t)
        if not nxt:
            break
        traces.update(nxt)
        frontier = nxt
    return frozenset(traces)


def diamond_equivalent(lts: Lts, q1: int, q2: int,
                       max_size: int = DEFAULT_MAX_SIZE) -> bool:
    """Whether q1 and q2 admit the same diamond convergences up to max_size,
    with targets compared up to strong bisimilarity.

    Convergence up to an equivalence coincides with plain convergence on the
    bisimulation quotient, so the check runs the detector there: the two
    states' blocks must produce identical (diamond, target block) sets.  The
    verdict is certified only up to max_size.
    """
    if q1 == q2:
        return True
    part = bisim_partition(lts)
    b1, b2 = part.class_of[q1], part.class_of[q2]
    if b1 == b2:
        return True
    result = find_all_diamonds(quotient(lts, part), max_size)
    records = {}
    for c in result.convergences:
        records.setdefault(c.source, set()).add((c.diamond, c.target))
    return records.get(b1, set()) == records.get(b2, set())
