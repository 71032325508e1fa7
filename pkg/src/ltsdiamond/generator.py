"""Ground-truth corpus construction: interleaving regions and random LTSs."""

from __future__ import annotations

import random

from .diamond import Diamond
from .lts import Lts
from .oracle import CapExceeded, Convergence


def suffix_closure(diamond: Diamond):
    """All diamonds reachable from `diamond` by repeated single-action tails.

    Includes the diamond itself and the empty diamond; keys of the returned
    dict map each reachable residue to its sorted outgoing (action, residue)
    steps.
    """
    steps = {}
    frontier = [diamond]
    while frontier:
        d = frontier.pop()
        if d in steps:
            continue
        out = []
        for a in sorted(d.head):
            for residue in sorted(d.tail_action(a), key=str):
                out.append((a, residue))
                if residue not in steps:
                    frontier.append(residue)
        steps[d] = tuple(out)
    return steps


def lts_of_diamond(diamond: Diamond, prefix=(), suffix=(), unfold=False,
                   max_states: int = 200_000):
    """Build the full interleaving LTS of a diamond, with optional chains.

    Returns (lts, expected) where expected is the strict convergence spanning
    the diamond region.  By default region states are the reachable suffix
    diamonds (identical residues share a state); unfold=True instead keeps
    every parallel component separate, emitting the full hypercube.
    """
    if diamond.is_empty:
        raise ValueError("diamond must be non-empty")
    prefix = tuple(prefix)
    suffix = tuple(suffix)

    if unfold:
        region_states, region_steps = _unfolded_region(diamond, max_states)
    else:
        steps = suffix_closure(diamond)
        if len(steps) > max_states:
            raise CapExceeded("region would need %d states" % len(steps))
        # entry first, exit last, interior in a stable order
        interior = sorted((d for d in steps if d != diamond and not d.is_empty),
                          key=lambda d: (-d.size, str(d)))
        region_states = [diamond] + interior + [Diamond((), ())]
        region_steps = [(d, a, r) for d, out in steps.items() for a, r in out]

    index = {}
    transitions = []
    for i, _ in enumerate(prefix):
        transitions.append((i, prefix[i], i + 1))
    entry = len(prefix)
    for offset, st in enumerate(region_states):
        index[st] = entry + offset
    exit_state = entry + len(region_states) - 1
    for src, a, dst in region_steps:
        transitions.append((index[src], a, index[dst]))
    for j, lbl in enumerate(suffix):
        transitions.append((exit_state + j, lbl, exit_state + j + 1))

    n = len(prefix) + len(region_states) + len(suffix)
    if n > max_states:
        raise CapExceeded("lts would need %d states" % n)
    lts = Lts(n, 0, transitions, names={entry: "entry", exit_state: "exit"})
    expected = Convergence(entry, diamond, exit_state, True)
    return lts, expected


def _unfolded_region(diamond: Diamond, max_states):
    """Product construction: one component per action copy / sequence copy."""
    components = []
    for a, c in diamond.actions:
        components.extend([(a,)] * c)
    for s, c in diamond.sequences:
        components.extend([s] * c)
    total = 1
    for comp in components:
        total *= len(comp) + 1
        if total > max_states:
            raise CapExceeded("unfolded region would need %d states" % total)

    start = (0,) * len(components)
    order = []
    seen = {start}
    queue = [start]
    steps = []
    while queue:
        state = queue.pop(0)
        order.append(state)
        for i, comp in enumerate(components):
            pos = state[i]
            if pos < len(comp):
                nxt = state[:i] + (pos + 1,) + state[i + 1:]
                steps.append((state, comp[pos], nxt))
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
    # exit (all components finished) must sit last for chain stitching
    end = tuple(len(c) for c in components)
    order.remove(end)
    order.append(end)
    return order, steps


def random_lts(n: int, m: int, k_labels: int, seed: int) -> Lts:
    """Reproducible random LTS: n states, at most m distinct transitions.

    Labels are single letters a, b, c, ...; state 0 is initial; self loops
    allowed; no reachability guarantee.
    """
    if n < 1 or m < 0 or k_labels < 1:
        raise ValueError("need n >= 1, m >= 0, k_labels >= 1")
    rng = random.Random(seed)
    labels = [chr(ord("a") + i) for i in range(k_labels)]
    triples = set()
    for _ in range(m):
        triples.add((rng.randrange(n), rng.choice(labels), rng.randrange(n)))
    return Lts(n, 0, sorted(triples))
