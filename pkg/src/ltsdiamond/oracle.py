"""Reference convergence checking and brute-force enumeration.

check_convergence evaluates the convergence definition by direct recursion:
a state converges with a diamond into a target iff every head action leads
to a successor that strictly converges with the corresponding residue, and
(for strict convergence) every outgoing transition is matched by some
residue.  This code is deliberately independent of the backward-search
detector so the two can be compared.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diamond import Diamond, EMPTY, make_diamond
from .lts import Lts, minimal_alphabet


class CapExceeded(RuntimeError):
    """Exhaustive enumeration would exceed the configured budget."""


@dataclass(frozen=True)
class Convergence:
    """One discovered fact: source converges with diamond into target.

    strict=True means the exclusive (all outgoing transitions covered)
    relation holds, which implies the plain relation.
    """
    source: int
    diamond: Diamond
    target: int
    strict: bool

    def key(self):
        return (self.source, self.target, str(self.diamond))


def sort_convergences(convs):
    return tuple(sorted(convs, key=Convergence.key))


class ConvergenceChecker:
    """Memoized direct evaluation for one (lts, target, equivalence) scope.

    `class_of` maps states to equivalence block ids; None means identity.
    The memo key is (state, diamond, strict); the target's class is fixed
    per checker, so checks up to different equivalences never share a cache.
    """

    def __init__(self, lts: Lts, target: int, class_of=None):
        self.lts = lts
        self.target = target
        self.class_of = class_of
        self._cache = {}

    def _same_as_target(self, state):
        if self.class_of is None:
            return state == self.target
        return self.class_of[state] == self.class_of[self.target]

    def check(self, source: int, diamond: Diamond, strict: bool) -> bool:
        if diamond.is_empty:
            return self._same_as_target(source)
        key = (source, diamond, strict)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        out = self.lts.outgoing[source]
        check = self.check
        ok = True
        for a in diamond.head:
            succs = [dst for lbl, dst in out if lbl == a]
            if not succs:
                ok = False
                break
            for residue in diamond.tail_action(a):
                for q in succs:
                    if check(q, residue, True):
                        break
                else:
                    ok = False
                    break
            if not ok:
                break
        if ok and strict:
            head = diamond.head
            for lbl, dst in out:
                if lbl not in head:
                    ok = False
                    break
                for residue in diamond.tail_action(lbl):
                    if check(dst, residue, True):
                        break
                else:
                    ok = False
                    break
        self._cache[key] = ok
        return ok


def check_convergence(lts, source, diamond, target, strict, class_of=None):
    """One-shot convergence test (fresh memo per call)."""
    return ConvergenceChecker(lts, target, class_of).check(source, diamond, strict)


def walk_sequences(lts: Lts, max_len: int):
    """All distinct label sequences of walks of length 2..max_len, per level.

    Level-by-level set construction keeps the cost bounded by the number of
    distinct sequences rather than the number of walks.
    """
    level = {q: {(lbl,) for lbl, _ in lts.outgoing[q]} for q in range(lts.state_count)}
    collected = set()
    for _ in range(max_len - 1):
        nxt = {}
        for q in range(lts.state_count):
            seqs = set()
            for lbl, dst in lts.outgoing[q]:
                for tail in level[dst]:
                    seqs.add((lbl,) + tail)
            nxt[q] = seqs
            collected.update(seqs)
        level = nxt
    return {s for s in collected if len(minimal_alphabet(s)) >= 2}


def _path_letter_multisets(lts: Lts, target: int, max_len: int):
    """For each state and length L, the letter multisets of paths into target."""
    table = {(target, 0): {()}}
    for length in range(1, max_len + 1):
        for q in range(lts.state_count):
            bags = set()
            for lbl, dst in lts.outgoing[q]:
                for bag in table.get((dst, length - 1), ()):
                    bags.add(tuple(sorted(bag + (lbl,))))
            if bags:
                table[(q, length)] = bags
    return table


class _CandidateFactory:
    """Decomposes letter multisets into canonical diamonds, memoized per bag.

    The sequence pool (label sequences of actual walks) is fixed per factory;
    decomposition picks a non-decreasing multiset of pool sequences fitting
    the bag, with leftover letters becoming action counts.
    """

    def __init__(self, seq_pool, budget):
        self.pool = list(seq_pool)
        self.needs = []
        for s in self.pool:
            need = {}
            for l in s:
                need[l] = need.get(l, 0) + 1
            self.needs.append(tuple(need.items()))
        self.budget = budget
        self.cache = {}

    def decompose(self, bag):
        hit = self.cache.get(bag)
        if hit is not None:
            return hit
        remaining = {}
        for l in bag:
            remaining[l] = remaining.get(l, 0) + 1
        fits = [i for i, s in enumerate(self.pool)
                if len(s) <= len(bag)
                and all(remaining.get(l, 0) >= c for l, c in self.needs[i])]
        out = []
        self._rec(remaining, fits, 0, [], out)
        result = tuple(out)
        self.cache[bag] = result
        return result

    def _rec(self, remaining, fits, start, chosen, out):
        if self.budget[0] <= 0:
            raise CapExceeded("candidate budget exhausted")
        self.budget[0] -= 1
        entries = list(chosen)
        entries.extend(remaining.items())
        out.append(make_diamond(entries))
        for j in range(start, len(fits)):
            i = fits[j]
            ok = True
            for l, c in self.needs[i]:
                if remaining.get(l, 0) < c:
                    ok = False
                    break
            if not ok:
                continue
            nxt = dict(remaining)
            for l, c in self.needs[i]:
                v = nxt[l] - c
                if v:
                    nxt[l] = v
                else:
                    del nxt[l]
            self._rec(nxt, fits, j, chosen + [(self.pool[i], 1)], out)


def enumerate_convergences_oracle(lts: Lts, target: int, max_size: int,
                                  budget: int = 2_000_000):
    """All convergences into `target` with diamond size 1..max_size.

    Candidates are canonical diamonds assembled from the letter multisets of
    actual paths into the target, with sequence components restricted to
    label sequences of actual walks (a converging diamond's interleavings
    all occur as paths, so the restriction is sound).  Intended for small
    inputs; raises CapExceeded past the candidate budget.
    """
    if max_size < 1:
        raise ValueError("max_size must be >= 1")
    factory = _shared_factory(lts, max_size, budget)
    bags = _path_letter_multisets(lts, target, max_size)
    checker = ConvergenceChecker(lts, target)
    found = []
    for source in range(lts.state_count):
        candidates = set()
        for length in range(1, max_size + 1):
            for bag in bags.get((source, length), ()):
                candidates.update(factory.decompose(bag))
        for cand in candidates:
            if cand.is_empty:
                continue
            if checker.check(source, cand, False):
                strict = checker.check(source, cand, True)
                found.append(Convergence(source, cand, target, strict))
    return sort_convergences(found)


_FACTORY_CACHE = {}


def _shared_factory(lts, max_size, budget):
    # Walks and bag decompositions are target-independent; reuse them across
    # the per-target oracle calls on one Lts (keyed weakly by identity).
    key = (id(lts), max_size)
    hit = _FACTORY_CACHE.get(key)
    if hit is not None and hit[0] is lts:
        return hit[1]
    seq_pool = sorted(s for s in walk_sequences(lts, max_size) if len(s) <= max_size)
    factory = _CandidateFactory(seq_pool, [budget])
    if len(_FACTORY_CACHE) > 8:
        _FACTORY_CACHE.clear()
    _FACTORY_CACHE[key] = (lts, factory)
    return factory


def enumerate_convergences_exhaustive(lts: Lts, target: int, max_size: int,
                                      budget: int = 2_000_000):
    """Slow reference: candidates over all abstract sequences, no path pruning.

    Used to validate the pruned enumerator on tiny instances.
    """
    labels = sorted(lts.labels)

    def all_sequences(max_len):
        seqs = [(l,) for l in labels]
        out = []
        for _ in range(max_len - 1):
            seqs = [s + (l,) for s in seqs for l in labels]
            out.extend(s for s in seqs if len(minimal_alphabet(s)) >= 2)
        return out

    seq_pool = sorted(s for s in all_sequences(max_size) if len(s) <= max_size)

    candidates = {EMPTY}
    for s in seq_pool:
        grown = set()
        for d in candidates:
            top = (max_size - d.size) // len(s)
            for c in range(1, top + 1):
                grown.add(make_diamond(list(d.actions) + list(d.sequences) + [(s, c)]))
        candidates |= grown
    full = set(candidates)
    for l in labels:
        grown = set()
        for d in candidates:
            for c in range(1, max_size - d.size + 1):
                grown.add(make_diamond(list(d.actions) + list(d.sequences) + [(l, c)]))
        candidates |= grown
        full |= grown
    if len(full) > budget:
        raise CapExceeded("exhaustive candidate space too large")

    checker = ConvergenceChecker(lts, target)
    found = []
    for source in range(lts.state_count):
        for cand in full:
            if cand.is_empty:
                continue
            if checker.check(source, cand, False):
                strict = checker.check(source, cand, True)
                found.append(Convergence(source, cand, target, strict))
    return sort_convergences(found)
