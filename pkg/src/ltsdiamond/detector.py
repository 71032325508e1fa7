"""Backward breadth-first discovery of all diamond convergences per target.

For one target state, seed with every incoming transition (single-action
diamonds; strict when that transition is its source's only outgoing one),
then grow diamonds one action at a time: for each queued strict convergence
and each incoming transition of its state, hypothesize the inverse tails and
verify them against the already-populated table.  The queue is a min-heap on
diamond size (FIFO within one size), which makes the step precondition -- all
smaller diamonds already recorded -- hold by construction.
"""

from __future__ import annotations

import heapq
import itertools
from collections import defaultdict
from dataclasses import dataclass

from .diamond import Diamond, is_prefix
from .lts import Lts
from .oracle import Convergence, ConvergenceChecker, sort_convergences

DEFAULT_MAX_SIZE = 64


class PreconditionViolated(RuntimeError):
    """The table is missing an entry the step algorithm relies on."""


class OverlapViolation(RuntimeError):
    """Two prefix-incomparable strict convergences share a source state."""


@dataclass(frozen=True)
class StepResult:
    """Hypotheses that converged in one step call, split by strictness."""
    strict: frozenset
    non_strict: frozenset
    truncated: bool

    @property
    def outcome(self):
        if self.strict:
            return "strict"
        if self.non_strict:
            return "non-strict"
        return "none"


class ConvergenceTable:
    """Discovery state for one target: omega map and per-state strict flags.

    omega[q] holds every (diamond, target) convergence found from q; the
    strict flag says whether any of them is strict (prefix ordering of
    strict diamonds makes one bit per state sufficient).  Per-record
    strictness is kept alongside so results can be flattened faithfully.
    """

    def __init__(self, target: int):
        self.target = target
        self.omega = defaultdict(set)
        self.strict_flag = defaultdict(bool)
        self.strict_records = set()
        self.truncated = False

    def record(self, source, diamond, strict):
        self.omega[source].add((diamond, self.target))
        if strict:
            self.strict_flag[source] = True
            self.strict_records.add((source, diamond))

    def convergences(self):
        out = []
        for source, entries in self.omega.items():
            for diamond, target in entries:
                out.append(Convergence(source, diamond, target,
                                       (source, diamond) in self.strict_records))
        return sort_convergences(out)


def step(lts: Lts, source: int, action: str, mid: int, diamond: Diamond,
         target: int, table: ConvergenceTable,
         max_size: int = DEFAULT_MAX_SIZE) -> StepResult:
    """Try to grow the known strict convergence (mid, diamond) backward.

    Requires source --action--> mid and (diamond, target) recorded strict at
    mid.  Every inverse-tail hypothesis is checked for coverage (each head
    action and each residue witnessed by a strict successor record); all
    convergent hypotheses are recorded, not just the first, and the strict
    flag of source is updated per hypothesis.

    Lookups use per-record strictness rather than the per-state flag: a
    state can hold a strict record of one diamond alongside a non-strict
    record of exactly the residue under test, so the per-state bit would
    accept hypotheses that the convergence definition rejects.
    """
    if target != table.target:
        raise ValueError("step called against a table for a different target")
    if (diamond, target) not in table.omega.get(mid, ()) \
            or (mid, diamond) not in table.strict_records:
        raise PreconditionViolated(
            "missing strict entry (%d, %s) for target %d" % (mid, diamond, target))

    out = lts.outgoing[source]
    strict_recs = table.strict_records
    strict_found = []
    non_strict_found = []
    truncated = False
    for hyp in sorted(diamond.inverse_tail(action), key=str):
        if hyp.size > max_size:
            truncated = True
            continue
        covered = True
        for a in hyp.head:
            residues = set(hyp.tail_action(a))
            for lbl, succ in out:
                if lbl != a:
                    continue
                residues = {r for r in residues if (succ, r) not in strict_recs}
                if not residues:
                    break
            if residues:
                covered = False
                break
        if not covered:
            continue
        strict = True
        for lbl, succ in out:
            if lbl not in hyp.head:
                strict = False
                break
            if not any((succ, r) in strict_recs for r in hyp.tail_action(lbl)):
                strict = False
                break
        table.record(source, hyp, strict)
        (strict_found if strict else non_strict_found).append(hyp)
    return StepResult(frozenset(strict_found), frozenset(non_strict_found), truncated)


def find_diamonds_to(lts: Lts, target: int, max_size: int = DEFAULT_MAX_SIZE,
                     verify: bool = False) -> ConvergenceTable:
    """Find all non-empty diamond convergences into `target` up to max_size.

    verify=True re-checks every recorded entry against the reference
    convergence definition after each step call (slow; for tests).
    """
    if max_size < 1:
        raise ValueError("max_size must be >= 1")
    table = ConvergenceTable(target)
    checker = ConvergenceChecker(lts, target) if verify else None

    heap = []
    ticket = itertools.count()
    queued = set()

    def enqueue(state, diamond):
        if (state, diamond) not in queued:
            queued.add((state, diamond))
            heapq.heappush(heap, (diamond.size, next(ticket), state, diamond))

    for source, lbl in lts.incoming[target]:
        seed = Diamond(((lbl, 1),), ())
        strict = len(lts.outgoing[source]) == 1
        table.record(source, seed, strict)
        if strict:
            enqueue(source, seed)
    if verify:
        _verify_table(checker, table)

    seen_calls = set()
    while heap:
        size, _, state, diamond = heapq.heappop(heap)
        queued.discard((state, diamond))
        if size >= max_size:
            if lts.incoming[state]:
                table.truncated = True
            continue
        for source, lbl in lts.incoming[state]:
            call = (source, lbl, state, diamond)
            if call in seen_calls:
                continue
            seen_calls.add(call)
            result = step(lts, source, lbl, state, diamond, target, table, max_size)
            table.truncated = table.truncated or result.truncated
            for hyp in result.strict:
                enqueue(source, hyp)
            if verify:
                _verify_table(checker, table)
    return table


def _verify_table(checker, table):
    # Runtime assertion of the step invariant: every omega entry converges,
    # and strict flags match some strict record.
    for source, entries in table.omega.items():
        for diamond, target in entries:
            if not checker.check(source, diamond, False):
                raise AssertionError(
                    "table holds non-convergent entry (%d, %s)" % (source, diamond))
            if (source, diamond) in table.strict_records \
                    and not checker.check(source, diamond, True):
                raise AssertionError(
                    "table marks non-strict entry strict (%d, %s)" % (source, diamond))
    for source, flag in table.strict_flag.items():
        if flag and not any(s == source for s, _ in table.strict_records):
            raise AssertionError("strict flag without strict record at %d" % source)


@dataclass(frozen=True)
class DetectionResult:
    convergences: tuple
    truncated_targets: tuple

    @property
    def truncated(self):
        return bool(self.truncated_targets)


def find_all_diamonds(lts: Lts, max_size: int = DEFAULT_MAX_SIZE,
                      workers: int | None = None,
                      verify: bool = False) -> DetectionResult:
    """Union of per-target discovery over every state, deterministically ordered.

    Targets are independent (one table each over the shared immutable Lts);
    workers>1 runs them in a thread pool, and the merge is order-independent
    either way.
    """
    targets = range(lts.state_count)

    def run(tgt):
        return find_diamonds_to(lts, tgt, max_size, verify=verify)

    if workers and workers > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=workers) as pool:
            tables = list(pool.map(run, targets))
    else:
        tables = [run(tgt) for tgt in targets]

    convs = []
    truncated = []
    for table in tables:
        convs.extend(table.convergences())
        if table.truncated:
            truncated.append(table.target)
    return DetectionResult(sort_convergences(convs), tuple(truncated))


def maximal_strict(convs) -> tuple:
    """Keep, per source, the strict convergences that no larger one subsumes.

    Strict convergences from one source are prefix-ordered; a record is
    dropped when a strictly larger strict record from the same source has it
    as a prefix.  Incomparable pairs violate that ordering and raise
    OverlapViolation.
    """
    by_source = defaultdict(list)
    for c in convs:
        if c.strict:
            by_source[c.source].append(c)
    kept = []
    for source, records in by_source.items():
        for c1, c2 in itertools.combinations(records, 2):
            if not (is_prefix(c1.diamond, c2.diamond)
                    or is_prefix(c2.diamond, c1.diamond)):
                raise OverlapViolation(
                    "prefix-incomparable strict diamonds at state %d: %s vs %s"
                    % (source, c1.diamond, c2.diamond))
        for c in records:
            subsumed = any(other.diamond.size > c.diamond.size
                           and is_prefix(c.diamond, other.diamond)
                           for other in records)
            if not subsumed:
                kept.append(c)
    return sort_convergences(kept)
