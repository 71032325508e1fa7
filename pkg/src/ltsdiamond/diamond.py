"""The diamond algebra: canonical interleaving patterns and their tail operations.

A diamond is a pair of multisets: action cardinalities (parallel repetitions
of a single action) and non-monotone sequence cardinalities.  Monotone
sequences (one repeated letter) are always folded into the action side, so
structural equality coincides with the intended identification of bisimilar
parallel/sequential readings.  Diamonds are immutable and hashable.
"""

from __future__ import annotations

import re
import warnings

from .lts import minimal_alphabet


class LabelSyntaxError(ValueError):
    """A diamond label string does not conform to the label grammar."""


class MonotoneSequenceWarning(UserWarning):
    """A parsed label used a monotone sequence key; it was folded into actions."""


class Diamond:
    """Canonical diamond: sorted (action, count) and (sequence, count) tuples.

    Build through make_diamond (or the tail operations); the constructor
    assumes already-canonical content.
    """

    __slots__ = ("actions", "sequences", "size", "head", "_hash", "_label")

    def __init__(self, actions, sequences):
        self.actions = actions
        self.sequences = sequences
        self.size = sum(c for _, c in actions) + sum(len(s) * c for s, c in sequences)
        self.head = frozenset(a for a, _ in actions) | frozenset(s[0] for s, _ in sequences)
        self._hash = hash((actions, sequences))
        self._label = None

    @property
    def is_empty(self):
        return not self.actions and not self.sequences

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Diamond):
            return NotImplemented
        return self.actions == other.actions and self.sequences == other.sequences

    def __hash__(self):
        return self._hash

    def __str__(self):
        if self._label is None:
            self._label = format_label(self)
        return self._label

    def __repr__(self):
        return "<diamond %s>" % format_label(self)

    def letters(self):
        """The sorted multiset of all letters, with multiplicity."""
        bag = []
        for a, c in self.actions:
            bag.extend([a] * c)
        for s, c in self.sequences:
            bag.extend(list(s) * c)
        return tuple(sorted(bag))

    def tail_action(self, a):
        """All residues after removing one leading occurrence of action `a`.

        Empty iff `a` is not in the head.  Three cases: decrement the action
        count; strip `a` off a sequence with a non-monotone remainder; strip
        `a` off a sequence whose remainder is monotone, folding the remainder
        into the action counts.  Results are memoized globally.
        """
        key = (self, a)
        hit = _TAIL_ACTION_CACHE.get(key)
        if hit is not None:
            return hit
        out = []
        acts = dict(self.actions)
        if acts.get(a):
            out.append(_build({**acts, a: acts[a] - 1}, dict(self.sequences)))
        for s, c in self.sequences:
            if s[0] != a:
                continue
            rest = s[1:]
            seqs = dict(self.sequences)
            seqs[s] = c - 1
            if len(minimal_alphabet(rest)) == 1:
                new_acts = dict(acts)
                new_acts[rest[0]] = new_acts.get(rest[0], 0) + len(rest)
                out.append(_build(new_acts, seqs))
            else:
                seqs[rest] = seqs.get(rest, 0) + 1
                out.append(_build(acts, seqs))
        result = frozenset(out)
        if len(_TAIL_ACTION_CACHE) > 1_000_000:
            _TAIL_ACTION_CACHE.clear()
        _TAIL_ACTION_CACHE[key] = result
        return result

    def tail_sequence(self, seq):
        """Residues after removing a whole action sequence (empty tuple allowed)."""
        frontier = frozenset((self,))
        for a in seq:
            frontier = frozenset(d for cur in frontier for d in cur.tail_action(a))
            if not frontier:
                break
        return frontier

    def tail_diamond(self, prefix):
        """Residues after removing a whole prefix diamond (memoized)."""
        if prefix.is_empty:
            return frozenset((self,))
        key = (self, prefix)
        hit = _TAIL_CACHE.get(key)
        if hit is not None:
            return hit
        out = set()
        for a in prefix.head:
            for d2 in self.tail_action(a):
                for p2 in prefix.tail_action(a):
                    out |= d2.tail_diamond(p2)
        result = frozenset(out)
        _TAIL_CACHE[key] = result
        return result

    def inverse_tail(self, a):
        """All hypothesis diamonds whose tail by `a` contains this diamond.

        Inverts the three tail_action cases: bump the count of `a`; prepend
        `a` to a stored sequence; or un-fold k copies of some other action b
        into a new `a b^k` sequence.
        """
        acts = dict(self.actions)
        seqs = dict(self.sequences)
        out = [_build({**acts, a: acts.get(a, 0) + 1}, seqs)]
        for s, c in self.sequences:
            grown = dict(seqs)
            grown[s] = c - 1
            key = (a,) + s
            grown[key] = grown.get(key, 0) + 1
            out.append(_build(acts, grown))
        for b, cb in self.actions:
            if b == a:
                continue
            for k in range(1, cb + 1):
                shrunk = dict(acts)
                shrunk[b] = cb - k
                grown = dict(seqs)
                key = (a,) + (b,) * k
                grown[key] = grown.get(key, 0) + 1
                out.append(_build(shrunk, grown))
        return frozenset(out)


_TAIL_CACHE = {}
_TAIL_ACTION_CACHE = {}


def _build(acts, seqs):
    """Canonicalize count dicts (drop zeros, sort) into a Diamond."""
    return Diamond(tuple(sorted((a, c) for a, c in acts.items() if c)),
                   tuple(sorted((s, c) for s, c in seqs.items() if c)))


def make_diamond(entries=()):
    """Build a canonical diamond from (atom, count) pairs.

    Atoms are action labels (str) or sequences (iterable of labels).  Zero
    counts are dropped; length-1 and monotone sequences fold into action
    counts, so e.g. one `aa` sequence plus one `a` action yields a^3.
    """
    acts = {}
    seqs = {}
    for atom, count in entries:
        if count < 0:
            raise ValueError("negative count for %r" % (atom,))
        if count == 0:
            continue
        if isinstance(atom, str):
            acts[atom] = acts.get(atom, 0) + count
        else:
            s = tuple(atom)
            if not s:
                raise ValueError("empty sequence atom")
            if len(minimal_alphabet(s)) == 1:
                acts[s[0]] = acts.get(s[0], 0) + len(s) * count
            else:
                seqs[s] = seqs.get(s, 0) + count
    return _build(acts, seqs)


EMPTY = make_diamond()


def is_prefix(prefix, diamond):
    """Whether `diamond` begins by performing `prefix`.

    Every first step of `diamond` (each head action and each of its
    residues) must be a possible first step of `prefix`, recursively, until
    `prefix` is exhausted.  This refines the bare "diamond tail inhabited"
    reading, which is not transitive and calls letter-equal rebracketings
    like (a b)^1 vs a^1||b^1 prefixes of each other both ways.
    """
    if prefix.is_empty:
        return True
    if diamond.is_empty:
        return False
    key = (prefix, diamond)
    hit = _PREFIX_CACHE.get(key)
    if hit is not None:
        return hit
    ok = True
    for a in diamond.head:
        prefix_residues = prefix.tail_action(a)
        if not prefix_residues:
            ok = False
            break
        for d2 in diamond.tail_action(a):
            if not any(is_prefix(p2, d2) for p2 in prefix_residues):
                ok = False
                break
        if not ok:
            break
    _PREFIX_CACHE[key] = ok
    return ok


_PREFIX_CACHE = {}


def is_sequence_of(seq, diamond):
    """Whether `seq` is an interleaving fragment of `diamond` (empty allowed)."""
    frontier = frozenset((diamond,))
    for a in seq:
        frontier = frozenset(d for cur in frontier for d in cur.tail_action(a))
        if not frontier:
            return False
    return True


def _atom_key(atom):
    return atom if isinstance(atom, tuple) else (atom,)


def format_label(diamond) -> str:
    """Render a diamond in the `a^3 || (a b)^2` grammar, components sorted."""
    if diamond.is_empty:
        return "<empty>"
    terms = [((a,), "%s^%d" % (a, c)) for a, c in diamond.actions]
    terms.extend((s, "(%s)^%d" % (" ".join(s), c)) for s, c in diamond.sequences)
    return " || ".join(text for _, text in sorted(terms))


_TERM_RE = re.compile(r"(?:\(([^()^]+)\)|([^\s()^]+))\^(\d+)$")


def parse_label(text: str):
    """Parse the diamond label grammar; inverse of format_label.

    Monotone sequence keys are accepted with a MonotoneSequenceWarning and
    folded, matching make_diamond.
    """
    body = text.strip()
    if body == "<empty>":
        return EMPTY
    entries = []
    for raw in body.split("||"):
        term = raw.strip()
        m = _TERM_RE.match(term)
        if m is None:
            raise LabelSyntaxError("bad diamond term: %r" % term)
        seq_body, action, count_text = m.groups()
        count = int(count_text)
        if count < 1:
            raise LabelSyntaxError("count must be positive in %r" % term)
        if action is not None:
            entries.append((action, count))
        else:
            letters = tuple(seq_body.split())
            if len(letters) < 2:
                raise LabelSyntaxError("sequence atom needs at least two labels: %r" % term)
            if len(minimal_alphabet(letters)) == 1:
                warnings.warn("monotone sequence %r folded into action counts" % term,
                              MonotoneSequenceWarning, stacklevel=2)
            entries.append((letters, count))
    return make_diamond(entries)
