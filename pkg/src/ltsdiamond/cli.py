"""Command-line front end: find / reduce / expand / minimize / generate /
oracle-check / dot.

Exit codes: 0 success, 1 usage, 2 parse error, 3 verification mismatch,
4 cap truncation (with --strict-cap).  Outputs are byte-identical for
identical inputs and flags; timing goes to stderr only.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

from .detector import DEFAULT_MAX_SIZE, find_all_diamonds, find_diamonds_to
from .diamond import LabelSyntaxError, parse_label
from .equivalence import minimize as minimize_lts
from .generator import lts_of_diamond
from .lts import AutFormatError, parse_aut, write_aut, write_dot
from .oracle import CapExceeded, enumerate_convergences_oracle
from .reducer import expand as expand_reduced, reduce as reduce_lts, to_reduced

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_MISMATCH = 3
EXIT_TRUNCATED = 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _default_max_size():
    raw = os.environ.get("DIAMOND_MAX_SIZE")
    if raw is None:
        return DEFAULT_MAX_SIZE
    try:
        value = int(raw)
        if value < 1:
            raise ValueError
    except ValueError:
        raise _UsageError("DIAMOND_MAX_SIZE must be a positive integer, got %r" % raw)
    return value


def _load(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise AutFormatError("cannot read %s: %s" % (path, exc))


def _digest(text):
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _write(path, text):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _report_find(out, command, digest, max_size, convs, truncated, as_json):
    if as_json:
        head = {"command": command, "input_sha256": digest, "max_size": max_size}
        out.write(json.dumps(head, sort_keys=False) + "\n")
        for c in convs:
            line = {"source": c.source, "target": c.target,
                    "diamond": str(c.diamond), "strict": c.strict}
            out.write(json.dumps(line, sort_keys=False) + "\n")
        tail = {"convergences": len(convs), "truncated_targets": list(truncated)}
        out.write(json.dumps(tail, sort_keys=False) + "\n")
    else:
        for c in convs:
            kind = "strict" if c.strict else "plain "
            out.write("%s  %d =[%s]=> %d\n" % (kind, c.source, str(c.diamond), c.target))
        out.write("# %d convergences" % len(convs))
        if truncated:
            out.write(", truncated at cap for targets %s"
                      % ",".join(map(str, truncated)))
        out.write("\n")


def _cmd_find(args, out):
    text = _load(args.input)
    lts = parse_aut(text)
    max_size = args.max_size
    if args.target is not None:
        if not (0 <= args.target < lts.state_count):
            raise _UsageError("--target %d out of range" % args.target)
        table = find_diamonds_to(lts, args.target, max_size)
        convs = table.convergences()
        truncated = (args.target,) if table.truncated else ()
    else:
        result = find_all_diamonds(lts, max_size, workers=args.workers)
        convs = result.convergences
        truncated = result.truncated_targets
    _report_find(out, "find", _digest(text), max_size, convs, truncated, args.json)
    if truncated and args.strict_cap:
        return EXIT_TRUNCATED
    return EXIT_OK


def _cmd_reduce(args, out):
    text = _load(args.input)
    lts = parse_aut(text)
    result = reduce_lts(lts, args.max_size)
    _write(args.output, write_aut(result.lts))
    if args.dot:
        _write(args.dot, write_dot(result.lts))
    out.write("# states %d -> %d, transitions %d -> %d, macros %d, skipped %d\n" % (
        lts.state_count, result.lts.state_count, len(lts.transitions),
        len(result.lts.edges), len(result.applied), len(result.skipped)))
    if result.truncated and args.strict_cap:
        return EXIT_TRUNCATED
    return EXIT_OK


def _cmd_expand(args, out):
    lts = parse_aut(_load(args.input))
    expanded = expand_reduced(to_reduced(lts))
    _write(args.output, write_aut(expanded))
    out.write("# states %d -> %d\n" % (lts.state_count, expanded.state_count))
    return EXIT_OK


def _cmd_minimize(args, out):
    lts = parse_aut(_load(args.input))
    small = minimize_lts(lts)
    _write(args.output, write_aut(small))
    out.write("# states %d -> %d\n" % (lts.state_count, small.state_count))
    return EXIT_OK


def _cmd_generate(args, out):
    try:
        diamond = parse_label(args.diamond)
    except LabelSyntaxError as exc:
        raise _UsageError("bad --diamond label: %s" % exc)
    if diamond.is_empty:
        raise _UsageError("--diamond must be non-empty")
    prefix = tuple(args.prefix.split()) if args.prefix else ()
    suffix = tuple(args.suffix.split()) if args.suffix else ()
    lts, expected = lts_of_diamond(diamond, prefix, suffix, unfold=args.unfold)
    _write(args.output, write_aut(lts))
    expect_path = args.output + ".expect"
    _write(expect_path, "diamond %s\nentry %d\nexit %d\n"
           % (str(expected.diamond), expected.source, expected.target))
    out.write("# %d states, %d transitions, expectation in %s\n"
              % (lts.state_count, len(lts.transitions), expect_path))
    return EXIT_OK


def _cmd_oracle_check(args, out):
    text = _load(args.input)
    lts = parse_aut(text)
    max_size = args.max_size
    mismatches = 0
    truncated = []
    for target in range(lts.state_count):
        table = find_diamonds_to(lts, target, max_size)
        if table.truncated:
            truncated.append(target)
        detected = set(table.convergences())
        expected = set(enumerate_convergences_oracle(lts, target, max_size))
        for c in sorted(expected - detected, key=lambda c: c.key()):
            out.write("missing   %d =[%s]=> %d %s\n"
                      % (c.source, str(c.diamond), c.target,
                         "strict" if c.strict else "plain"))
            mismatches += 1
        for c in sorted(detected - expected, key=lambda c: c.key()):
            out.write("spurious  %d =[%s]=> %d %s\n"
                      % (c.source, str(c.diamond), c.target,
                         "strict" if c.strict else "plain"))
            mismatches += 1
    out.write("# %d mismatches\n" % mismatches)
    if mismatches:
        return EXIT_MISMATCH
    if truncated and args.strict_cap:
        return EXIT_TRUNCATED
    return EXIT_OK


def _cmd_dot(args, out):
    lts = parse_aut(_load(args.input))
    _write(args.output, write_dot(to_reduced(lts)))
    out.write("# wrote %s\n" % args.output)
    return EXIT_OK


def build_parser():
    parser = _Parser(prog="ltsdiamond",
                     description="Detect and rewrite diamond interleaving "
                                 "patterns in labelled transition systems.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, cap=True):
        if cap:
            p.add_argument("--max-size", type=int, default=None,
                           help="diamond size cap (default: DIAMOND_MAX_SIZE or %d)"
                                % DEFAULT_MAX_SIZE)
            p.add_argument("--strict-cap", action="store_true",
                           help="exit 4 when the cap truncated the search")

    p = sub.add_parser("find", help="list diamond convergences")
    p.add_argument("input")
    p.add_argument("--target", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.add_argument("--workers", type=int, default=None)
    add_common(p)

    p = sub.add_parser("reduce", help="rewrite maximal strict diamonds")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--dot", default=None)
    add_common(p)

    p = sub.add_parser("expand", help="re-expand macro transitions")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("minimize", help="quotient modulo strong bisimulation")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("generate", help="build the interleaving LTS of a diamond")
    p.add_argument("--diamond", required=True)
    p.add_argument("--prefix", default="")
    p.add_argument("--suffix", default="")
    p.add_argument("--unfold", action="store_true")
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("oracle-check", help="diff detector against brute force")
    p.add_argument("input")
    add_common(p)

    p = sub.add_parser("dot", help="render to Graphviz DOT")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    return parser


_COMMANDS = {
    "find": _cmd_find,
    "reduce": _cmd_reduce,
    "expand": _cmd_expand,
    "minimize": _cmd_minimize,
    "generate": _cmd_generate,
    "oracle-check": _cmd_oracle_check,
    "dot": _cmd_dot,
}


def run(argv=None, out=None, err=None):
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    started = time.monotonic()
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        if getattr(args, "max_size", None) is None and "max_size" in vars(args):
            args.max_size = _default_max_size()
        elif "max_size" in vars(args) and args.max_size < 1:
            raise _UsageError("--max-size must be >= 1")
        code = _COMMANDS[args.command](args, out)
    except _UsageError as exc:
        err.write("usage error: %s\n" % exc)
        return EXIT_USAGE
    except AutFormatError as exc:
        err.write("parse error: %s\n" % exc)
        return EXIT_PARSE
    except CapExceeded as exc:
        err.write("cap exceeded: %s\n" % exc)
        return EXIT_TRUNCATED
    err.write("# elapsed %.3fs\n" % (time.monotonic() - started))
    return code


def main():
    return run()


if __name__ == "__main__":
    sys.exit(main())
