"""Command-line driver.

Exit codes: 0 definitive result, 1 certificate failed re-verification,
2 inconclusive within the budgets, 3 input rejected by a classification
precondition, 4 parse or I/O error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .automaton import classify
from .burnside import Budgets, certify, order_of
from .errors import AutomatonError, IncompletePartition, MealyError, ParseError
from .io import (certificate_report, dump_report, export_dot, load_report, make_report, parse_automaton,
                 verify_certificate)
from .jungle import find_jungle_trees, jungle_report, seq_peq_tables, stem_classes
from .orbit_tree import OrbitTree

OK, VERIFY_FAILED, INCONCLUSIVE, REJECTED, INPUT_ERROR = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(INPUT_ERROR, f"{self.prog}: error: {message}\n")


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mealyburnside", description="Orbit trees, jungle trees and Burnside certificates "
                                                  "for Mealy automata.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, help, depth=None, max_trunk=False, word=False, cap=None, dot=False):
        c = sub.add_parser(name, help=help)
        c.add_argument("file", help="automaton file (.mealy text or JSON) or bundled fixture name")
        c.add_argument("--json", metavar="PATH", help="write the JSON report here")
        c.add_argument("--seed", type=int, default=0, help="seed for randomized sampling")
        if depth is not None:
            c.add_argument("--depth", type=int, default=depth, help=f"deepest level explored (default {depth})")
        if max_trunk:
            c.add_argument("--max-trunk", type=int, default=6, help="longest trunk searched (default 6)")
        if word:
            c.add_argument("--word", required=True, help="state word, e.g. ab")
        if cap is not None:
            c.add_argument("--cap", type=int, default=cap[0], help=f"{cap[1]} (default {cap[0]})")
        if dot:
            c.add_argument("--dot", metavar="PATH", help="write a DOT drawing here")
        return c

    command("classify", "structural properties", dot=True)
    command("orbit-tree", "labeled orbit tree census", depth=4, cap=(10 ** 7, "largest component"), dot=True)
    command("jungle", "search for jungle trees", depth=None, max_trunk=True)
    command("stems", "stems of the first jungle tree", max_trunk=True)
    command("classes", "stem classes and the S_eq/P_eq tables", max_trunk=True,
            cap=(10 ** 5, "bridge search states"))
    command("order", "order of the map induced by a state word", word=True, cap=(256, "largest power tried"))
    command("certify", "run the certifier", depth=12, max_trunk=True, cap=(256, "order cap"))
    v = sub.add_parser("verify", help="re-verify a certificate against an automaton file")
    v.add_argument("certificate", help="certificate JSON written by certify --json")
    v.add_argument("file", help="the automaton file it was made from")
    v.add_argument("--quick", action="store_true", help="skip the group order recomputation")
    return p


def _write(path, text):
    if path:
        Path(path).write_text(text)


def _flag(b) -> str:
    return "true" if b else "false"


def _needs_reversible(aut):
    cls = classify(aut)
    if not cls.reversible:
        print("PreconditionFailed(reversible): orbit trees need a reversible automaton")
        return True
    return False


def _first_jungle(aut, args):
    tree = OrbitTree(aut, args.max_trunk + 2)
    jungles = find_jungle_trees(aut, tree, args.max_trunk)
    return jungles[0] if jungles else None


def run(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "verify":
            return _verify(args)
        aut = parse_automaton(Path(args.file) if Path(args.file).exists() else args.file)
    except (ParseError, AutomatonError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    try:
        return _COMMANDS[args.command](aut, args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR


def _classify(aut, args):
    cls = classify(aut)
    for k, v in cls.as_dict().items():
        print(f"{k}: {v if k == 'size' else _flag(v)}")
    _write(args.json, dump_report(make_report("classification", aut, cls.as_dict())))
    if args.dot:
        _write(args.dot, export_dot(aut))
    return OK


def _orbit_tree(aut, args):
    if _needs_reversible(aut):
        return REJECTED
    tree = OrbitTree(aut, args.depth, args.cap)
    census = tree.census()
    for row in census:
        print(f"level {row['level']}: {row['components']} components, sizes {row['sizes']}")
    edges = [{"level": e.level, "parent": aut.format_word(e.parent.representative),
              "child": aut.format_word(e.child.representative), "label": e.label, "child_size": e.child.size}
             for e in tree.edges()]
    for e in edges:
        print(f"  {e['parent'] or '.'} -> {e['child']} [{e['label']}]")
    result = {"depth": args.depth, "census": census, "edges": edges}
    _write(args.json, dump_report(make_report("orbit_tree", aut, result, {"depth": args.depth, "cap": args.cap})))
    if args.dot:
        _write(args.dot, export_dot(tree))
    return OK


def _jungle(aut, args):
    if _needs_reversible(aut):
        return REJECTED
    tree = OrbitTree(aut, args.max_trunk + 2)
    jungles = find_jungle_trees(aut, tree, args.max_trunk)
    for jt in jungles:
        print(f"trunk labels {list(jt.trunk_labels)}, arity {jt.arity}, {jt.stem_count} stems, "
              f"representative {aut.format_word(jt.stems[0])}")
    if not jungles:
        print(f"no jungle tree with a trunk of at most {args.max_trunk} edges")
    result = {"jungles": [jungle_report(jt) for jt in jungles]}
    _write(args.json, dump_report(make_report("jungle", aut, result, {"max_trunk": args.max_trunk})))
    return OK if jungles else INCONCLUSIVE


def _stems(aut, args):
    if _needs_reversible(aut):
        return REJECTED
    jt = _first_jungle(aut, args)
    if jt is None:
        print(f"no jungle tree with a trunk of at most {args.max_trunk} edges")
        return INCONCLUSIVE
    print(f"{jt.stem_count} stems of length {jt.n} (trunk labels {list(jt.trunk_labels)})")
    for s in jt.stems:
        print(f"  {aut.format_word(s)}")
    _write(args.json, dump_report(make_report("stems", aut, jungle_report(jt), {"max_trunk": args.max_trunk})))
    return OK


def _classes(aut, args):
    if _needs_reversible(aut):
        return REJECTED
    jt = _first_jungle(aut, args)
    if jt is None:
        print(f"no jungle tree with a trunk of at most {args.max_trunk} edges")
        return INCONCLUSIVE
    try:
        classes = stem_classes(jt, args.cap)
        tables = seq_peq_tables(jt, classes)
    except IncompletePartition as exc:
        print(f"inconclusive: {exc}")
        return INCONCLUSIVE
    except MealyError as exc:
        print(f"inconclusive: {type(exc).__name__}: {exc}")
        return INCONCLUSIVE
    for k, cl in enumerate(classes):
        first = aut.format_word(sorted(cl.first_letters(jt)))
        print(f"class {k}: {len(cl.members)} stems, first states {first}")
        for m in cl.members:
            print(f"  {aut.format_word(jt.stems[m])}")
    print(f"S_eq {tables[0]}")
    print(f"P_eq {tables[1]}")
    report = jungle_report(jt, classes, tables)
    _write(args.json, dump_report(make_report("classes", aut, report,
                                              {"max_trunk": args.max_trunk, "cap": args.cap})))
    return OK


def _order(aut, args):
    cls = classify(aut)
    if not (cls.invertible and cls.reversible):
        print("PreconditionFailed: order_of needs an invertible reversible automaton")
        return REJECTED
    u = aut.word(args.word)
    r = order_of(aut, u, args.cap)
    if r.verdict == "Finite":
        print(f"Finite({r.order})")
    else:
        print(f"{r.verdict}; component sizes {list(r.sizes)}")
    result = {"word": aut.format_word(u), **r.as_dict()}
    _write(args.json, dump_report(make_report("order", aut, result, {"cap": args.cap})))
    return OK if r.verdict == "Finite" else INCONCLUSIVE


def _certify(aut, args):
    budgets = Budgets(depth=args.depth, max_trunk=args.max_trunk, order_cap=args.cap, seed=args.seed)
    cert = certify(aut, budgets)
    if cert.branch == "PreconditionFailed":
        print(f"PreconditionFailed({', '.join(cert.evidence['failed'])})")
    elif cert.branch == "InfiniteOrderElement":
        print(f"InfiniteOrderElement(witness {cert.evidence['witness']})")
    else:
        print(cert.branch)
    print(cert.rationale)
    _write(args.json, dump_report(certificate_report(aut, cert)))
    if cert.branch == "PreconditionFailed":
        return REJECTED
    return OK if cert.definitive else INCONCLUSIVE


def _verify(args):
    doc = load_report(Path(args.certificate).read_text())
    aut = parse_automaton(Path(args.file))
    failures = verify_certificate(doc, aut, full=not args.quick)
    for f in failures:
        print(f"FAILED: {f}")
    if failures:
        return VERIFY_FAILED
    print(f"certificate verified: {doc['result']['branch']}")
    return OK


_COMMANDS = {
    "classify": _classify,
    "orbit-tree": _orbit_tree,
    "jungle": _jungle,
    "stems": _stems,
    "classes": _classes,
    "order": _order,
    "certify": _certify,
}


def main(argv=None):
    sys.exit(run(argv))
