"""Automaton files, JSON reports, DOT export and certificate re-verification.

The text format is line based::

    # comments run to the end of a line
    states a b c
    letters 0 1
    a 0 -> c 1

Declaration order fixes the internal indices. :func:`print_automaton`
emits the canonical form (headers, then transitions in index order), which
parses back byte for byte. The JSON form carries the same fields plus a
mandatory ``schema_version``; unknown keys are rejected.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
from importlib import resources
from pathlib import Path

import jsonschema

from . import __version__
from .automaton import MealyAutomaton, classify, products_equal, validate
from .components import power_component_sizes
from .errors import DuplicateTransition, MealyError, ParseError, UnknownName
from .orbit_tree import Activity, OrbitTree, is_active, periodic_labels

SCHEMA_VERSION = 1
_NAME = re.compile(r"^[^\s#]+$")


# parsing

def parse_automaton(source) -> MealyAutomaton:
    """Automaton from a path, a bundled fixture name, or file contents.

    Strings without a newline are tried as a path first. JSON is
    recognised by a leading ``{``.
    """
    text = _read_source(source)
    if text.lstrip().startswith("{"):
        return parse_json(text)
    return parse_text(text)


def _read_source(source) -> str:
    if isinstance(source, os.PathLike):
        return Path(source).read_text()
    if isinstance(source, str) and "\n" not in source and not source.lstrip().startswith("{"):
        if os.path.exists(source):
            return Path(source).read_text()
        names = fixture_names()
        if source in names or source + ".mealy" in names:
            return fixture_text(source)
        if "->" not in source:
            raise FileNotFoundError(f"no such file or bundled fixture: {source}")
    return source


def _tokens(line: str):
    for m in re.finditer(r"\S+", line):
        yield m.group(), m.start() + 1


def parse_text(text: str) -> MealyAutomaton:
    states = letters = None
    quads = []
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        toks = list(_tokens(line))
        if not toks:
            continue
        head, col = toks[0]
        if head in ("states", "letters"):
            if quads:
                raise ParseError(f"'{head}' after the first transition", lineno, col)
            if (states if head == "states" else letters) is not None:
                raise ParseError(f"'{head}' declared twice", lineno, col)
            names = [t for t, _ in toks[1:]]
            if not names:
                raise ParseError(f"'{head}' needs at least one name", lineno, col + len(head))
            dup = next(((t, c) for k, (t, c) in enumerate(toks[1:]) if t in names[:k]), None)
            if dup:
                raise ParseError(f"duplicate name {dup[0]!r}", lineno, dup[1])
            if head == "states":
                states = tuple(names)
            else:
                letters = tuple(names)
            continue
        if states is None or letters is None:
            raise ParseError("transitions must follow the 'states' and 'letters' lines", lineno, col)
        if len(toks) != 5 or toks[2][0] != "->":
            bad = toks[2][1] if len(toks) >= 3 and toks[2][0] != "->" else col
            raise ParseError("expected '<state> <letter> -> <state> <letter>'", lineno, bad)
        (x, cx), (i, ci), _, (y, cy), (j, cj) = toks
        for name, c, pool, kind in ((x, cx, states, "state"), (i, ci, letters, "letter"),
                                     (y, cy, states, "state"), (j, cj, letters, "letter")):
            if name not in pool:
                raise UnknownName(f"line {lineno}, column {c}: unknown {kind} {name!r}")
        if (x, i) in seen:
            raise DuplicateTransition(f"line {lineno}: ({x!r}, {i!r}) already defined on line {seen[x, i]}")
        seen[x, i] = lineno
        quads.append((x, i, y, j))
    if states is None or letters is None:
        raise ParseError("missing 'states' or 'letters' line", None, None)
    return validate(quads, states, letters)


_AUTOMATON_SCHEMA = {
    "type": "object",
    "required": ["schema_version", "states", "letters", "transitions"],
    "additionalProperties": False,
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "kind": {"const": "automaton"},
        "states": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        "letters": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        "transitions": {"type": "array", "items": {
            "type": "array", "items": {"type": "string"}, "minItems": 4, "maxItems": 4}},
    },
}


def parse_json(text) -> MealyAutomaton:
    """Automaton from its JSON document (string or already decoded)."""
    doc = _decode(text) if isinstance(text, str) else text
    _check(doc, _AUTOMATON_SCHEMA, "automaton")
    return validate([tuple(t) for t in doc["transitions"]], doc["states"], doc["letters"])


def _decode(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None


def _check(doc, schema, what):
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "top level"
        raise ParseError(f"invalid {what} document at {where}: {exc.message}") from None


# printing

def print_automaton(aut: MealyAutomaton) -> str:
    """Canonical text form."""
    for name in aut.states + aut.letters:
        if not _NAME.match(str(name)) or name in ("->", "states", "letters"):
            raise ValueError(f"name {name!r} cannot be written in the text format")
    lines = ["states " + " ".join(aut.states), "letters " + " ".join(aut.letters)]
    lines += [f"{x} {i} -> {y} {j}" for x, i, y, j in aut.transitions()]
    return "\n".join(lines) + "\n"


def automaton_to_json(aut: MealyAutomaton) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "automaton",
        "states": list(aut.states),
        "letters": list(aut.letters),
        "transitions": [list(t) for t in aut.transitions()],
    }


def digest(aut: MealyAutomaton) -> str:
    """sha256 of the canonical JSON form (independent of the input format)."""
    body = json.dumps(automaton_to_json(aut), sort_keys=True, separators=(",", ":"))
    return "sha256:" + hashlib.sha256(body.encode()).hexdigest()


# fixtures

def fixture_names() -> list:
    root = resources.files("mealyburnside") / "fixtures"
    return sorted(p.name for p in root.iterdir() if p.name.endswith(".mealy"))


def fixture_text(name: str) -> str:
    if not name.endswith(".mealy"):
        name += ".mealy"
    return (resources.files("mealyburnside") / "fixtures" / name).read_text()


def load_fixture(name: str) -> MealyAutomaton:
    return parse_text(fixture_text(name))


# reports

REPORT_KINDS = ("classification", "orbit_tree", "jungle", "stems", "classes", "order", "certificate")

_REPORT_SCHEMA = {
    "type": "object",
    "required": ["schema_version", "kind", "tool_version", "input_digest", "budgets", "automaton", "result"],
    "additionalProperties": False,
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "kind": {"enum": list(REPORT_KINDS)},
        "tool_version": {"type": "string"},
        "input_digest": {"type": "string", "pattern": "^sha256:[0-9a-f]{64}$"},
        "budgets": {"type": "object"},
        "automaton": _AUTOMATON_SCHEMA,
        "result": {"type": "object"},
    },
}

_CERTIFICATE_RESULT = {
    "type": "object",
    "required": ["classification", "branch", "rationale", "evidence"],
    "additionalProperties": False,
    "properties": {
        "classification": {
            "type": "object",
            "additionalProperties": False,
            "required": ["invertible", "reversible", "bireversible", "connected", "size", "prime_size"],
            "properties": {k: {"type": "boolean"} for k in
                           ("invertible", "reversible", "bireversible", "connected", "prime_size")}
            | {"size": {"type": "integer", "minimum": 1}},
        },
        "branch": {"enum": ["PreconditionFailed", "NotBireversible", "InfiniteOrderElement",
                            "FiniteGroupEvidence", "Inconclusive"]},
        "rationale": {"type": "string"},
        "evidence": {"type": "object"},
    },
}


def make_report(kind: str, aut: MealyAutomaton, result: dict, budgets: dict | None = None) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "tool_version": __version__,
        "input_digest": digest(aut),
        "budgets": dict(budgets or {}),
        "automaton": automaton_to_json(aut),
        "result": result,
    }
    validate_report(doc)
    return doc


def validate_report(doc: dict) -> None:
    _check(doc, _REPORT_SCHEMA, "report")
    if doc["kind"] == "certificate":
        _check(doc["result"], _CERTIFICATE_RESULT, "certificate")


def dump_report(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def load_report(text: str) -> dict:
    doc = _decode(text)
    validate_report(doc)
    return doc


def certificate_report(aut: MealyAutomaton, cert) -> dict:
    result = {"classification": cert.classification, "branch": cert.branch,
              "rationale": cert.rationale, "evidence": cert.evidence}
    return make_report("certificate", aut, result, cert.budgets)


# DOT

def _quote(s) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(obj) -> str:
    """DOT text for an :class:`OrbitTree` (fully expanded) or an automaton."""
    if isinstance(obj, OrbitTree):
        return _tree_dot(obj)
    if isinstance(obj, MealyAutomaton):
        return _automaton_dot(obj)
    raise TypeError(f"cannot export {type(obj).__name__}")


def _vertex_id(c) -> str:
    return _quote(f"{c.level}:" + ".".join(map(str, c.representative)))


def _tree_dot(tree: OrbitTree) -> str:
    aut = tree.aut
    lines = ["digraph orbit_tree {", "  node [shape=box];"]
    for level in tree.levels():
        for c in level:
            rep = aut.format_word(c.representative) or "ε"
            lines.append(f"  {_vertex_id(c)} [label={_quote(f'{rep} ({c.size})')}];")
    for e in tree.edges():
        lines.append(f"  {_vertex_id(e.parent)} -> {_vertex_id(e.child)} [label={_quote(e.label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _automaton_dot(aut: MealyAutomaton) -> str:
    lines = ["digraph automaton {", "  rankdir=LR;", "  node [shape=circle];"]
    for x in aut.states:
        lines.append(f"  {_quote(x)};")
    grouped = {}
    for x, i, y, j in aut.transitions():
        grouped.setdefault((x, y), []).append(f"{i}|{j}")
    for (x, y), labels in grouped.items():
        lines.append(f"  {_quote(x)} -> {_quote(y)} [label={_quote(', '.join(labels))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


# certificate re-verification

def verify_certificate(doc: dict, aut: MealyAutomaton, full: bool = True) -> list:
    """Re-check a certificate report against ``aut``; returns the failed checks.

    With ``full`` the expensive recomputations (group order, uniform
    bound orders) are repeated as well.
    """
    from .burnside import group_order, order_of
    from .jungle import is_identity_action, jungle_from_stem, seq_peq_tables, StemClass

    failures = []

    def check(cond, what):
        if not cond:
            failures.append(what)
        return cond

    try:
        validate_report(doc)
    except ParseError as exc:
        return [f"schema: {exc}"]
    check(doc["kind"] == "certificate", "kind is certificate")
    check(doc["input_digest"] == digest(aut), "input digest matches the automaton")
    check(parse_json(doc["automaton"]) == aut, "embedded automaton matches")
    res = doc["result"]
    cls = classify(aut).as_dict()
    check(res["classification"] == cls, "classification recomputes")
    branch, ev = res["branch"], res["evidence"]
    failed = [k for k in ("invertible", "reversible", "connected", "prime_size") if not cls[k]]

    try:
        if branch == "PreconditionFailed":
            check(ev.get("failed") == failed and failed, "failed preconditions recompute")
        else:
            check(not failed, "preconditions hold")
        if branch == "NotBireversible":
            check(not cls["bireversible"], "automaton is not bireversible")
        elif branch == "InfiniteOrderElement":
            w = aut.word(ev["witness"])
            check(list(w) == ev["witness_indices"], "witness indices match its names")
            labels, _, truncated = periodic_labels(aut, w, ev["depth"])
            check(not truncated and list(labels) == ev["path_labels"], "path labels recompute")
            check(is_active(labels, window=len(w)) is Activity.ACTIVE, "periodic branch is active at depth")
            sizes = ev["power_sizes"]
            check(power_component_sizes(aut, w, len(sizes)) == sizes, "power component sizes recompute")
            check(all(a < b for a, b in zip(sizes, sizes[1:])), "power component sizes grow")
        elif branch == "FiniteGroupEvidence":
            _verify_jungle_evidence(aut, ev, check, full, group_order, order_of, is_identity_action,
                                    jungle_from_stem, seq_peq_tables, StemClass)
    except (MealyError, KeyError, ValueError, TypeError, AssertionError) as exc:
        failures.append(f"re-verification raised {type(exc).__name__}: {exc}")
    return failures


def _verify_jungle_evidence(aut, ev, check, full, group_order, order_of, is_identity_action,
                            jungle_from_stem, seq_peq_tables, StemClass):
    rep = ev["jungle"]
    jt = jungle_from_stem(aut, aut.word(rep["trunk_representative"]))
    check(list(jt.trunk_labels) == rep["trunk_labels"], "trunk labels recompute")
    check(jt.arity == rep["arity"], "arity recomputes")
    check([aut.format_word(s) for s in jt.stems] == rep["stems"], "stems recompute")
    classes = [tuple(sorted(jt.stem_index[aut.word(s)] for s in cl)) for cl in rep["classes"]]
    flat = sorted(k for cl in classes for k in cl)
    check(flat == list(range(jt.stem_count)), "classes partition the stems")
    reached = {}
    for wit in rep["class_witnesses"]:
        a, s, b = aut.word(wit["from"]), aut.word(wit["bridge"]), aut.word(wit["to"])
        check(jt.is_j_word(a + s + b), f"witness {wit} gives a j-word")
        check(is_identity_action(aut, a + s), f"witness {wit} acts trivially")
        reached.setdefault(jt.stem_index[a], set()).add(jt.stem_index[b])
    for cl in classes:
        check(any(reached.get(r, set()) >= set(cl) for r in cl), f"class {cl} is connected by witnesses")
    S_eq, P_eq = seq_peq_tables(jt, [StemClass(cl) for cl in classes])
    check(S_eq == rep["S_eq"] and P_eq == rep["P_eq"], "S_eq and P_eq recompute")
    full_set = set(range(aut.size))
    qprefix = all({jt.stems[k][0] for k in cl} == full_set for cl in classes)
    check(qprefix == ev["first_letters_whole_stateset"], "first-letter sets recompute")
    for r in ev["rewrites"]:
        u, jw = aut.word(r["word"]), aut.word(r["j_word"])
        check(jt.is_j_word(jw), f"rewrite of {r['word']} is a j-word")
        check(products_equal(aut, u, jw), f"rewrite of {r['word']} is action-equal")
    for r in ev["cyclic_reductions"]:
        u, v, e = aut.word(r["word"]), aut.word(r["cyclic"]), r["exponent"]
        check(1 <= e <= aut.size ** jt.n, f"exponent of {r['word']} within the pigeonhole bound")
        check(jt.is_cyclic_j_word(v), f"reduction of {r['word']} is a cyclic j-word")
        check(products_equal(aut, v, u * e), f"reduction of {r['word']} is action-equal to u^{e}")
        o = order_of(aut, v, r["order"], growth_threshold=10 ** 9)
        check(o.verdict == "Finite" and o.order == r["order"], f"order of reduction of {r['word']} recomputes")
    ub = ev["uniform_bound"]
    check(all(r["order"] <= ub["bound"] for r in ev["cyclic_reductions"]), "reduction orders within bound")
    if full and ev.get("group_order") is not None:
        check(group_order(aut) == ev["group_order"], "group order recomputes")
