"""Orders of induced actions, rewriting into j-words, and the certifier."""

from __future__ import annotations

import math
import random
import time
from dataclasses import asdict, dataclass, field

from . import __version__
from .automaton import MealyAutomaton, act_rho, classify, products_equal
from .components import PowerWalk, extend_tables
from .errors import CapExceeded, ComponentTooLarge, LevelTooLarge, MealyError
from .jungle import (JungleTree, find_jungle_trees, identity_continuation,
                     jungle_report, seq_peq_tables, stem_classes)
from .orbit_tree import OrbitTree, active_candidates


@dataclass(frozen=True)
class OrderResult:
    verdict: str  # "Finite", "ExceedsCap" or "InfiniteWitness"
    order: int | None = None
    sizes: tuple = ()

    def as_dict(self):
        return {"verdict": self.verdict, "order": self.order, "sizes": list(self.sizes)}


def order_of(aut: MealyAutomaton, u, cap: int = 256, growth_threshold: int = 10 ** 4,
             size_cap: int = 10 ** 6) -> OrderResult:
    """Smallest ``m <= cap`` with ``rho_u^m`` trivial.

    ``sizes`` lists the component sizes of ``u, u^2, ...``. When they pass
    ``growth_threshold`` before the identity shows up the verdict is
    ``InfiniteWitness``; this is a heuristic flag, since only unbounded
    growth proves infinite order. A component past ``size_cap`` also ends
    the search with ``ExceedsCap``.
    """
    walk = PowerWalk(aut, u, size_cap)
    sizes = []
    for m in range(1, cap + 1):
        try:
            walk.advance_period()
        except ComponentTooLarge:
            return OrderResult("ExceedsCap", None, tuple(sizes))
        sizes.append(walk.size)
        if walk.acts_trivially():
            return OrderResult("Finite", m, tuple(sizes))
        if walk.size > growth_threshold:
            return OrderResult("InfiniteWitness", None, tuple(sizes))
    return OrderResult("ExceedsCap", None, tuple(sizes))


def order_oracle(aut: MealyAutomaton, u, k: int, budget: int = 1 << 20) -> int:
    """Order of the permutation ``rho_u`` induces on ``Sigma^k`` (tests only)."""
    S = aut.nletters
    total = S ** k
    if total > budget:
        raise LevelTooLarge(f"{S}^{k} words exceed the budget {budget}")
    u = tuple(u)

    def encode(word):
        code = 0
        for i in word:
            code = code * S + i
        return code

    def decode(code):
        word = []
        for _ in range(k):
            code, r = divmod(code, S)
            word.append(r)
        return tuple(reversed(word))

    image = [encode(act_rho(aut, u, decode(c))) for c in range(total)]
    seen = [False] * total
    order = 1
    for c in range(total):
        if seen[c]:
            continue
        length = 0
        d = c
        while not seen[d]:
            seen[d] = True
            d = image[d]
            length += 1
        order = order * length // math.gcd(order, length)
    return order


def _minimize(trans, out, start):
    """Canonical form of the rooted Mealy machine (first-letter outputs)."""
    n = len(trans)
    block = {}
    ids = [block.setdefault(tuple(out[v]), len(block)) for v in range(n)]
    while True:
        block = {}
        new = [block.setdefault((ids[v], tuple(ids[t] for t in trans[v])), len(block)) for v in range(n)]
        if len(block) == len(set(ids)):
            ids = new
            break
        ids = new
    rep = {}
    for v in range(n):
        rep.setdefault(ids[v], v)
    number = {ids[start]: 0}
    order = [ids[start]]
    k = 0
    while k < len(order):
        b = order[k]
        for t in trans[rep[b]]:
            if ids[t] not in number:
                number[ids[t]] = len(order)
                order.append(ids[t])
        k += 1
    mtrans = [[number[ids[t]] for t in trans[rep[b]]] for b in order]
    mout = [list(out[rep[b]]) for b in order]
    form = tuple((tuple(o), tuple(t)) for o, t in zip(mout, mtrans))
    return form, mtrans, mout


def group_order(aut: MealyAutomaton, cap: int = 10 ** 5, machine_cap: int = 10 ** 5):
    """Exact number of maps ``rho_w`` (``w`` in ``Q*``), or None past ``cap``.

    Each map is stored as its minimized Mealy machine, which is a
    canonical form, so the closure counts distinct elements. For an
    invertible automaton with a finite closure this is the group order.
    """
    S = aut.nletters
    form, t0, o0 = _minimize([[0] * S], [list(range(S))], 0)
    seen = {form: (t0, o0)}
    todo = [form]
    while todo:
        f = todo.pop()
        trans, out = seen[f]
        for x in range(aut.size):
            try:
                nt, no, _ = extend_tables(aut, trans, out, 0, x, machine_cap)
            except ComponentTooLarge:
                return None
            g, mt, mo = _minimize(nt, no, 0)
            if g not in seen:
                if len(seen) >= cap:
                    return None
                seen[g] = (mt, mo)
                todo.append(g)
    return len(seen)


def rewrite_as_j_word(jt: JungleTree, u, cap: int = 10 ** 4, context=()):
    """A j-word inducing the same map as ``u``.

    Built one state at a time: an identity-acting bridge followed by the
    next state of ``u``. With ``context`` the result is such that
    ``context + result`` is a j-word (used to chain rewrites).
    """
    word = tuple(context)
    for x in u:
        w = identity_continuation(jt, word, x, cap)
        word = word + w + (x,)
    result = word[len(context):]
    if not jt.is_j_word(word):
        raise AssertionError("rewrite left the jungle tree")
    return result


def cyclic_reduction(jt: JungleTree, u, cap: int | None = None, rewrite_cap: int = 10 ** 4):
    """Cyclic j-word ``v`` with ``rho_v = rho_u^e``; returns ``(v, e)``.

    Successive rewrites ``u1 u2 ...`` of ``u`` are chained into one
    j-word. A block's key is the length-``n`` window starting at it; two
    blocks ``i < j`` with the same key give ``v = u_i ... u_(j-1)``, and
    ``e = j - i <= |Q|^n`` by pigeonhole.
    """
    u = tuple(u)
    if not u:
        raise ValueError("empty word")
    n = jt.n
    if cap is None:
        cap = jt.aut.size ** n + n + 2
    word = ()
    starts = []
    keys = {}
    checked = 0
    for _ in range(cap):
        starts.append(len(word))
        word = word + rewrite_as_j_word(jt, u, rewrite_cap, context=word)
        while checked < len(starts) and len(word) >= starts[checked] + n:
            key = word[starts[checked]:starts[checked] + n]
            if key in keys:
                i = keys[key]
                return word[starts[i]:starts[checked]], checked - i
            keys[key] = checked
            checked += 1
    raise CapExceeded(f"no repeated block window within {cap} blocks")


@dataclass
class UniformBound:
    bound: int
    words_checked: int
    complete_to_length: int
    component_size: int
    orders: dict = field(default_factory=dict)


def _rotation_min(w):
    return min(w[k:] + w[:k] for k in range(len(w)))


def cyclic_j_words(jt: JungleTree, max_len: int, budget: int):
    """Cyclic j-words (closed walks on stems) up to rotation, shortest first.

    Returns ``(words, complete_to_length)``.
    """
    words = []
    seen = set()
    complete = 0
    for length in range(1, max_len + 1):
        for s in range(jt.stem_count):
            stack = [(s, ())]
            while stack:
                node, w = stack.pop()
                if len(w) == length:
                    if node == s:
                        c = _rotation_min(w)
                        if c not in seen:
                            seen.add(c)
                            words.append(c)
                            if len(words) >= budget:
                                return words, complete
                    continue
                for y, t in reversed(jt.followers[node]):
                    stack.append((t, w + (y,)))
        complete = length
    return words, complete


def uniform_order_bound(jt: JungleTree, sample_budget: int = 200, max_len: int | None = None,
                        order_cap: int = 256) -> UniformBound:
    """Largest order among enumerated cyclic j-words (an observed value, not a proved constant)."""
    if max_len is None:
        max_len = max(2 * jt.n, 6)
    words, complete = cyclic_j_words(jt, max_len, sample_budget)
    orders = {}
    for v in words:
        r = order_of(jt.aut, v, order_cap, growth_threshold=10 ** 9)
        if r.verdict != "Finite":
            raise CapExceeded(f"cyclic j-word {v} has no identity power up to {order_cap}")
        orders[v] = r.order
    bound = max(orders.values(), default=1)
    return UniformBound(bound, len(words), complete, jt.stem_count, orders)


# certifier

@dataclass
class Budgets:
    depth: int = 12
    max_word_len: int = 4
    max_trunk: int = 6
    order_cap: int = 256
    growth_threshold: int = 10 ** 4
    component_cap: int = 10 ** 6
    class_cap: int = 10 ** 5
    rewrite_cap: int = 10 ** 4
    rewrite_samples: int = 8
    rewrite_word_len: int = 6
    uniform_budget: int = 200
    group_cap: int = 10 ** 5
    seed: int = 0
    time_limit: float = 60.0

    def as_dict(self):
        return asdict(self)


@dataclass
class Certificate:
    classification: dict
    branch: str  # PreconditionFailed, NotBireversible, InfiniteOrderElement, FiniteGroupEvidence, Inconclusive
    rationale: str
    evidence: dict = field(default_factory=dict)
    budgets: dict = field(default_factory=dict)
    tool_version: str = __version__

    @property
    def definitive(self) -> bool:
        return self.branch in ("NotBireversible", "InfiniteOrderElement", "FiniteGroupEvidence")


NOT_BIREVERSIBLE = (
    "The automaton is invertible and reversible but not bireversible. By the known results on "
    "connected non-bireversible automata, the group it generates has an element of infinite order "
    "and is not a Burnside group. This is cited, not computed."
)


def _reject(cls, reasons, budgets):
    text = "Preconditions failed: " + ", ".join(reasons) + "."
    if "prime_size" in reasons:
        text += f" PrimeSizeRequired: {cls.size} is not prime."
    text += " The certifier only handles connected invertible-reversible automata of prime size."
    return Certificate(cls.as_dict(), "PreconditionFailed", text,
                       {"failed": reasons}, budgets.as_dict())


def certify(aut: MealyAutomaton, budgets: Budgets | None = None) -> Certificate:
    """Run the certification pipeline and return a :class:`Certificate`."""
    budgets = budgets or Budgets()
    t0 = time.monotonic()
    cls = classify(aut)
    reasons = [name for name, ok in (("invertible", cls.invertible), ("reversible", cls.reversible),
                                     ("connected", cls.connected), ("prime_size", cls.prime_size)) if not ok]
    if reasons:
        return _reject(cls, reasons, budgets)
    if not cls.bireversible:
        return Certificate(cls.as_dict(), "NotBireversible", NOT_BIREVERSIBLE, {}, budgets.as_dict())

    suspects = []
    scanned = 0
    for cand in active_candidates(aut, budgets.max_word_len, budgets.depth, budgets.component_cap):
        scanned += 1
        r = order_of(aut, cand.word, budgets.order_cap, budgets.growth_threshold, budgets.component_cap)
        if r.verdict == "InfiniteWitness" and cand.kind == "ActiveSelfLiftable":
            evidence = {
                "witness": aut.format_word(cand.word),
                "witness_indices": list(cand.word),
                "path_labels": list(cand.labels),
                "power_sizes": list(r.sizes),
                "depth": budgets.depth,
            }
            rationale = (
                f"The path of ({aut.format_word(cand.word)})^omega is |u|-self-liftable and still active at "
                f"depth {budgets.depth}, and the components of its powers grow to {r.sizes[-1]} states. "
                "An active self-liftable branch means an element of infinite order, so the group is not "
                "Burnside. Growth is observed to the stated budget, not proved unbounded."
            )
            return Certificate(cls.as_dict(), "InfiniteOrderElement", rationale, evidence, budgets.as_dict())
        if r.verdict != "Finite":
            suspects.append({"word": aut.format_word(cand.word), "kind": cand.kind, "order": r.as_dict()})

    scan = {"candidates_max_len": budgets.max_word_len, "depth": budgets.depth, "suspects": suspects}
    try:
        tree = OrbitTree(aut, budgets.max_trunk + 2, budgets.component_cap)
        jungles = find_jungle_trees(aut, tree, budgets.max_trunk)
        if not jungles:
            return Certificate(cls.as_dict(), "Inconclusive",
                               "No active periodic branch and no jungle tree within the budgets.",
                               {"scan": scan}, budgets.as_dict())
        jt = jungles[0]
        evidence = finite_group_evidence(jt, budgets, t0)
    except (MealyError, AssertionError) as exc:
        return Certificate(cls.as_dict(), "Inconclusive",
                           f"Jungle analysis stopped: {type(exc).__name__}: {exc}",
                           {"scan": scan}, budgets.as_dict())
    evidence["scan"] = scan
    order = evidence.get("group_order")
    rationale = (
        f"Jungle tree with trunk labels {list(jt.trunk_labels)} and arity {jt.arity}: every stem class "
        "starts with every state, every sampled word rewrites into a j-word with the same action, and "
        f"cyclic j-words have orders at most {evidence['uniform_bound']['bound']} (observed). A uniform "
        "bound on orders in a residually finite group gives finiteness by Zelmanov's theorem."
    )
    if order is not None:
        rationale += f" Independently, the closure of the induced maps is finite with {order} elements."
    if suspects:
        rationale += " Some periodic candidates were left undecided; see scan.suspects."
    return Certificate(cls.as_dict(), "FiniteGroupEvidence", rationale, evidence, budgets.as_dict())


def finite_group_evidence(jt: JungleTree, budgets: Budgets, t0: float | None = None) -> dict:
    aut = jt.aut
    rng = random.Random(budgets.seed)
    classes = stem_classes(jt, budgets.class_cap)
    tables = seq_peq_tables(jt, classes)
    full = set(range(aut.size))
    qprefix = all(cl.first_letters(jt) == full for cl in classes)
    if not qprefix:
        raise CapExceeded("a stem class misses some first state")
    rewrites = []
    reductions = []
    for _ in range(budgets.rewrite_samples):
        if t0 is not None and time.monotonic() - t0 > budgets.time_limit:
            break
        length = rng.randint(1, budgets.rewrite_word_len)
        u = tuple(rng.randrange(aut.size) for _ in range(length))
        jw = rewrite_as_j_word(jt, u, budgets.rewrite_cap)
        if not products_equal(aut, u, jw):
            raise AssertionError("rewrite changed the action")
        rewrites.append({"word": aut.format_word(u), "j_word": aut.format_word(jw)})
        v, e = cyclic_reduction(jt, u, rewrite_cap=budgets.rewrite_cap)
        r = order_of(aut, v, budgets.order_cap, growth_threshold=10 ** 9)
        if r.verdict != "Finite":
            raise CapExceeded(f"cyclic reduction of {u} has no identity power up to {budgets.order_cap}")
        reductions.append({"word": aut.format_word(u), "cyclic": aut.format_word(v), "exponent": e,
                           "order": r.order})
    ub = uniform_order_bound(jt, budgets.uniform_budget, order_cap=budgets.order_cap)
    report = jungle_report(jt, classes, tables)
    report["trunk_representative"] = aut.format_word(jt.stems[0])
    return {
        "jungle": report,
        "first_letters_whole_stateset": qprefix,
        "rewrites": rewrites,
        "cyclic_reductions": reductions,
        "uniform_bound": {"bound": max([ub.bound] + [r["order"] for r in reductions]), "words_checked": ub.words_checked,
                          "complete_to_length": ub.complete_to_length, "component_size": ub.component_size},
        "group_order": group_order(aut, budgets.group_cap),
    }
