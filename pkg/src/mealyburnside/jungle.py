"""Jungle trees, stems, lianas and the two equivalences on stems.

Below its trunk a jungle tree is regular with all labels 1, so a word of
length at least ``n`` (the trunk length) is a j-word exactly when every
factor of length ``n`` is a stem, and a shorter word is a j-word when it
prefixes a stem. Continuations therefore only depend on the last ``n``
states, and all walks happen on the follower graph of stems.

For a j-word ``w`` with ``|w| >= n`` the component of ``w`` has one member
per stem prefix. Its future behaviour (which extensions exist, and whether
``rho`` of an extension is the identity) is captured by a
:class:`JState`: for each stem prefix, the letter map of the member with
that prefix and the stem it currently ends with. Searches for identity
bridges run on this finite state space and are therefore exhaustive.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field

from .automaton import MealyAutomaton
from .components import Component, component_of
from .errors import CapExceeded, ChoiceOutOfRange, IncompletePartition, WellDefinednessViolation
from .orbit_tree import OrbitTree, TreePath, is_k_self_liftable, is_liftable, legitimate_children, path_of


@dataclass(frozen=True)
class JState:
    anchor: int
    entries: tuple  # per stem index: (letter map tuple, suffix stem index)

    @property
    def suffix(self) -> int:
        return self.entries[self.anchor][1]

    def is_identity(self) -> bool:
        return all(m == tuple(range(len(m))) for m, _ in self.entries)


class JungleTree:
    def __init__(self, aut: MealyAutomaton, trunk: TreePath, arity: int, verified_depth: int = 0):
        self.aut = aut
        self.trunk = trunk
        self.n = len(trunk)
        self.trunk_labels = trunk.labels
        self.arity = arity
        self.verified_depth = verified_depth
        self.stem_component: Component = trunk.bottom
        self.stems = self.stem_component.words
        self.stem_index = self.stem_component.index
        follow = []
        for s in self.stems:
            row = []
            for y in range(aut.size):
                t = self.stem_index.get(s[1:] + (y,))
                if t is not None:
                    row.append((y, t))
            follow.append(tuple(row))
        self.followers = tuple(follow)
        self._prefixes = {s[:k] for s in self.stems for k in range(self.n + 1)}
        self._searches = {}

    def __repr__(self):
        return f"JungleTree(labels={self.trunk_labels}, arity={self.arity})"

    @property
    def stem_count(self) -> int:
        return len(self.stems)

    # j-words
    def tail(self, word):
        """The part of ``word`` its continuations depend on."""
        word = tuple(word)
        return word[-self.n:] if len(word) > self.n else word

    def next_letters(self, word) -> list:
        """States ``y`` with ``word + (y,)`` a j-word (``word`` assumed a j-word)."""
        t = self.tail(word)
        if len(t) == self.n:
            return [y for y, _ in self.followers[self.stem_index[t]]]
        return [y for y in range(self.aut.size) if t + (y,) in self._prefixes]

    def is_j_word(self, u) -> bool:
        u = tuple(u)
        n = self.n
        if len(u) < n:
            return u in self._prefixes
        return all(u[k:k + n] in self.stem_index for k in range(len(u) - n + 1))

    def is_cyclic_j_word(self, u) -> bool:
        u = tuple(u)
        if not u:
            raise ValueError("empty word")
        m = -(-(self.n + len(u)) // len(u)) + 1
        return self.is_j_word(u * m)

    def greedy_extension(self, word, k: int, choice: int = 0):
        """Extend the j-word ``word`` by ``k`` states, always taking ``choice``."""
        word = tuple(word)
        for _ in range(k):
            ys = self.next_letters(word)
            word = word + (ys[choice],)
        return word

    # state machine for identity searches
    def initial_state(self, stem: int) -> JState:
        comp = self.stem_component
        return JState(stem, tuple((comp.out[p], p) for p in range(len(self.stems))))

    def advance(self, state: JState, y: int):
        """State after appending ``y``, or None if that leaves the jungle tree."""
        stems, index = self.stems, self.stem_index
        if index.get(stems[state.suffix][1:] + (y,)) is None:
            return None
        aut, trans = self.aut, self.stem_component.trans
        entries = state.entries
        z = [None] * len(stems)
        z[state.anchor] = y
        todo = [state.anchor]
        while todo:
            p = todo.pop()
            m = entries[p][0]
            for i, q in enumerate(trans[p]):
                zq = aut.delta[z[p]][m[i]]
                if z[q] is None:
                    z[q] = zq
                    todo.append(q)
                elif z[q] != zq:
                    raise AssertionError("label above 1 inside the jungle tree")
        new = []
        for p, (m, suf) in enumerate(entries):
            rz = aut.rho[z[p]]
            new.append((tuple(rz[j] for j in m), index[stems[suf][1:] + (z[p],)]))
        return JState(state.anchor, tuple(new))

    def state_of(self, w) -> JState:
        """State of a j-word of length at least ``n``."""
        w = tuple(w)
        st = self.initial_state(self.stem_index[w[:self.n]])
        for y in w[self.n:]:
            st = self.advance(st, y)
            if st is None:
                raise ValueError("not a j-word")
        return st

    def reach_n(self, stem: int) -> set:
        """Stems ``v`` such that ``stem + v`` is a j-word."""
        cur = {stem}
        for _ in range(self.n):
            cur = {t for s in cur for _, t in self.followers[s]}
        return cur

    def bridge_search(self, u: int, cap: int = 10 ** 5):
        """Exhaustive BFS for identity bridges from stem ``u``.

        Returns ``(witnesses, complete)`` where ``witnesses[v]`` is the
        BFS-first word ``s`` with ``u s v`` a j-word and ``rho(u s)`` the
        identity, for every stem ``v`` related to ``u``. ``complete`` is
        False when ``cap`` states were explored before exhaustion.
        """
        key = (u, cap)
        if key in self._searches:
            return self._searches[key]
        start = self.initial_state(u)
        parent = {start: None}
        order = deque([start])
        found = {}
        complete = True
        while order:
            st = order.popleft()
            if st.is_identity():
                bridge = None
                for v in sorted(self.reach_n(st.suffix)):
                    if v not in found:
                        if bridge is None:
                            bridge = _unwind(parent, st)
                        found[v] = bridge
            for y, _ in self.followers[st.suffix]:
                nxt = self.advance(st, y)
                if nxt not in parent:
                    if len(parent) >= cap:
                        complete = False
                        continue
                    parent[nxt] = (st, y)
                    order.append(nxt)
        result = (found, complete)
        self._searches[key] = result
        return result


def _unwind(parent, st):
    out = []
    while parent[st] is not None:
        st, y = parent[st]
        out.append(y)
    return tuple(reversed(out))


def find_jungle_trees(aut: MealyAutomaton, tree: OrbitTree, max_trunk: int, verify_budget: int = 2000) -> list:
    """All jungle trees whose trunk has at most ``max_trunk`` edges.

    Trunks are initial paths made of legitimate children, which is what
    1-self-liftability means for a single path. Labels along such a path
    never increase, so trunks through a label-1 edge are pruned.
    """
    found = []
    stack = [(e,) for e in reversed(tree.children(tree.root))]
    while stack:
        path = stack.pop()
        e = path[-1]
        if e.label < 2 or e.child.level >= tree.depth:
            continue
        leg = legitimate_children(tree, e)
        if len(leg) >= 2 and all(f.label == 1 for f in leg):
            trunk = TreePath(path)
            depth = verify_regularity(tree, trunk, len(leg), verify_budget)
            found.append(JungleTree(aut, trunk, len(leg), depth))
            continue
        if len(path) < max_trunk:
            stack.extend(path + (f,) for f in reversed(leg))
    found.sort(key=lambda jt: (jt.n, jt.stem_component.representative))
    return found


def verify_regularity(tree: OrbitTree, trunk: TreePath, arity: int, budget: int = 2000) -> int:
    """Check the subtree below the trunk down to the tree depth.

    Every descendant edge liftable to the last trunk edge must have label
    1, and each such vertex must have ``arity`` such children. Returns
    the deepest level fully checked.
    """
    last = trunk.edges[-1]
    frontier = [last.child]
    level = last.child.level
    seen = 0
    while frontier and level < tree.depth:
        nxt = []
        for c in frontier:
            kids = [f for f in tree.children(c) if is_liftable(f, last)]
            if len(kids) != arity or any(f.label != 1 for f in kids):
                raise WellDefinednessViolation(f"subtree below trunk is not regular at level {level}")
            nxt.extend(f.child for f in kids)
            seen += len(kids)
        if seen > budget:
            return level
        frontier = nxt
        level += 1
    return level


def stems(jt: JungleTree) -> list:
    return list(jt.stems)


def stems_with_prefix(jt: JungleTree, prefix) -> list:
    prefix = tuple(prefix)
    return [s for s in jt.stems if s[:len(prefix)] == prefix]


def is_j_word(jt: JungleTree, u) -> bool:
    return jt.is_j_word(u)


def is_cyclic_j_word(jt: JungleTree, u) -> bool:
    return jt.is_cyclic_j_word(u)


def find_cyclic_j_word(jt: JungleTree, start=None):
    """Greedy walk (choice 0) until a length-``n`` window repeats."""
    n = jt.n
    word = tuple(start) if start is not None else jt.stems[0]
    seen = {word[:n]: 0}
    budget = n * (1 + jt.aut.size ** n)
    pos = 0
    while len(word) <= budget + n:
        word = jt.greedy_extension(word, 1)
        pos += 1
        window = word[pos:pos + n]
        if window in seen:
            return word[seen[window]:pos]
        seen[window] = pos
    raise CapExceeded("no repeated window within the pigeonhole budget")


class LianaCursor:
    """Depth-first navigation of the liana ``start L_start``.

    Each step appends one of ``arity`` states; the choice index selects
    among them in increasing state order.
    """

    def __init__(self, jt: JungleTree, start):
        start = tuple(start)
        if start not in jt.stem_index:
            raise ValueError("a liana starts at a stem")
        self.jt = jt
        self.word = start

    @property
    def suffix(self):
        return self.word[-self.jt.n:]

    @property
    def length(self) -> int:
        return len(self.word)

    def choices(self) -> list:
        return self.jt.next_letters(self.word)

    def step(self, choice: int):
        ys = self.choices()
        if not 0 <= choice < len(ys):
            raise ChoiceOutOfRange(f"choice {choice} not in range({len(ys)})")
        self.word = self.word + (ys[choice],)
        return ys[choice]

    def windows(self):
        n = self.jt.n
        return [self.word[k:k + n] for k in range(len(self.word) - n + 1)]

    def restart(self) -> "LianaCursor":
        return LianaCursor(self.jt, self.suffix)


def liana_walk(jt: JungleTree, start) -> LianaCursor:
    return LianaCursor(jt, start)


def random_liana_word(jt: JungleTree, length: int, rng: random.Random):
    """A j-word of ``length`` states drawn along a random liana."""
    word = jt.stems[rng.randrange(jt.stem_count)]
    while len(word) < length:
        word = word + (rng.choice(jt.next_letters(word)),)
    return word[:length]


def find_recurrence(jt: JungleTree, t, u, v, cap=None):
    """A word ``w`` with ``t u v w u`` a j-word, by BFS over walk tails.

    ``cap`` bounds ``|w|``; it defaults to ``n (1 + |Q|^n)``.
    """
    t, u, v = tuple(t), tuple(u), tuple(v)
    head = t + u + v
    if not jt.is_j_word(head):
        raise ValueError("t u v is not a j-word")
    if cap is None:
        cap = jt.n * (1 + jt.aut.size ** jt.n)
    start = jt.tail(head)
    parent = {start: None}
    todo = deque([(start, 0)])
    while todo:
        tail, depth = todo.popleft()
        if jt.is_j_word(tail + u):
            w = []
            node = tail
            while parent[node] is not None:
                node, y = parent[node]
                w.append(y)
            w = tuple(reversed(w))
            assert jt.is_j_word(head + w + u)
            return w
        if depth >= cap:
            continue
        for y in jt.next_letters(tail):
            nxt = jt.tail(tail + (y,))
            if nxt not in parent:
                parent[nxt] = (tail, y)
                todo.append((nxt, depth + 1))
    raise CapExceeded(f"no recurrence of {u} found with |w| <= {cap}")


def is_identity_action(aut: MealyAutomaton, w, cap: int = 10 ** 7) -> bool:
    """``rho_w`` is the identity: every member of the component of ``w`` fixes each letter."""
    w = tuple(w)
    if not w:
        return True
    return component_of(aut, w, cap, check=False).acts_trivially()


def stem_equivalent(jt: JungleTree, u, v, cap: int = 10 ** 5):
    """A bridge ``s`` with ``u s v`` a j-word and ``rho(u s)`` trivial, or None."""
    iu, iv = jt.stem_index[tuple(u)], jt.stem_index[tuple(v)]
    found, _ = jt.bridge_search(iu, cap)
    return found.get(iv)


def wedge_related(jt: JungleTree, u, v) -> bool:
    """Some stem ``s`` has both ``s u`` and ``s v`` as j-words."""
    iu, iv = jt.stem_index[tuple(u)], jt.stem_index[tuple(v)]
    return any(iu in r and iv in r for r in (jt.reach_n(s) for s in range(jt.stem_count)))


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x, y):
        x, y = self.find(x), self.find(y)
        if x != y:
            self.parent[max(x, y)] = min(x, y)

    def groups(self):
        out = {}
        for x in range(len(self.parent)):
            out.setdefault(self.find(x), []).append(x)
        return sorted(out.values())


def wedge_classes(jt: JungleTree) -> list:
    """Transitive closure of ``wedge_related``, as sorted lists of stem indices."""
    uf = _UnionFind(jt.stem_count)
    for s in range(jt.stem_count):
        r = sorted(jt.reach_n(s))
        for v in r[1:]:
            uf.union(r[0], v)
    return uf.groups()


@dataclass
class StemClass:
    members: tuple  # stem indices, sorted
    witnesses: dict = field(default_factory=dict)  # (u, v) stem indices -> bridge

    def first_letters(self, jt: JungleTree) -> set:
        return {jt.stems[k][0] for k in self.members}


def stem_classes(jt: JungleTree, cap: int = 10 ** 5) -> list:
    """Partition of the stems into classes of the bridge equivalence.

    The wedge closure seeds a union-find; each class is then completed
    from one exhaustive bridge search per representative. Raises
    IncompletePartition when a search hits ``cap``, and
    WellDefinednessViolation if the searched relation is not an
    equivalence (possible only when the automaton has elements of
    infinite order).
    """
    N = jt.stem_count
    uf = _UnionFind(N)
    for group in wedge_classes(jt):
        for v in group[1:]:
            uf.union(group[0], v)
    related = {}
    for u in range(N):
        root = uf.find(u)
        if root in related:
            continue
        found, complete = jt.bridge_search(u, cap)
        if not complete:
            raise IncompletePartition(f"bridge search from stem {u} exceeded {cap} states")
        if u not in found:
            raise WellDefinednessViolation(f"stem {jt.stems[u]} is not related to itself")
        related[u] = found
        for v in found:
            uf.union(u, v)
    classes = []
    for group in uf.groups():
        reps = [u for u in group if u in related]
        rep = reps[0]
        if set(related[rep]) != set(group):
            raise WellDefinednessViolation("bridge relation is not transitive on the seeded classes")
        witnesses = {(rep, v): s for v, s in related[rep].items()}
        classes.append(StemClass(tuple(group), witnesses))
    return classes


def seq_peq_tables(jt: JungleTree, classes: list):
    """Per level ``i = 1..n``: suffix count inside a class and class count per prefix.

    Returns two lists indexed from level 1. Raises
    WellDefinednessViolation if either count depends on the chosen
    prefix or class.
    """
    n = jt.n
    S_eq, P_eq = [], []
    for i in range(1, n + 1):
        s_vals, p_vals = set(), set()
        prefixes = {s[:i - 1] for s in jt.stems}
        for pre in prefixes:
            hits = 0
            for cl in classes:
                nexts = {jt.stems[k][i - 1] for k in cl.members if jt.stems[k][:i - 1] == pre}
                if nexts:
                    hits += 1
                    s_vals.add(len(nexts))
            p_vals.add(hits)
        if len(s_vals) != 1 or len(p_vals) != 1:
            raise WellDefinednessViolation(
                f"level {i}: suffix counts {sorted(s_vals)}, class counts {sorted(p_vals)}")
        S_eq.append(s_vals.pop())
        P_eq.append(p_vals.pop())
    return S_eq, P_eq


def class_of(classes: list, stem: int) -> StemClass:
    return next(cl for cl in classes if stem in cl.members)


def identity_continuation(jt: JungleTree, u, x: int, cap: int = 10 ** 5):
    """A word ``w`` with ``u w x`` a j-word and ``rho_w`` trivial.

    Tries the empty bridge first; otherwise extends ``u`` by a stem ``s``
    (greedy walk) and bridges from ``s`` to a related stem starting
    with ``x``.
    """
    u = tuple(u)
    if jt.is_j_word(u + (x,)):
        return ()
    if u:
        s = jt.greedy_extension(u, jt.n)[-jt.n:]
    else:
        s = jt.stems[0]
    found, _ = jt.bridge_search(jt.stem_index[s], cap)
    options = sorted((len(b), b, v) for v, b in found.items() if jt.stems[v][0] == x)
    if not options:
        raise CapExceeded(f"no identity bridge from {s} to a stem starting with {x}")
    w = s + options[0][1]
    if not jt.is_j_word(u + w + (x,)):
        raise AssertionError("bridge does not continue the j-word")
    return w


def jungle_report(jt: JungleTree, classes=None, tables=None) -> dict:
    aut = jt.aut
    out = {
        "trunk_labels": list(jt.trunk_labels),
        "trunk_length": jt.n,
        "arity": jt.arity,
        "stem_count": jt.stem_count,
        "stems": [aut.format_word(s) for s in jt.stems],
        "verified_depth": jt.verified_depth,
    }
    if classes is not None:
        out["classes"] = [[aut.format_word(jt.stems[k]) for k in cl.members] for cl in classes]
        out["class_witnesses"] = [
            {"from": aut.format_word(jt.stems[a]), "to": aut.format_word(jt.stems[b]),
             "bridge": aut.format_word(s)}
            for cl in classes for (a, b), s in sorted(cl.witnesses.items())
        ]
    if tables is not None:
        out["S_eq"], out["P_eq"] = list(tables[0]), list(tables[1])
    return out


def jungle_from_stem(aut: MealyAutomaton, stem, verify_depth: int = 2) -> JungleTree:
    """Rebuild the jungle tree whose stems include ``stem`` (its trunk is the path of ``stem``)."""
    stem = tuple(stem)
    tree = OrbitTree(aut, len(stem) + verify_depth)
    trunk = path_of(tree, stem)
    if not is_k_self_liftable(trunk, 1):
        raise ValueError("the path of the stem is not 1-self-liftable")
    leg = legitimate_children(tree, trunk.edges[-1])
    if len(leg) < 2 or any(f.label != 1 for f in leg):
        raise ValueError("the bottom of the path is not a jungle root")
    depth = verify_regularity(tree, trunk, len(leg))
    return JungleTree(aut, trunk, len(leg), depth)
