"""Connected components of the powers of a reversible automaton.

A component of ``A^n`` is an orbit of ``Q^n`` under the dual action. Each
:class:`Component` also stores the restriction of ``A^n`` to that orbit as
a small Mealy automaton (``trans[k][i]`` and ``out[k][i]`` for member ``k``
and letter ``i``); extending a component by one state is then a product
with ``A`` and never re-reads the member words.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .automaton import MealyAutomaton, act_delta_letter, is_reversible
from .errors import ComponentTooLarge, DecompositionViolation, NotReversible

DEFAULT_CAP = 10 ** 7


class Component:
    """An orbit of state words of equal length, members sorted lexicographically."""

    __slots__ = ("level", "words", "index", "trans", "out")

    def __init__(self, level, words, trans, out):
        self.level = level
        self.words = words
        self.index = {w: k for k, w in enumerate(words)}
        self.trans = trans
        self.out = out

    @property
    def representative(self):
        return self.words[0]

    @property
    def size(self) -> int:
        return len(self.words)

    @property
    def members(self):
        return self.index.keys()

    @property
    def key(self):
        return (self.level, self.words[0])

    def __contains__(self, word):
        return tuple(word) in self.index

    def __eq__(self, other):
        return isinstance(other, Component) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"Component(level={self.level}, rep={self.representative}, size={self.size})"

    def acts_trivially(self) -> bool:
        """Every member fixes every single letter (so ``rho_w`` is the identity)."""
        return all(row[i] == i for row in self.out for i in range(len(row)))


@dataclass(frozen=True)
class ComponentEdge:
    parent: Component
    child: Component
    label: int

    @property
    def level(self) -> int:
        return self.parent.level


def _canonical(level, words, trans, out):
    order = sorted(range(len(words)), key=words.__getitem__)
    pos = [0] * len(words)
    for new, old in enumerate(order):
        pos[old] = new
    words = tuple(words[k] for k in order)
    trans = tuple(tuple(pos[t] for t in trans[k]) for k in order)
    out = tuple(tuple(out[k]) for k in order)
    return Component(level, words, trans, out)


def trivial_component(aut: MealyAutomaton) -> Component:
    S = aut.nletters
    return Component(0, ((),), ((0,) * S,), (tuple(range(S)),))


def component_of(aut: MealyAutomaton, u, cap: int = DEFAULT_CAP, check=True) -> Component:
    """Orbit of ``u`` under the dual action, by breadth-first closure on words."""
    if check and not is_reversible(aut):
        raise NotReversible("components need a reversible automaton")
    u = tuple(u)
    if not u:
        return trivial_component(aut)
    words = [u]
    index = {u: 0}
    trans, out = [], []
    k = 0
    while k < len(words):
        w = words[k]
        trow, orow = [], []
        for i in range(aut.nletters):
            v = act_delta_letter(aut, i, w)
            j = i
            for x in w:
                j = aut.rho[x][j]
            t = index.get(v)
            if t is None:
                t = index[v] = len(words)
                words.append(v)
                if len(words) > cap:
                    raise ComponentTooLarge(cap, len(u))
            trow.append(t)
            orow.append(j)
        trans.append(tuple(trow))
        out.append(tuple(orow))
        k += 1
    return _canonical(len(u), words, trans, out)


def extend_tables(aut: MealyAutomaton, trans, out, start: int, y: int, cap: int | None = None):
    """Orbit of ``w y`` given the component automaton of ``w``.

    ``start`` is the index of ``w`` in ``trans``/``out``. Returns the new
    tables and the list of ``(parent_index, last_state)`` pairs, the seed
    ``(start, y)`` first.
    """
    S = aut.nletters
    pairs = [(start, y)]
    index = {(start, y): 0}
    ntrans, nout = [], []
    k = 0
    while k < len(pairs):
        v, z = pairs[k]
        tv, ov, dz, rz = trans[v], out[v], aut.delta[z], aut.rho[z]
        trow, orow = [], []
        for i in range(S):
            j = ov[i]
            p = (tv[i], dz[j])
            t = index.get(p)
            if t is None:
                t = index[p] = len(pairs)
                pairs.append(p)
                if cap is not None and len(pairs) > cap:
                    raise ComponentTooLarge(cap)
            trow.append(t)
            orow.append(rz[j])
        ntrans.append(trow)
        nout.append(orow)
        k += 1
    return ntrans, nout, pairs


def extend(aut: MealyAutomaton, comp: Component, start: int, y: int, cap: int = DEFAULT_CAP) -> Component:
    """Component of ``comp.words[start] + (y,)``."""
    trans, out, pairs = extend_tables(aut, comp.trans, comp.out, start, y, cap)
    words = [comp.words[v] + (z,) for v, z in pairs]
    return _canonical(comp.level + 1, words, trans, out)


def children_components(aut: MealyAutomaton, c: Component, cap: int = DEFAULT_CAP) -> list:
    """Edges from ``c`` to the components of ``A^(n+1)`` lying above it.

    Every child contains ``rep + (x,)`` for some state ``x``, so extending
    the representative by each state not yet covered finds all of them.
    """
    rep = c.representative
    children = []
    for x in range(aut.size):
        if any(rep + (x,) in ch for ch in children):
            continue
        children.append(extend(aut, c, 0, x, cap))
    children.sort(key=lambda ch: ch.representative)
    return [ComponentEdge(c, ch, ch.size // c.size) for ch in children]


def copies_decomposition(aut: MealyAutomaton, edge: ComponentEdge) -> dict:
    """Check that each parent word prefixes exactly ``label`` child words."""
    counts = Counter(w[:-1] for w in edge.child.words)
    if set(counts) != set(edge.parent.members):
        raise DecompositionViolation("child words do not project onto the parent")
    bad = {w: m for w, m in counts.items() if m != edge.label}
    if bad:
        raise DecompositionViolation(f"multiplicities differ from label {edge.label}: {bad}")
    if edge.label * edge.parent.size != edge.child.size:
        raise DecompositionViolation("label * parent size != child size")
    return dict(counts)


def power_component_sizes(aut: MealyAutomaton, u, maxm: int, cap: int = DEFAULT_CAP) -> list:
    """Sizes of the components of ``u, u^2, ..., u^maxm``."""
    if not is_reversible(aut):
        raise NotReversible("components need a reversible automaton")
    return [size for _, size in iter_power_components(aut, u, maxm, cap)]


def iter_power_components(aut: MealyAutomaton, u, maxm: int, cap: int | None = DEFAULT_CAP):
    """Yield ``(m, size of the component of u^m)`` for ``m = 1..maxm``."""
    walk = PowerWalk(aut, u, cap)
    for m in range(1, maxm + 1):
        walk.advance_period()
        yield m, walk.size


class PowerWalk:
    """Follows the path of ``u^omega`` through component automata, without words."""

    def __init__(self, aut: MealyAutomaton, u, cap: int | None = DEFAULT_CAP):
        self.aut = aut
        self.u = tuple(u)
        if not self.u:
            raise ValueError("empty word")
        self.cap = cap
        S = aut.nletters
        self.trans = [[0] * S]
        self.out = [list(range(S))]
        self.start = 0
        self.length = 0
        self.labels = []

    @property
    def size(self) -> int:
        return len(self.trans)

    def step(self):
        y = self.u[self.length % len(self.u)]
        old = self.size
        self.trans, self.out, _ = extend_tables(self.aut, self.trans, self.out, self.start, y, self.cap)
        self.start = 0
        self.length += 1
        self.labels.append(self.size // old)

    def advance_period(self):
        for _ in range(len(self.u)):
            self.step()

    def acts_trivially(self) -> bool:
        return all(row[i] == i for row in self.out for i in range(len(row)))
