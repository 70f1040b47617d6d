"""Labeled orbit tree of the dual automaton, liftability and active branches.

Vertices are :class:`Component` objects keyed by ``(level, representative)``;
an edge is identified by its lower vertex. The tree is expanded lazily up to
``depth`` (the deepest vertex level); :func:`build` forces every level.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

from .automaton import MealyAutomaton, is_reversible
from .components import (DEFAULT_CAP, ComponentEdge, PowerWalk, children_components,
                         trivial_component)
from .errors import ComponentTooLarge, NotReversible


class OrbitTree:
    def __init__(self, aut: MealyAutomaton, depth: int, cap: int = DEFAULT_CAP):
        if not is_reversible(aut):
            raise NotReversible("the orbit tree needs a reversible automaton")
        if depth < 1:
            raise ValueError("depth must be at least 1")
        self.aut = aut
        self.depth = depth
        self.cap = cap
        self.root = trivial_component(aut)
        self._children = {}
        self._parent_edge = {}

    def children(self, c) -> list:
        """Child edges of vertex ``c``, ordered by child representative."""
        if c.level >= self.depth:
            return []
        edges = self._children.get(c.key)
        if edges is None:
            edges = children_components(self.aut, c, self.cap)
            self._children[c.key] = edges
            for e in edges:
                self._parent_edge[e.child.key] = e
        return edges

    def parent_edge(self, c):
        return self._parent_edge.get(c.key)

    def levels(self):
        """Yield the list of vertices at each level, root first, expanding fully."""
        level = [self.root]
        while level:
            yield level
            level = [e.child for c in level for e in self.children(c)]

    def edges(self):
        for level in self.levels():
            for c in level:
                yield from self.children(c)

    def vertex_count(self) -> int:
        return sum(len(level) for level in self.levels())

    def census(self) -> list:
        """Per level: number of components and the sorted list of sizes."""
        return [
            {"level": k, "components": len(level), "sizes": sorted(c.size for c in level)}
            for k, level in enumerate(self.levels())
        ]


def build(aut: MealyAutomaton, depth: int, cap: int = DEFAULT_CAP) -> OrbitTree:
    tree = OrbitTree(aut, depth, cap)
    for _ in tree.levels():
        pass
    return tree


@dataclass(frozen=True)
class TreePath:
    edges: tuple = field(default_factory=tuple)

    @property
    def labels(self) -> tuple:
        return tuple(e.label for e in self.edges)

    @property
    def initial(self) -> bool:
        return not self.edges or self.edges[0].parent.level == 0

    @property
    def bottom(self):
        return self.edges[-1].child

    def __len__(self):
        return len(self.edges)


def path_of(tree: OrbitTree, u) -> TreePath:
    u = tuple(u)
    if len(u) > tree.depth:
        raise ValueError(f"word of length {len(u)} is deeper than the tree ({tree.depth})")
    c = tree.root
    edges = []
    for m in range(1, len(u) + 1):
        prefix = u[:m]
        e = next(e for e in tree.children(c) if prefix in e.child)
        edges.append(e)
        c = e.child
    return TreePath(tuple(edges))


def is_liftable(e: ComponentEdge, f: ComponentEdge) -> bool:
    """Single-witness test: the representative of ``bot(e)`` has a suffix in ``bot(f)``."""
    m = f.child.level
    if m > e.child.level:
        return False
    w = e.child.representative
    return w[len(w) - m:] in f.child


def is_liftable_exhaustive(e: ComponentEdge, f: ComponentEdge) -> bool:
    """Definition-level test over every word of ``bot(e)``."""
    m = f.child.level
    if m > e.child.level:
        return False
    return all(w[len(w) - m:] in f.child for w in e.child.words)


def legitimate_children(tree: OrbitTree, e: ComponentEdge) -> list:
    return [f for f in tree.children(e.child) if is_liftable(f, e)]


def is_k_self_liftable(path: TreePath, k: int) -> bool:
    """Every edge at position ``m >= k`` lifts to the edge at ``m - k``."""
    if k < 1:
        raise ValueError("k must be positive")
    edges = path.edges
    return all(is_liftable(edges[m], edges[m - k]) for m in range(k, len(edges)))


class Activity(enum.Enum):
    ACTIVE = "Active"
    INACTIVE_SO_FAR = "InactiveSoFar"


def is_active(path_labels, explored_depth=None, window: int = 1) -> Activity:
    """Finite-depth activity verdict from the last ``window`` labels.

    Activity is a tail property, so ``INACTIVE_SO_FAR`` is never a proof.
    For the path of a periodic word with ``window`` equal to the period,
    labels are non-increasing along each residue class, and an all-one
    window does imply the branch is ultimately 1.
    """
    labels = list(path_labels)
    if explored_depth is not None:
        labels = labels[:explored_depth]
    tail = labels[-window:] if labels else []
    return Activity.ACTIVE if any(x > 1 for x in tail) else Activity.INACTIVE_SO_FAR


@dataclass(frozen=True)
class BranchWitness:
    word: tuple
    kind: str  # "ActiveSelfLiftable" or "InfiniteOrderSuspect"
    labels: tuple
    sizes: tuple

    def as_dict(self, aut=None):
        return {
            "word": list(self.word) if aut is None else aut.format_word(self.word),
            "kind": self.kind,
            "labels": list(self.labels),
            "sizes": list(self.sizes),
        }


def necklaces(nstates: int, max_len: int):
    """Primitive words up to rotation, by length then lexicographically.

    Each is the lexicographically least of its rotations.
    """
    for n in range(1, max_len + 1):
        for w in itertools.product(range(nstates), repeat=n):
            rots = [w[k:] + w[:k] for k in range(n)]
            if w == min(rots) and len(set(rots)) == n:
                yield w


def periodic_labels(aut: MealyAutomaton, u, depth: int, cap: int = 10 ** 6):
    """Labels and sizes along the path of ``u^omega`` down to ``depth``.

    Returns ``(labels, sizes, truncated)``; ``truncated`` is True when a
    component exceeded ``cap`` before ``depth`` was reached.
    """
    walk = PowerWalk(aut, u, cap)
    sizes = []
    try:
        for _ in range(depth):
            walk.step()
            sizes.append(walk.size)
    except ComponentTooLarge:
        return tuple(walk.labels), tuple(sizes), True
    return tuple(walk.labels), tuple(sizes), False


def active_candidates(aut: MealyAutomaton, max_word_len: int = 4, depth: int = 12, cap: int = 10 ** 6):
    """Yield a :class:`BranchWitness` for every periodic candidate that looks active.

    Paths of ``u^omega`` are ``|u|``-self-liftable, so only activity has
    to be examined.
    """
    if not is_reversible(aut):
        raise NotReversible("the orbit tree needs a reversible automaton")
    for u in necklaces(aut.size, max_word_len):
        labels, sizes, truncated = periodic_labels(aut, u, depth, cap)
        if truncated:
            yield BranchWitness(u, "InfiniteOrderSuspect", labels, sizes)
        elif is_active(labels, window=len(u)) is Activity.ACTIVE:
            yield BranchWitness(u, "ActiveSelfLiftable", labels, sizes)


def find_active_self_liftable_witness(aut: MealyAutomaton, max_word_len: int = 4, depth: int = 12,
                                      cap: int = 10 ** 6):
    """First periodic candidate whose path is still active at ``depth``, or None.

    Candidates whose components outgrow ``cap`` are only returned when no
    fully explored active candidate exists.
    """
    suspect = None
    for w in active_candidates(aut, max_word_len, depth, cap):
        if w.kind == "ActiveSelfLiftable":
            return w
        if suspect is None:
            suspect = w
    return suspect
