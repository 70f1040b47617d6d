"""Mealy automata, their induced actions and structural classification.

States and letters are dense integer indices; display names are kept in
``states`` and ``letters``. Words are tuples of indices. The transition
table ``delta[x][i]`` is the target of state ``x`` reading letter ``i`` and
``rho[x][i]`` is the letter it outputs.

Composition follows the left-to-right convention: for a state word
``u = x1 x2 ... xn`` the induced map is ``rho_xn o ... o rho_x1``, so the
first state of ``u`` acts first. The dual action of a letter word is
composed the same way.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ComponentTooLarge, DuplicateTransition, MissingTransition, NotInvertible, UnknownName

Word = tuple


@dataclass(frozen=True)
class MealyAutomaton:
    states: tuple
    letters: tuple
    delta: tuple
    rho: tuple

    @property
    def size(self) -> int:
        return len(self.states)

    @property
    def nletters(self) -> int:
        return len(self.letters)

    def state_index(self, name) -> int:
        try:
            return self.states.index(name)
        except ValueError:
            raise UnknownName(f"unknown state {name!r}") from None

    def letter_index(self, name) -> int:
        try:
            return self.letters.index(name)
        except ValueError:
            raise UnknownName(f"unknown letter {name!r}") from None

    def word(self, text) -> Word:
        """State word from names.

        ``text`` may be a sequence of names or a string. A string is read
        character by character (ignoring spaces) when every name is a
        single character, and split on whitespace otherwise, matching
        :meth:`format_word`.
        """
        return tuple(self.state_index(t) for t in _tokens(text, self.states))

    def letter_word(self, text) -> Word:
        return tuple(self.letter_index(t) for t in _tokens(text, self.letters))

    def format_word(self, word: Sequence[int]) -> str:
        return _join(self.states[x] for x in word)

    def format_letters(self, word: Sequence[int]) -> str:
        return _join(self.letters[i] for i in word)

    def transitions(self):
        """Quadruples ``(state, letter, next_state, out_letter)`` as names."""
        return [
            (self.states[x], self.letters[i], self.states[self.delta[x][i]], self.letters[self.rho[x][i]])
            for x in range(self.size)
            for i in range(self.nletters)
        ]


def _tokens(text, names):
    if not isinstance(text, str):
        return list(text)
    if all(len(str(n)) == 1 for n in names):
        return [c for c in text if not c.isspace()]
    return text.split()


def _join(names):
    names = [str(n) for n in names]
    if all(len(n) == 1 for n in names):
        return "".join(names)
    return " ".join(names)


def validate(raw_transitions: Iterable, states=None, letters=None) -> MealyAutomaton:
    """Build an automaton from ``(state, in_letter, next_state, out_letter)``.

    When ``states``/``letters`` are omitted they are taken in order of first
    appearance. Raises MissingTransition, DuplicateTransition or UnknownName.
    """
    quads = [tuple(q) for q in raw_transitions]
    for q in quads:
        if len(q) != 4:
            raise ValueError(f"transition {q!r} is not a quadruple")
    declared = states is not None, letters is not None
    if states is None:
        states = _first_seen(itertools.chain.from_iterable((q[0], q[2]) for q in quads))
    if letters is None:
        letters = _first_seen(itertools.chain.from_iterable((q[1], q[3]) for q in quads))
    states, letters = tuple(states), tuple(letters)
    for names, kind in ((states, "state"), (letters, "letter")):
        if len(set(names)) != len(names):
            raise DuplicateTransition(f"duplicate {kind} name in {names!r}")
        if not names:
            raise MissingTransition(f"automaton needs at least one {kind}")
    sidx = {s: k for k, s in enumerate(states)}
    lidx = {a: k for k, a in enumerate(letters)}

    delta = [[None] * len(letters) for _ in states]
    rho = [[None] * len(letters) for _ in states]
    for x, i, y, j in quads:
        for name, table, kind, flag in ((x, sidx, "state", declared[0]), (y, sidx, "state", declared[0]),
                                         (i, lidx, "letter", declared[1]), (j, lidx, "letter", declared[1])):
            if name not in table:
                raise UnknownName(f"unknown {kind} {name!r}")
        xs, il = sidx[x], lidx[i]
        if delta[xs][il] is not None:
            raise DuplicateTransition(f"two transitions for ({x!r}, {i!r})")
        delta[xs][il] = sidx[y]
        rho[xs][il] = lidx[j]
    for xs, row in enumerate(delta):
        for il, target in enumerate(row):
            if target is None:
                raise MissingTransition(f"no transition for ({states[xs]!r}, {letters[il]!r})")
    return MealyAutomaton(states, letters, tuple(map(tuple, delta)), tuple(map(tuple, rho)))


def from_tables(delta, rho, states=None, letters=None) -> MealyAutomaton:
    """Automaton from index tables ``delta[x][i]``, ``rho[x][i]``."""
    nq, ns = len(delta), len(delta[0])
    states = tuple(states) if states is not None else tuple(str(k) for k in range(nq))
    letters = tuple(letters) if letters is not None else tuple(str(k) for k in range(ns))
    quads = [(states[x], letters[i], states[delta[x][i]], letters[rho[x][i]])
             for x in range(nq) for i in range(ns)]
    return validate(quads, states, letters)


def _first_seen(names):
    out = []
    for n in names:
        if n not in out:
            out.append(n)
    return out


def _is_perm(seq, n):
    return len(seq) == n and sorted(seq) == list(range(n))


def is_invertible(aut: MealyAutomaton) -> bool:
    return all(_is_perm(aut.rho[x], aut.nletters) for x in range(aut.size))


def is_reversible(aut: MealyAutomaton) -> bool:
    return all(_is_perm([aut.delta[x][i] for x in range(aut.size)], aut.size)
               for i in range(aut.nletters))


def is_bireversible(aut: MealyAutomaton) -> bool:
    """Reversible, and each output letter induces a permutation of states.

    A non-invertible automaton is never bireversible (the output-letter
    relation is not even functional), so this returns False rather than
    raising.
    """
    if not (is_invertible(aut) and is_reversible(aut)):
        return False
    return is_reversible(inverse(aut))


def is_connected(aut: MealyAutomaton) -> bool:
    adj = [set() for _ in range(aut.size)]
    for x in range(aut.size):
        for y in aut.delta[x]:
            adj[x].add(y)
            adj[y].add(x)
    seen = {0}
    todo = [0]
    while todo:
        x = todo.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return len(seen) == aut.size


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n ** 0.5) + 1))


@dataclass(frozen=True)
class Classification:
    invertible: bool
    reversible: bool
    bireversible: bool
    connected: bool
    size: int
    prime_size: bool

    def as_dict(self):
        return dict(self.__dict__)


def classify(aut: MealyAutomaton) -> Classification:
    return Classification(
        invertible=is_invertible(aut),
        reversible=is_reversible(aut),
        bireversible=is_bireversible(aut),
        connected=is_connected(aut),
        size=aut.size,
        prime_size=is_prime(aut.size),
    )


def dual(aut: MealyAutomaton) -> MealyAutomaton:
    """Swap states with letters and transitions with outputs."""
    delta = tuple(tuple(aut.rho[x][i] for x in range(aut.size)) for i in range(aut.nletters))
    rho = tuple(tuple(aut.delta[x][i] for x in range(aut.size)) for i in range(aut.nletters))
    return MealyAutomaton(aut.letters, aut.states, delta, rho)


def inverse(aut: MealyAutomaton) -> MealyAutomaton:
    """The automaton of inverse maps: ``x --rho_x(i)|i--> delta_i(x)``.

    States keep their names and indices, so ``inverse(aut)`` state ``x``
    induces ``rho_x`` inverted.
    """
    if not is_invertible(aut):
        raise NotInvertible("inverse requires an invertible automaton")
    delta = []
    rho = []
    for x in range(aut.size):
        inv = [0] * aut.nletters
        for i, j in enumerate(aut.rho[x]):
            inv[j] = i
        rho.append(tuple(inv))
        delta.append(tuple(aut.delta[x][inv[j]] for j in range(aut.nletters)))
    return MealyAutomaton(aut.states, aut.letters, tuple(delta), tuple(rho))


def act_rho_state(aut: MealyAutomaton, x: int, s: Sequence[int]) -> Word:
    out = []
    for i in s:
        out.append(aut.rho[x][i])
        x = aut.delta[x][i]
    return tuple(out)


def act_rho(aut: MealyAutomaton, u: Sequence[int], s: Sequence[int]) -> Word:
    """Image of the letter word ``s`` under ``rho_u`` (first state acts first)."""
    s = tuple(s)
    for x in u:
        s = act_rho_state(aut, x, s)
    return s


def act_delta_letter(aut: MealyAutomaton, i: int, u: Sequence[int]) -> Word:
    out = []
    for x in u:
        out.append(aut.delta[x][i])
        i = aut.rho[x][i]
    return tuple(out)


def act_delta(aut: MealyAutomaton, s: Sequence[int], u: Sequence[int]) -> Word:
    """Dual action of the letter word ``s`` on the state word ``u``."""
    u = tuple(u)
    for i in s:
        u = act_delta_letter(aut, i, u)
    return u


def reachable_words(aut: MealyAutomaton, u: Sequence[int], cap: int | None = None) -> set:
    """Forward closure of ``u`` under single-letter dual actions."""
    u = tuple(u)
    seen = {u}
    todo = deque([u])
    while todo:
        w = todo.popleft()
        for i in range(aut.nletters):
            v = act_delta_letter(aut, i, w)
            if v not in seen:
                seen.add(v)
                if cap is not None and len(seen) > cap:
                    raise ComponentTooLarge(cap, len(u))
                todo.append(v)
    return seen


def disjoint_union(a: MealyAutomaton, b: MealyAutomaton, suffix="'") -> MealyAutomaton:
    """Automaton on ``a.states + b.states`` (b's indices shifted by ``a.size``)."""
    if a.letters != b.letters:
        raise ValueError("alphabets differ")
    off = a.size
    names = tuple(str(s) for s in a.states) + tuple(str(s) + suffix for s in b.states)
    delta = a.delta + tuple(tuple(y + off for y in row) for row in b.delta)
    return MealyAutomaton(names, a.letters, delta, a.rho + b.rho)


def products_equal(aut: MealyAutomaton, u: Sequence[int], v: Sequence[int], cap: int | None = 10 ** 6) -> bool:
    """Exact test of ``rho_u == rho_v`` on all of ``Sigma*``.

    Uses ``rho_u o rho_v^{-1}`` written as a word over the union of the
    automaton with its inverse, and checks that it acts trivially on
    every letter from every reachable state word.
    """
    both = disjoint_union(aut, inverse(aut))
    word = tuple(v_i + aut.size for v_i in reversed(tuple(v))) + tuple(u)
    return is_identity_word(both, word, cap)


def is_identity_word(aut: MealyAutomaton, w: Sequence[int], cap: int | None = None) -> bool:
    """``rho_w`` is the identity of ``Sigma*``.

    ``rho_w(i s) = rho_w(i) rho_{delta_i(w)}(s)``, so this holds exactly
    when every word reachable from ``w`` by the dual action fixes every
    single letter.
    """
    for v in reachable_words(aut, w, cap):
        for i in range(aut.nletters):
            if act_rho(aut, v, (i,)) != (i,):
                return False
    return True


def all_automata(nstates: int, nletters: int, *, invertible=True, reversible=True):
    """Enumerate every automaton of the given shape, optionally filtered.

    Restricting to invertible/reversible automata enumerates permutation
    tables directly instead of filtering.
    """
    Q, S = range(nstates), range(nletters)
    if invertible:
        out_rows = list(itertools.permutations(S))
    else:
        out_rows = list(itertools.product(S, repeat=nletters))
    if reversible:
        col_choices = list(itertools.permutations(Q))
    else:
        col_choices = list(itertools.product(Q, repeat=nstates))
    for rho in itertools.product(out_rows, repeat=nstates):
        for cols in itertools.product(col_choices, repeat=nletters):
            delta = tuple(tuple(cols[i][x] for i in S) for x in Q)
            yield from_tables(delta, rho)
