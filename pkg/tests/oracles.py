"""Brute-force reference implementations used to cross-check the library.

Everything here works on a plain transition dictionary
``{(state, letter): (next_state, out_letter)}`` of names and is written
directly from the definitions, without sharing code with the package.
"""

import itertools
import math


def table(aut):
    """Transition dictionary of names, read off the automaton once."""
    return {(x, i): (y, j) for x, i, y, j in aut.transitions()}


def sim_rho_state(trans, x, s):
    out = []
    for i in s:
        x, j = trans[x, i]
        out.append(j)
    return tuple(out)


def sim_rho(trans, u, s):
    """Apply the states of ``u`` to ``s`` one after another, first state first."""
    s = tuple(s)
    for x in u:
        s = sim_rho_state(trans, x, s)
    return s


def sim_delta_letter(trans, i, u):
    out = []
    for x in u:
        y, i = trans[x, i]
        out.append(y)
    return tuple(out)


def sim_delta(trans, s, u):
    u = tuple(u)
    for i in s:
        u = sim_delta_letter(trans, i, u)
    return u


def orbits(trans, states, letters, n):
    """Orbits of ``Q^n`` under the letter actions, by union-find over all words."""
    words = list(itertools.product(states, repeat=n))
    parent = {w: w for w in words}

    def find(w):
        while parent[w] != w:
            parent[w] = parent[parent[w]]
            w = parent[w]
        return w

    for w in words:
        for i in letters:
            a, b = find(w), find(sim_delta_letter(trans, i, w))
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups = {}
    for w in words:
        groups.setdefault(find(w), set()).add(w)
    return sorted((frozenset(g) for g in groups.values()), key=min)


def orbit_tree_levels(trans, states, letters, depth):
    """List of orbit lists for levels ``0..depth``."""
    return [[frozenset({()})]] + [orbits(trans, states, letters, n) for n in range(1, depth + 1)]


def child_edges(levels, parent):
    """``(child, label)`` pairs below ``parent`` in the oracle tree."""
    n = len(next(iter(parent)))
    out = []
    for child in levels[n + 1]:
        if next(iter(child))[:n] in parent:
            out.append((child, len(child) // len(parent)))
    return out


def liftable(child_e, child_f):
    """Every word of ``child_e`` has its suffix of matching length in ``child_f``."""
    m = len(next(iter(child_f)))
    return all(w[len(w) - m:] in child_f for w in child_e)


def perm_order(trans, letters, u, k):
    """Order of the permutation ``u`` induces on words of length ``k``."""
    words = list(itertools.product(letters, repeat=k))
    image = {s: sim_rho(trans, u, s) for s in words}
    seen = set()
    order = 1
    for s in words:
        if s in seen:
            continue
        length, t = 0, s
        while t not in seen:
            seen.add(t)
            t = image[t]
            length += 1
        order = order * length // math.gcd(order, length)
    return order


def acts_identically(trans, letters, u, v, k):
    return all(sim_rho(trans, u, s) == sim_rho(trans, v, s)
               for n in range(k + 1) for s in itertools.product(letters, repeat=n))


def is_identity_upto(trans, letters, u, k):
    return all(sim_rho(trans, u, s) == s for n in range(k + 1) for s in itertools.product(letters, repeat=n))


def perm_group_size(trans, states, letters, k, limit=5000):
    """Size of the permutation group generated on words of length ``k``, or None past ``limit``."""
    words = list(itertools.product(letters, repeat=k))
    pos = {w: n for n, w in enumerate(words)}
    gens = [tuple(pos[sim_rho(trans, [x], w)] for w in words) for x in states]
    ident = tuple(range(len(words)))
    seen = {ident}
    todo = [ident]
    while todo:
        g = todo.pop()
        for h in gens:
            c = tuple(h[i] for i in g)
            if c not in seen:
                if len(seen) >= limit:
                    return None
                seen.add(c)
                todo.append(c)
    return len(seen)
