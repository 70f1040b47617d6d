import itertools
import math
import random

import pytest

from mealyburnside.automaton import act_rho, products_equal
from mealyburnside.errors import ChoiceOutOfRange
from mealyburnside.io import load_fixture
from mealyburnside.jungle import (class_of, find_cyclic_j_word, find_jungle_trees, find_recurrence,
                                  identity_continuation, is_identity_action, jungle_from_stem, jungle_report,
                                  liana_walk, random_liana_word, seq_peq_tables, stem_classes, stem_equivalent,
                                  stems_with_prefix, wedge_classes, wedge_related)
from mealyburnside.orbit_tree import OrbitTree
from conftest import JUNGLE_FIXTURES, PRIME_JUNGLE_FIXTURES
from oracles import is_identity_upto, orbits, table

_cache = {}


def jungle(name):
    if name not in _cache:
        aut = load_fixture(name)
        _cache[name] = find_jungle_trees(aut, OrbitTree(aut, 8), 6)[0]
    return _cache[name]


def oracle_j_words(jt, length):
    """j-words of ``length >= n`` straight from the definition.

    The prefix of length ``n`` is a stem and every later edge of the path
    is liftable to the last trunk edge, i.e. every word of each lower
    vertex ends with a stem (orbits from union-find).
    """
    aut = jt.aut
    t = table(aut)
    stems = {tuple(aut.states[x] for x in s) for s in jt.stems}
    levels = {m: orbits(t, aut.states, aut.letters, m) for m in range(jt.n, length + 1)}

    def vertex(w):
        return next(o for o in levels[len(w)] if w in o)

    out = set()
    for w in itertools.product(aut.states, repeat=length):
        if w[:jt.n] not in stems:
            continue
        if all(all(x[-jt.n:] in stems for x in vertex(w[:m])) for m in range(jt.n + 1, length + 1)):
            out.add(aut.word(list(w)))
    return out


@pytest.mark.parametrize("name", ["jungle3_order8", "jungle3_trunk32", "jungle3_trunk33", "composite4_two_classes"])
def test_j_words_match_definition(name):
    jt = jungle(name)
    for length in range(jt.n, jt.n + 3):
        ours = {w for w in itertools.product(range(jt.aut.size), repeat=length) if jt.is_j_word(w)}
        assert ours == oracle_j_words(jt, length)


def test_trunk_shapes():
    shapes = {name: (jungle(name).trunk_labels, jungle(name).arity) for name in JUNGLE_FIXTURES}
    assert shapes == {
        "jungle3_order8": ((3,), 3), "jungle3_order4": ((3,), 3), "jungle3_trunk32": ((3, 2), 2),
        "jungle3_trunk33": ((3, 3), 3), "jungle3_trunk3322": ((3, 3, 2, 2), 2), "cycle5": ((5,), 5),
        "composite4_two_classes": ((4, 2), 2), "composite4_trunk422": ((4, 2, 2), 2),
    }


def test_stems_are_the_bottom_orbit():
    for name in JUNGLE_FIXTURES:
        jt = jungle(name)
        aut = jt.aut
        t = table(aut)
        rep = tuple(aut.states[x] for x in jt.stems[0])
        orbit = next(o for o in orbits(t, aut.states, aut.letters, jt.n) if rep in o)
        assert {tuple(aut.states[x] for x in s) for s in jt.stems} == set(orbit)


def test_no_jungle_for_bellaterra(bellaterra):
    # abab... stays active, so a trunk would need an ever-growing label sequence
    assert find_jungle_trees(bellaterra, OrbitTree(bellaterra, 6), 4) == []


def test_jungle_from_stem_round_trip():
    for name in JUNGLE_FIXTURES:
        jt = jungle(name)
        again = jungle_from_stem(jt.aut, jt.stems[-1])
        assert again.stems == jt.stems and again.trunk_labels == jt.trunk_labels


def test_jungle_from_stem_rejects(bellaterra):
    with pytest.raises(ValueError):
        jungle_from_stem(bellaterra, bellaterra.word("ab"))


@pytest.mark.parametrize("name", JUNGLE_FIXTURES)
def test_counting(name):
    jt = jungle(name)
    k = jt.trunk_labels
    assert jt.stem_count == math.prod(k)
    for i in range(jt.n):
        for pre in {s[:i] for s in jt.stems}:
            assert len(stems_with_prefix(jt, pre)) == math.prod(k[i:])
    classes = stem_classes(jt)
    assert len({len(cl.members) for cl in classes}) == 1
    S, P = seq_peq_tables(jt, classes)
    assert all(s >= jt.arity >= 2 for s in S)
    # S_eq(l) P_eq(l) = k_l P_eq(l+1), which is k_l when every P_eq is 1
    assert all(S[i] * P[i] == k[i] * (P[i + 1] if i + 1 < jt.n else 1) for i in range(jt.n))


def test_class_tables_frozen():
    tables = {name: seq_peq_tables(jungle(name), stem_classes(jungle(name))) for name in JUNGLE_FIXTURES}
    assert tables["jungle3_trunk3322"] == ([3, 3, 2, 2], [1, 1, 1, 1])
    assert tables["cycle5"] == ([5], [1])
    assert tables["composite4_two_classes"] == ([2, 2], [2, 1])
    assert tables["composite4_trunk422"] == ([2, 2, 2], [2, 1, 1])


@pytest.mark.parametrize("name", PRIME_JUNGLE_FIXTURES)
def test_first_letters_whole_stateset(name):
    jt = jungle(name)
    for cl in stem_classes(jt):
        assert cl.first_letters(jt) == set(range(jt.aut.size))


def test_first_letters_fail_for_composite_size():
    jt = jungle("composite4_two_classes")
    firsts = [cl.first_letters(jt) for cl in stem_classes(jt)]
    assert sorted(map(sorted, firsts)) == [[0, 3], [1, 2]]


def _bounded_sim_classes(jt, max_bridge, k):
    """Stem partition from brute-force bridges up to ``max_bridge`` states.

    Identity is tested on all letter words up to length ``k`` with the
    simulation oracle, so this is a lower approximation of the relation.
    """
    aut = jt.aut
    t = table(aut)
    names = [tuple(aut.states[x] for x in s) for s in jt.stems]
    related = {}
    for a, u in enumerate(jt.stems):
        for length in range(max_bridge + 1):
            for s in itertools.product(range(aut.size), repeat=length):
                us = u + s
                ident = None
                for b, v in enumerate(jt.stems):
                    if jt.is_j_word(us + v):
                        if ident is None:
                            ident = is_identity_upto(t, aut.letters, [aut.states[x] for x in us], k)
                        if ident:
                            related.setdefault(names[a], set()).add(names[b])
    return {frozenset(v) for v in related.values()}


@pytest.mark.parametrize("name", ["jungle3_order8", "jungle3_trunk32", "jungle3_trunk33", "composite4_two_classes"])
def test_classes_match_bounded_oracle(name):
    jt = jungle(name)
    aut = jt.aut
    ours = {frozenset(tuple(aut.states[x] for x in jt.stems[m]) for m in cl.members) for cl in stem_classes(jt)}
    assert _bounded_sim_classes(jt, 4, 6) == ours


@pytest.mark.parametrize("name", JUNGLE_FIXTURES)
def test_class_witnesses(name):
    jt = jungle(name)
    for cl in stem_classes(jt):
        for (a, b), s in cl.witnesses.items():
            u, v = jt.stems[a], jt.stems[b]
            assert jt.is_j_word(u + s + v)
            assert is_identity_action(jt.aut, u + s)
            assert stem_equivalent(jt, u, v) is not None


@pytest.mark.parametrize("name", JUNGLE_FIXTURES)
def test_wedge_finer_than_classes(name):
    jt = jungle(name)
    classes = stem_classes(jt)
    for group in wedge_classes(jt):
        assert len({class_of(classes, m).members for m in group}) == 1
    u, v = jt.stems[0], jt.stems[jt.followers[0][0][1]]
    assert wedge_related(jt, u, u)
    assert isinstance(wedge_related(jt, u, v), bool)


@pytest.mark.parametrize("name", JUNGLE_FIXTURES)
def test_ubiquity(name):
    jt = jungle(name)
    rng = random.Random(11)
    budget = jt.n * (1 + jt.aut.size ** jt.n)
    for _ in range(100):
        word = random_liana_word(jt, rng.randint(jt.n, 3 * jt.n + 6), rng)
        i = rng.randint(0, len(word) - 1)
        j = rng.randint(i + 1, len(word))
        t, u, v = word[:i], word[i:j], word[j:]
        w = find_recurrence(jt, t, u, v, cap=budget)
        assert jt.is_j_word(t + u + v + w + u)
        assert len(w) <= budget


def test_liana_cursor():
    jt = jungle("jungle3_trunk32")
    cur = liana_walk(jt, jt.stems[0])
    assert cur.length == jt.n and len(cur.choices()) == jt.arity
    for _ in range(6):
        cur.step(len(cur.choices()) - 1)
    assert jt.is_j_word(cur.word)
    assert all(w in jt.stem_index for w in cur.windows())
    with pytest.raises(ChoiceOutOfRange):
        cur.step(jt.arity)
    # a fresh liana starts at the current last stem
    assert cur.restart().word == cur.suffix == cur.word[-jt.n:]


def test_cyclic_j_word():
    for name in JUNGLE_FIXTURES:
        jt = jungle(name)
        c = find_cyclic_j_word(jt)
        assert jt.is_cyclic_j_word(c)
        assert jt.is_j_word(c * (jt.n + 3))


@pytest.mark.parametrize("name", PRIME_JUNGLE_FIXTURES)
def test_identity_continuation(name):
    jt = jungle(name)
    rng = random.Random(5)
    for _ in range(10):
        u = random_liana_word(jt, rng.randint(0, 2 * jt.n), rng)
        x = rng.randrange(jt.aut.size)
        w = identity_continuation(jt, u, x)
        assert jt.is_j_word(u + w + (x,))
        assert products_equal(jt.aut, w, ())


def test_jungle_report_fields():
    jt = jungle("jungle3_trunk32")
    classes = stem_classes(jt)
    rep = jungle_report(jt, classes, seq_peq_tables(jt, classes))
    assert rep["trunk_labels"] == [3, 2] and rep["stem_count"] == 6
    assert rep["S_eq"] == [3, 2] and rep["P_eq"] == [1, 1]
    assert len(rep["classes"]) == 1


def test_state_machine_matches_direct_action():
    jt = jungle("jungle3_trunk3322")
    rng = random.Random(2)
    for _ in range(20):
        w = random_liana_word(jt, rng.randint(jt.n, jt.n + 6), rng)
        st = jt.state_of(w)
        anchor_map = st.entries[st.anchor][0]
        assert tuple(act_rho(jt.aut, w, (i,))[0] for i in range(jt.aut.nletters)) == anchor_map
        assert st.is_identity() == is_identity_action(jt.aut, w)
