import random

import pytest
from hypothesis import given, settings

from mealyburnside.automaton import from_tables, products_equal
from mealyburnside.burnside import (Budgets, certify, cyclic_j_words, cyclic_reduction, group_order,
                                    order_of, order_oracle, rewrite_as_j_word, uniform_order_bound)
from mealyburnside.errors import LevelTooLarge
from mealyburnside.io import load_fixture
from mealyburnside.jungle import (find_jungle_trees, is_identity_action, random_liana_word)
from mealyburnside.orbit_tree import OrbitTree
from conftest import JUNGLE_FIXTURES, PRIME_JUNGLE_FIXTURES
from oracles import acts_identically, perm_group_size, perm_order, table
from checks import order_cross_validation
from strategies import automata, words

_cache = {}


def jungle(name):
    if name not in _cache:
        aut = load_fixture(name)
        _cache[name] = find_jungle_trees(aut, OrbitTree(aut, 8), 6)[0]
    return _cache[name]


def test_order_identity(identity2):
    assert order_of(identity2, (0,)).verdict == "Finite"
    assert order_of(identity2, (0,)).order == 1
    assert all(order_oracle(identity2, (0,), k) == 1 for k in range(1, 6))


def test_order_bellaterra_a(bellaterra):
    t = table(bellaterra)
    assert [perm_order(t, "01", "a", k) for k in range(1, 11)] == [2] * 10
    r = order_of(bellaterra, bellaterra.word("a"))
    assert (r.verdict, r.order) == ("Finite", 2)
    assert order_oracle(bellaterra, bellaterra.word("a"), 6) == 2


def test_order_bellaterra_ab(bellaterra):
    r = order_of(bellaterra, bellaterra.word("ab"))
    assert r.verdict == "InfiniteWitness"
    assert list(r.sizes[:5]) == [6, 24, 96, 384, 1536]
    # the orders on Sigma^k keep doubling: 2, 4, 8, ...
    assert [order_oracle(bellaterra, bellaterra.word("ab"), k) for k in range(1, 9)] == [2 ** k for k in range(1, 9)]


def test_order_exceeds_cap(bellaterra):
    r = order_of(bellaterra, bellaterra.word("ab"), cap=3)
    assert r.verdict == "ExceedsCap" and r.order is None


def test_order_oracle_budget(bellaterra):
    with pytest.raises(LevelTooLarge):
        order_oracle(bellaterra, (0,), 30)


def test_order_oracle_matches_simulation(bellaterra):
    t = table(bellaterra)
    for u in ["ab", "abc", "bc", "acb"]:
        for k in range(1, 7):
            assert order_oracle(bellaterra, bellaterra.word(u), k) == perm_order(t, "01", u, k)


def test_order_cross_validation_two_states():
    agree, spurious = order_cross_validation()
    # lamplighter-type automata plateau at 2^j on Sigma^5..Sigma^8 while having infinite order
    assert agree > 0 and spurious > 0


@settings(max_examples=40, deadline=None)
@given(automata(min_states=2, max_states=3, min_letters=2, max_letters=2, invertible=True, reversible=True),
       words(3, 1, 3))
def test_order_minimal(aut, u):
    u = tuple(x % aut.size for x in u)
    r = order_of(aut, u, cap=64, growth_threshold=10 ** 9, size_cap=10 ** 5)
    if r.verdict == "Finite":
        assert is_identity_action(aut, u * r.order)
        assert all(not is_identity_action(aut, u * d) for d in range(1, r.order))
        for k in range(1, 6):
            assert r.order % order_oracle(aut, u, k) == 0


def test_group_order_against_permutation_closure():
    expected = {}
    for name in JUNGLE_FIXTURES + ["identity2", "swap1"]:
        aut = load_fixture(name)
        t = table(aut)
        sizes = [perm_group_size(t, aut.states, aut.letters, k) for k in range(1, 8)]
        assert sizes[-1] == sizes[-2] == sizes[-3]
        expected[name] = sizes[-1]
        assert group_order(aut) == expected[name]
    assert expected["jungle3_order8"] == 8 and expected["cycle5"] == 32


def test_group_order_infinite(bellaterra):
    assert group_order(bellaterra, cap=2000) is None


@pytest.mark.parametrize("name", PRIME_JUNGLE_FIXTURES)
def test_rewrite_as_j_word(name):
    jt = jungle(name)
    aut = jt.aut
    t = table(aut)
    rng = random.Random(3)
    for _ in range(10):
        u = tuple(rng.randrange(aut.size) for _ in range(rng.randint(1, 6)))
        jw = rewrite_as_j_word(jt, u)
        assert jt.is_j_word(jw)
        assert acts_identically(t, aut.letters, [aut.states[x] for x in u], [aut.states[x] for x in jw], 5)
        assert products_equal(aut, u, jw)


def test_rewrite_keeps_j_words():
    jt = jungle("jungle3_trunk32")
    rng = random.Random(1)
    for _ in range(5):
        w = random_liana_word(jt, 5, rng)
        assert rewrite_as_j_word(jt, w) == w


@pytest.mark.parametrize("name", PRIME_JUNGLE_FIXTURES)
def test_cyclic_reduction(name):
    jt = jungle(name)
    aut = jt.aut
    t = table(aut)
    rng = random.Random(4)
    for _ in range(6):
        u = tuple(rng.randrange(aut.size) for _ in range(rng.randint(1, 5)))
        v, e = cyclic_reduction(jt, u)
        assert 1 <= e <= aut.size ** jt.n
        assert jt.is_cyclic_j_word(v)
        assert acts_identically(t, aut.letters, [aut.states[x] for x in v], [aut.states[x] for x in u * e], 5)


def test_cyclic_reduction_identity_word():
    jt = jungle("jungle3_order8")
    aut = jt.aut
    u = aut.word("cc")
    v, e = cyclic_reduction(jt, u)
    assert is_identity_action(aut, v)


def test_uniform_bound():
    for name in PRIME_JUNGLE_FIXTURES:
        jt = jungle(name)
        ub = uniform_order_bound(jt)
        assert 1 <= ub.bound < 256
        assert ub.component_size == jt.stem_count
        assert all(o <= ub.bound and ub.bound % 1 == 0 for o in ub.orders.values())
        words_, _ = cyclic_j_words(jt, 4, 50)
        assert all(jt.is_cyclic_j_word(w) for w in words_)


def test_uniform_bound_identity_like():
    trivial = from_tables(((1, 1), (2, 2), (0, 0)), ((0, 1), (0, 1), (0, 1)), list("abc"))
    jt = find_jungle_trees(trivial, OrbitTree(trivial, 6), 4)[0]
    assert uniform_order_bound(jt).bound == 1


def test_certify_bellaterra(bellaterra):
    cert = certify(bellaterra)
    assert cert.branch == "InfiniteOrderElement"
    assert cert.evidence["witness"] == "ab"
    sizes = cert.evidence["power_sizes"]
    assert all(a < b for a, b in zip(sizes, sizes[1:]))
    assert cert.definitive


def test_certify_rejections():
    assert certify(load_fixture("swap1")).branch == "PreconditionFailed"
    assert "PrimeSizeRequired" in certify(load_fixture("swap1")).rationale
    cert = certify(load_fixture("nonreversible"))
    assert cert.branch == "PreconditionFailed" and cert.evidence["failed"] == ["reversible"]
    assert certify(load_fixture("composite4_two_classes")).evidence["failed"] == ["prime_size"]
    assert certify(load_fixture("nonbireversible3")).branch == "NotBireversible"


@pytest.mark.parametrize("name", PRIME_JUNGLE_FIXTURES)
def test_certify_jungle_fixtures(name):
    cert = certify(load_fixture(name), Budgets(rewrite_samples=4))
    assert cert.branch == "FiniteGroupEvidence"
    assert cert.evidence["first_letters_whole_stateset"]
    assert cert.evidence["group_order"] == group_order(load_fixture(name))


def test_certify_inconclusive_on_tiny_budget():
    cert = certify(load_fixture("jungle3_trunk3322"), Budgets(max_trunk=2))
    assert cert.branch == "Inconclusive" and not cert.definitive
