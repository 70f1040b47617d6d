"""Jungle tree pipeline on a bundled fixture, step by step.

Run: python3 demos/jungle_walkthrough.py [fixture]
"""

import random
import sys

from mealyburnside.burnside import cyclic_reduction, rewrite_as_j_word, uniform_order_bound
from mealyburnside.io import load_fixture
from mealyburnside.jungle import find_jungle_trees, find_recurrence, random_liana_word, seq_peq_tables, \
    stem_classes
from mealyburnside.orbit_tree import OrbitTree


def main(name="jungle3_trunk32"):
    aut = load_fixture(name)
    jt = find_jungle_trees(aut, OrbitTree(aut, 8), 6)[0]
    fmt = aut.format_word
    print(f"{name}: trunk labels {list(jt.trunk_labels)}, {jt.stem_count} stems")
    print("stems:", ", ".join(fmt(s) for s in jt.stems))

    classes = stem_classes(jt)
    for k, cl in enumerate(classes):
        print(f"class {k}: {[fmt(jt.stems[m]) for m in cl.members]}, "
              f"first states {fmt(sorted(cl.first_letters(jt)))}")
    S, P = seq_peq_tables(jt, classes)
    print("S_eq", S, "P_eq", P)

    rng = random.Random(1)
    word = random_liana_word(jt, 3 * jt.n, rng)
    t, u, v = word[:1], word[1:jt.n + 1], word[jt.n + 1:]
    w = find_recurrence(jt, t, u, v)
    print(f"liana {fmt(word)}: recurrence w = {fmt(w)} brings u = {fmt(u)} back")

    u = (aut.size - 1, 0)
    print(f"rewrite {fmt(u)} -> j-word {fmt(rewrite_as_j_word(jt, u))}")
    cyc, e = cyclic_reduction(jt, u)
    print(f"cyclic reduction: {fmt(cyc)} acts like ({fmt(u)})^{e}")
    print("observed uniform order bound:", uniform_order_bound(jt).bound)


if __name__ == "__main__":
    main(*sys.argv[1:2])
