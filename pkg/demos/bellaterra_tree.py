"""Orbit tree of the Bellaterra automaton and its infinite-order witness.

Run: python3 demos/bellaterra_tree.py [depth]
"""

import sys

from mealyburnside.automaton import classify
from mealyburnside.burnside import certify, order_of
from mealyburnside.io import export_dot, load_fixture
from mealyburnside.orbit_tree import OrbitTree, path_of


def main(depth=4):
    aut = load_fixture("bellaterra")
    print("classification:", classify(aut).as_dict())

    tree = OrbitTree(aut, depth)
    for row in tree.census():
        print(f"level {row['level']}: sizes {row['sizes']}")
    print("labels along (ab)^omega:", path_of(tree, aut.word("ab" * depth)[:depth]).labels)

    # a is an involution, ab is not: its power components keep growing
    for w in ("a", "ab"):
        r = order_of(aut, aut.word(w))
        print(f"order of {w}: {r.verdict} {r.order or ''} sizes {list(r.sizes)}")

    cert = certify(aut)
    print(cert.branch, "witness", cert.evidence["witness"])
    print(export_dot(OrbitTree(aut, 3)))


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 4)
