"""Certify every connected invertible-reversible automaton with 2 letters.

Run: python3 demos/census.py [states]
"""

import sys
from collections import Counter

from mealyburnside.automaton import all_automata, classify
from mealyburnside.burnside import Budgets, certify


def main(nstates=3):
    tally = Counter()
    witnesses = Counter()
    for aut in all_automata(nstates, 2):
        if not classify(aut).connected:
            continue
        cert = certify(aut, Budgets(depth=8))
        tally[cert.branch] += 1
        if cert.branch == "InfiniteOrderElement":
            witnesses[cert.evidence["witness"]] += 1
    for branch, n in tally.most_common():
        print(f"{branch:22} {n}")
    if witnesses:
        print("witness words:", dict(witnesses))


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 3)
