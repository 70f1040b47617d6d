"""Mealy automata, orbit trees, jungle trees and Burnside certificates."""

__version__ = "0.1.0"

from .automaton import (Classification, MealyAutomaton, act_delta, act_rho, classify, dual, inverse,
                        is_bireversible, is_connected, is_invertible, is_reversible, validate)
from .components import Component, ComponentEdge, component_of, children_components
from .orbit_tree import OrbitTree, build, path_of
from .jungle import JungleTree, find_jungle_trees, stem_classes
from .burnside import Budgets, Certificate, certify, order_of

__all__ = [
    "Budgets", "Certificate", "Classification", "Component", "ComponentEdge", "JungleTree",
    "MealyAutomaton", "OrbitTree", "act_delta", "act_rho", "build", "certify", "children_components",
    "classify", "component_of", "dual", "find_jungle_trees", "inverse", "is_bireversible",
    "is_connected", "is_invertible", "is_reversible", "order_of", "path_of", "stem_classes", "validate",
]
