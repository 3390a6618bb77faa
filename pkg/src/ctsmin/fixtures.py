"""The two reference systems used throughout the test suite.

ex1 is a pair of three-state gadgets over a two-level condition order
whose top states are equivalent at each single condition but differ
once upgrades are tracked.  ex2 is a two-state system where one state
can only move at the lower condition, separating version-aware
equivalence from the per-condition view at the top.
"""

from __future__ import annotations

from .models import Cts
from .order import validate_poset

TWO_LEVEL = validate_poset(["phi", "phi'"], [("phi'", "phi")])


def ex1() -> Cts:
    labels = {
        ("x", "a", "y"): {"phi", "phi'"},
        ("x", "a", "z"): {"phi", "phi'"},
        ("y", "a", "x"): {"phi'"},
        ("x'", "a", "y'"): {"phi'"},
        ("x'", "a", "z'"): {"phi", "phi'"},
        ("y'", "a", "x'"): {"phi'"},
    }
    return Cts(["x", "y", "z", "x'", "y'", "z'"], ["a"], TWO_LEVEL, labels)


def ex2() -> Cts:
    labels = {
        ("x2", "a", "x2"): {"phi'"},
    }
    return Cts(["x1", "x2"], ["a"], TWO_LEVEL, labels)
