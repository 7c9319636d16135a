"""Small bundled diagrams used by tests, the CLI and the benchmark presets.

``testcase1`` and ``testcase2`` are stand-ins for the contest's first two
inputs, matched on size (14 and 18 classes plus attributes) and on which rules
they exercise.  ``f5`` is the smallest diagram found where two equally large
extraction candidates share a member, so the order of application decides
the normal form.
"""

from __future__ import annotations

from typing import Callable

from .diagram import ClassDiagram, build


def f1() -> ClassDiagram:
    """Both subclasses own ``x: Int``: one pull-up."""
    return build(["A", "B", "C"], [("B", "x", "Int"), ("C", "x", "Int")], [("B", "A"), ("C", "A")])


def f2() -> ClassDiagram:
    """Two of three subclasses own ``x: Int``: one subclass extraction."""
    return build(
        ["A", "B", "C", "D"],
        [("B", "x", "Int"), ("C", "x", "Int")],
        [("B", "A"), ("C", "A"), ("D", "A")],
    )


def f3() -> ClassDiagram:
    """Three roots, two owning ``x: Str``: one root extraction."""
    return build(["B", "C", "D"], [("B", "x", "Str"), ("C", "x", "Str")])


def f4() -> ClassDiagram:
    """Two disjoint equally large candidates under one superclass; they commute."""
    return build(
        ["A", "B", "C", "D", "E"],
        [("B", "x", "Int"), ("C", "x", "Int"), ("D", "y", "Str"), ("E", "y", "Str")],
        [("B", "A"), ("C", "A"), ("D", "A"), ("E", "A")],
    )


def f5() -> ClassDiagram:
    """Two equally large candidates sharing ``C``; each choice blocks the other."""
    return build(
        ["A", "B", "C", "D"],
        [("B", "x", "Int"), ("C", "x", "Int"), ("C", "y", "Str"), ("D", "y", "Str")],
        [("B", "A"), ("C", "A"), ("D", "A")],
    )


def testcase1() -> ClassDiagram:
    """Two independent pull-up levels that then enable a third (size 14)."""
    return build(
        ["Vehicle", "LandVehicle", "WaterVehicle", "Car", "Truck", "Boat", "Ship"],
        [
            ("Car", "speed", "Integer"),
            ("Car", "wheels", "Integer"),
            ("Truck", "speed", "Integer"),
            ("Truck", "wheels", "Integer"),
            ("Boat", "speed", "Integer"),
            ("Boat", "sails", "Boolean"),
            ("Ship", "speed", "Integer"),
        ],
        [
            ("LandVehicle", "Vehicle"),
            ("WaterVehicle", "Vehicle"),
            ("Car", "LandVehicle"),
            ("Truck", "LandVehicle"),
            ("Boat", "WaterVehicle"),
            ("Ship", "WaterVehicle"),
        ],
    )


def testcase2() -> ClassDiagram:
    """One site for each rule, pairwise independent (size 18)."""
    return build(
        ["Shape", "Circle", "Square", "Polygon", "Document", "Report", "Memo", "Layer"],
        [
            ("Shape", "id", "Integer"),
            ("Circle", "label", "String"),
            ("Circle", "size", "Integer"),
            ("Square", "label", "String"),
            ("Polygon", "size", "Double"),
            ("Polygon", "sides", "Integer"),
            ("Document", "id", "Integer"),
            ("Report", "author", "String"),
            ("Memo", "author", "String"),
            ("Layer", "id", "Integer"),
        ],
        [
            ("Circle", "Shape"),
            ("Square", "Shape"),
            ("Polygon", "Shape"),
            ("Report", "Document"),
            ("Memo", "Document"),
        ],
    )


FIXTURES: dict[str, Callable[[], ClassDiagram]] = {
    "f1": f1,
    "f2": f2,
    "f3": f3,
    "f4": f4,
    "f5": f5,
    "testcase1": testcase1,
    "testcase2": testcase2,
}
