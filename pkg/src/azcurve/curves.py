"""Prestable curves as dual graphs of rational components.

Every component is a projective line with its own coordinate t and a
polarization degree; nodes glue pairs of marked points (rational or at
infinity).  The arithmetic genus is the first Betti number of the dual
graph, and Euler characteristics of rank-r bundles follow from it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .polys import ExactError, INFINITY, Place, RATIONAL


class CurveError(ExactError):
    pass


@dataclass(frozen=True)
class Component:
    label: str
    polarization: int = 1

    def __post_init__(self):
        if self.polarization < 1:
            raise CurveError(f"component {self.label}: polarization degree must be >= 1")


@dataclass(frozen=True)
class Node:
    """A node gluing (component_a, place_a) to (component_b, place_b).

    The two sides may lie on the same component (a self-node) but must be
    distinct marked points.
    """

    component_a: str
    place_a: Place
    component_b: str
    place_b: Place

    def ends(self) -> list[tuple[str, Place]]:
        return [(self.component_a, self.place_a), (self.component_b, self.place_b)]


@dataclass(frozen=True)
class PrestableCurve:
    components: tuple[Component, ...]
    nodes: tuple[Node, ...]

    def component(self, label: str) -> Component:
        for c in self.components:
            if c.label == label:
                return c
        raise CurveError(f"unknown component {label!r}")

    def labels(self) -> list[str]:
        return [c.label for c in self.components]

    def total_degree(self) -> int:
        """deg of the polarization bundle: sum of per-component degrees."""
        return sum(c.polarization for c in self.components)

    def node_places(self, label: str) -> list[Place]:
        """Attachment places on one component, nodes listed once per end."""
        out = []
        for n in self.nodes:
            for comp, place in n.ends():
                if comp == label:
                    out.append(place)
        return out


def _check_place(place: Place) -> None:
    if place.kind not in (RATIONAL, INFINITY):
        raise CurveError("node attachment places must be rational or infinity")


def build_curve(components: Sequence[Component], nodes: Sequence[Node]) -> PrestableCurve:
    """Validated prestable curve; raises CurveError listing the violation."""
    if not components:
        raise CurveError("curve needs at least one component")
    labels = [c.label for c in components]
    if len(set(labels)) != len(labels):
        raise CurveError("duplicate component labels")
    seen_points: set[tuple[str, tuple]] = set()
    for n in nodes:
        for comp, place in n.ends():
            if comp not in labels:
                raise CurveError(f"node references unknown component {comp!r}")
            _check_place(place)
            key = (comp, place.sort_key())
            if key in seen_points:
                raise CurveError(
                    f"attachment point {place.pretty()} on {comp!r} used by two node ends"
                )
            seen_points.add(key)
        if n.component_a == n.component_b and n.place_a == n.place_b:
            raise CurveError("node glues a point to itself")
    # connectivity of the dual graph
    adj: dict[str, set[str]] = {l: set() for l in labels}
    for n in nodes:
        adj[n.component_a].add(n.component_b)
        adj[n.component_b].add(n.component_a)
    seen = {labels[0]}
    stack = [labels[0]]
    while stack:
        for nb in adj[stack.pop()]:
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    if len(seen) != len(labels):
        missing = sorted(set(labels) - seen)
        raise CurveError(f"dual graph is disconnected: unreachable {missing}")
    return PrestableCurve(tuple(components), tuple(nodes))


def projective_line(label: str = "c0", polarization: int = 1) -> PrestableCurve:
    return build_curve([Component(label, polarization)], [])


def arithmetic_genus(curve: PrestableCurve) -> int:
    """First Betti number of the dual graph (components are rational)."""
    return len(curve.nodes) - len(curve.components) + 1


def euler_char(curve: PrestableCurve, r: int, deg_e: int = 0) -> int:
    """chi of a rank-r bundle of degree deg_e on the curve."""
    if r < 1:
        raise CurveError("rank must be >= 1")
    return deg_e + r * (1 - arithmetic_genus(curve))
