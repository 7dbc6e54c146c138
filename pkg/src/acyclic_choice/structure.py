"""Reducible configurations of sparse graphs with minimum degree four.

Every graph with ``e(G) <= 4 v(G) - 1`` and minimum degree at least 4
contains one of nine local configurations.  "Big" means degree at least
20, "small" means degree at most 7.

    C1  4-vertex with a neighbor of degree <= 19
    C2  5-vertex with two such neighbors
    C3  6-vertex with four such neighbors
    C4  7-vertex with six such neighbors
    C5  20 <= d(v) <= 22, at least d(v)-3 small neighbors
    C6  23 <= d(v) <= 25, at least d(v)-2 small neighbors
    C7  26 <= d(v) <= 28, at least d(v)-1 small neighbors
    C8  29 <= d(v) <= 31, all neighbors small
    C9  at least d(v)-7 small neighbors, one of them a 4-vertex

The guarantee comes from discharging: every vertex starts with charge
``d(v) - 8`` (total at most -2 under the edge bound), big vertices pay 1
to adjacent 4-vertices and 3/4 to adjacent 5-, 6- and 7-vertices, and a
graph with none of the configurations would end with all charges
nonnegative.  :func:`discharging_audit` runs those rules literally.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .graph import Graph, degree_profile

LOW_DEGREE = "LowDegree"
KINDS = ("C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9")

BIG = 20
SMALL = 7
MID = 19


@dataclass(frozen=True)
class Reducible:
    kind: str
    center: int
    witnesses: tuple[int, ...] = ()

    def to_json(self) -> dict:
        return {"kind": self.kind, "center": self.center, "witnesses": list(self.witnesses)}


class PreconditionUnmet(ValueError):
    pass


class LemmaViolation(RuntimeError):
    """No configuration in a graph that should have one.

    Carries the graph edges and the full discharging ledger.
    """

    def __init__(self, message: str, report: dict):
        super().__init__(message)
        self.report = report


def scan_configurations(adj: Sequence, deg: Sequence[int], vertices=None) -> Reducible | None:
    """First configuration among ``vertices`` (ascending), kinds C1..C9 per vertex.

    ``adj[v]`` is any iterable of neighbors and ``deg[v]`` its length.
    Vertices of degree zero are skipped.
    """
    for v in vertices if vertices is not None else range(len(deg)):
        d = deg[v]
        if d == 0:
            continue
        nbrs = sorted(adj[v])
        if 4 <= d <= 7:
            mid = [u for u in nbrs if deg[u] <= MID]
            need = {4: 1, 5: 2, 6: 4, 7: 6}[d]
            if len(mid) >= need:
                return Reducible(KINDS[d - 4], v, tuple(mid[:need]))
        small = [u for u in nbrs if deg[u] <= SMALL]
        if 20 <= d <= 31:
            slack = 3 - (d - 20) // 3  # C5: 3, C6: 2, C7: 1, C8: 0
            if len(small) >= d - slack:
                return Reducible(KINDS[4 + (d - 20) // 3], v, tuple(small))
        if len(small) >= d - 7 and any(deg[u] == 4 for u in small):
            return Reducible("C9", v, tuple(small))
    return None


def find_reducible(g: Graph) -> Reducible | None:
    """A vertex of degree at most 3, else the first of C1..C9 by vertex id."""
    degs = g.degrees()
    for v, d in enumerate(degs):
        if d <= 3:
            return Reducible(LOW_DEGREE, v)
    return scan_configurations(g.adj, degs)


def check_reducible(g: Graph, r: Reducible) -> bool:
    """Recheck a witness against the degrees of ``g``."""
    deg = g.degrees()
    c = r.center
    if not 0 <= c < g.n:
        return False
    d = deg[c]
    if r.kind == LOW_DEGREE:
        return d <= 3
    w = r.witnesses
    nbrs = set(g.adj[c])
    if len(set(w)) != len(w) or not set(w) <= nbrs:
        return False
    if r.kind in ("C1", "C2", "C3", "C4"):
        need = {"C1": (4, 1), "C2": (5, 2), "C3": (6, 4), "C4": (7, 6)}[r.kind]
        return d == need[0] and len(w) == need[1] and all(deg[u] <= MID for u in w)
    if not all(deg[u] <= SMALL for u in w):
        return False
    if r.kind == "C9":
        return len(w) >= d - 7 and any(deg[u] == 4 for u in w)
    lo, slack = {"C5": (20, 3), "C6": (23, 2), "C7": (26, 1), "C8": (29, 0)}[r.kind]
    return lo <= d <= lo + 2 and len(w) >= d - slack


@dataclass(frozen=True)
class ChargeReport:
    initial: dict[int, Fraction]
    final: dict[int, Fraction]
    transfers: list[tuple[int, int, Fraction]] = field(default_factory=list)

    @property
    def total(self) -> Fraction:
        return sum(self.final.values(), Fraction(0))

    def negative(self) -> list[int]:
        return [v for v, w in self.final.items() if w < 0]

    def to_json(self) -> dict:
        f = lambda x: f"{x.numerator}/{x.denominator}"  # noqa: E731
        return {
            "initial_total": f(sum(self.initial.values(), Fraction(0))),
            "final_total": f(self.total),
            "transfers": [[a, b, f(x)] for a, b, x in self.transfers],
            "negative_vertices": self.negative(),
            "final": {str(v): f(w) for v, w in sorted(self.final.items())},
        }


def discharging_audit(g: Graph) -> ChargeReport:
    deg = g.degrees()
    initial = {v: Fraction(deg[v] - 8) for v in range(g.n)}
    final = dict(initial)
    transfers = []
    for v in range(g.n):
        if deg[v] < BIG:
            continue
        for u in g.adj[v]:
            if deg[u] == 4:
                amount = Fraction(1)
            elif 5 <= deg[u] <= 7:
                amount = Fraction(3, 4)
            else:
                continue
            final[v] -= amount
            final[u] += amount
            transfers.append((v, u, amount))
    assert sum(final.values()) == sum(initial.values())
    return ChargeReport(initial, final, transfers)


def verify_lemma(g: Graph) -> Reducible:
    """The configuration guaranteed for ``e <= 4v - 1`` and minimum degree 4."""
    prof = degree_profile(g)
    if g.n == 0 or prof.min_degree < 4:
        raise PreconditionUnmet(f"minimum degree {prof.min_degree} < 4")
    if g.m > 4 * g.n - 1:
        raise PreconditionUnmet(f"e = {g.m} exceeds 4v - 1 = {4 * g.n - 1}")
    found = find_reducible(g)
    if found is None:
        audit = discharging_audit(g)
        raise LemmaViolation(
            "no reducible configuration found",
            {"n": g.n, "edges": [list(e) for e in g.sorted_edges()], "audit": audit.to_json()},
        )
    return found
