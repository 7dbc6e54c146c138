"""Acyclic edge list-coloring of graphs with ``e(H) <= 4 v(H) - 1`` hereditarily.

The engine peels the graph one edge at a time.  While some vertex has
degree 1..3 an edge at it is removed; otherwise the structure scan finds
one of the configurations C1..C9 and the edge its recipe designates is
removed.  Replaying the removals backwards, each edge is colored from the
part of its list that the recipe leaves available.  With lists of size
``3*Delta + 70`` each recipe's forbidden set is provably smaller than the
list, so every step succeeds.

Adding edge ``uv`` with color ``a`` to an acyclic coloring can only close
a bichromatic cycle through ``uv`` whose other color ``b`` is present at
both ``u`` and ``v``.  Every candidate color is checked against exactly
those cycles by walking the ``b, a, b, ...`` path out of ``u``
(:meth:`PartialColoring.closes_cycle`), so a recipe whose counting were
wrong could cost a fallback scan but never an invalid coloring.

Recipes, with ``C(x)`` the colors at ``x`` in the current partial coloring:

* LowDegree, C1-C3 (``v`` the low vertex or center, ``u`` a witness):
  forbid ``C(u)`` and ``C(x)`` for every other neighbor ``x`` of ``v``.
* C4 (``v`` the 7-vertex, ``u`` its neighbor outside the six witnesses):
  if some witness edge color is missing at ``u``, forbid ``C(v)`` and the
  color sets of every neighbor except that witness; otherwise forbid the
  color sets of all neighbors.
* C5-C8 (``u`` a small witness, ``v`` the big center): forbid ``C(u)``,
  ``C(v)``, the color sets of the non-small neighbors of ``v``, and the
  color sets of ``W`` = neighbors ``w`` of ``v`` with ``c(vw)`` in ``C(u)``.
* C9 (``u`` a 4-vertex witness, ``v`` the center): split ``C(v)`` into
  colors toward non-small neighbors (``big``) and the rest; forbid
  ``C(u)``, ``C(v)`` and ``C(W)``.  If that leaves nothing while ``C(u)``
  meets ``big``, the offending edges at ``u`` are recolored first,
  avoiding ``big`` and the color sets of the three neighbors of ``u``.
"""

from __future__ import annotations

import json
import warnings
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple

from .density import FOUR_NEGATIVE, DensityCertificate, is_linear
from .graph import Edge, Graph, edge_id
from .structure import LOW_DEGREE, SMALL, LemmaViolation, Reducible, scan_configurations

LIST_SLOPE = 3
LIST_OFFSET = 70
ORACLE_EDGE_LIMIT = 20


def list_size_bound(max_degree: int) -> int:
    return LIST_SLOPE * max_degree + LIST_OFFSET


class DensityRefusal(ValueError):
    def __init__(self, certificate: DensityCertificate):
        self.certificate = certificate
        super().__init__(
            f"graph is not (4,-1)-linear: subset of size {len(certificate.witness)} "
            f"has excess {certificate.max_excess}"
        )


class ExtensionFailure(RuntimeError):
    """No color in the list extends the coloring; ``report`` has the full state."""

    def __init__(self, message: str, report: dict):
        super().__init__(message)
        self.report = report


class IncompleteColoring(ValueError):
    pass


class ListTooSmall(UserWarning):
    pass


class TooLarge(ValueError):
    pass


class FormatError(ValueError):
    pass


# -- lists and colorings --------------------------------------------------------


@dataclass(frozen=True)
class ListAssignment:
    lists: dict[Edge, frozenset[int]]

    def __post_init__(self) -> None:
        for e, colors in self.lists.items():
            if not colors:
                raise ValueError(f"empty list on edge {e}")
            if any(c < 0 for c in colors):
                raise ValueError(f"negative color on edge {e}")

    def __getitem__(self, e: Edge) -> frozenset[int]:
        return self.lists[e]

    def min_size(self) -> int:
        return min((len(c) for c in self.lists.values()), default=0)

    def covers(self, g: Graph) -> list[Edge]:
        """Edges of ``g`` without a list."""
        return [e for e in g.sorted_edges() if e not in self.lists]

    def to_json(self) -> dict:
        return {"lists": [[u, v, sorted(c)] for (u, v), c in sorted(self.lists.items())]}


def uniform_lists(g: Graph, k: int | None = None) -> ListAssignment:
    """Every edge gets ``{0, ..., k-1}``; ``k`` defaults to ``3*Delta + 70``."""
    if k is None:
        k = list_size_bound(g.max_degree())
    colors = frozenset(range(k))
    return ListAssignment({e: colors for e in g.edges})


def lists_from_json(obj: dict, g: Graph) -> ListAssignment:
    if not isinstance(obj, dict) or set(obj) not in ({"k"}, {"lists"}):
        raise FormatError('list assignment must be {"k": int} or {"lists": [[u, v, [colors]], ...]}')
    if "k" in obj:
        k = obj["k"]
        if not isinstance(k, int) or k < 1:
            raise FormatError('"k" must be a positive integer')
        return uniform_lists(g, k)
    lists = {}
    for pos, entry in enumerate(obj["lists"]):
        try:
            u, v, colors = entry
            e = edge_id(int(u), int(v))
            lists[e] = frozenset(int(c) for c in colors)
        except (TypeError, ValueError) as exc:
            raise FormatError(f'"lists"[{pos}]: {exc}') from None
        if e not in g.edges:
            raise FormatError(f'"lists"[{pos}]: {e} is not an edge of the graph')
    try:
        out = ListAssignment(lists)
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    missing = out.covers(g)
    if missing:
        raise FormatError(f"no list for {len(missing)} edges, first {missing[0]}")
    return out


@dataclass(frozen=True)
class EdgeColoring:
    colors: dict[Edge, int]

    def to_json(self) -> dict:
        return {"edges": [[u, v, c] for (u, v), c in sorted(self.colors.items())]}

    def num_colors(self) -> int:
        return len(set(self.colors.values()))


def coloring_from_json(obj: dict) -> EdgeColoring:
    if not isinstance(obj, dict) or set(obj) != {"edges"}:
        raise FormatError('coloring must be {"edges": [[u, v, color], ...]}')
    colors = {}
    for pos, entry in enumerate(obj["edges"]):
        try:
            u, v, c = entry
            colors[edge_id(int(u), int(v))] = int(c)
        except (TypeError, ValueError) as exc:
            raise FormatError(f'"edges"[{pos}]: {exc}') from None
    return EdgeColoring(colors)


def read_json(path: str | Path) -> dict:
    path = Path(path)
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: line {exc.lineno}: {exc.msg}") from None


class PartialColoring:
    """Mutable coloring with a color -> neighbor index at every vertex.

    Only proper assignments are representable.
    """

    def __init__(self, n: int):
        self.n = n
        self.at: list[dict[int, int]] = [{} for _ in range(n)]

    def colors(self, x: int) -> set[int]:
        return set(self.at[x])

    def assign(self, u: int, v: int, color: int) -> None:
        if color in self.at[u] or color in self.at[v]:
            raise ValueError(f"color {color} already at {u} or {v}")
        self.at[u][color] = v
        self.at[v][color] = u

    def unassign(self, u: int, v: int) -> int:
        for color, w in self.at[u].items():
            if w == v:
                del self.at[u][color]
                del self.at[v][color]
                return color
        raise KeyError(f"edge {(u, v)} is not colored")

    def closes_cycle(self, u: int, v: int, color: int) -> list[int] | None:
        """The bichromatic cycle that coloring ``uv`` with ``color`` would close.

        Assumes ``color`` is absent at both ends, so the two-colored
        subgraph through ``u`` is a path starting at ``u``.
        """
        at = self.at
        for other in at[u].keys() & at[v].keys():
            path = [u]
            x, want = u, other
            while True:
                y = at[x].get(want)
                if y is None:
                    break
                path.append(y)
                if y == v:
                    return path
                x = y
                want = color if want == other else other
        return None

    def edge_count(self) -> int:
        return sum(len(a) for a in self.at) // 2

    def to_coloring(self) -> EdgeColoring:
        return EdgeColoring({edge_id(x, y): c for x in range(self.n) for c, y in self.at[x].items() if x < y})


# -- verifier -----------------------------------------------------------------------


class BichromaticWitness(NamedTuple):
    cycle: tuple[int, ...]  # closed walk; the edge back to cycle[0] is implied
    color_a: int
    color_b: int


class Clash(NamedTuple):
    vertex: int
    edges: tuple[Edge, Edge]
    color: int


@dataclass(frozen=True)
class ColoringReport:
    proper: bool
    acyclic: bool
    clash: Clash | None = None
    witness: BichromaticWitness | None = None

    @property
    def ok(self) -> bool:
        return self.proper and self.acyclic

    def to_json(self) -> dict:
        out: dict = {"proper": self.proper, "acyclic": self.acyclic}
        if self.clash:
            out["clash"] = {"vertex": self.clash.vertex, "edges": [list(e) for e in self.clash.edges], "color": self.clash.color}
        if self.witness:
            out["bichromatic_cycle"] = {
                "cycle": list(self.witness.cycle),
                "colors": [self.witness.color_a, self.witness.color_b],
            }
        return out


def verify_coloring(g: Graph, c: EdgeColoring) -> ColoringReport:
    """Check properness and the absence of two-colored cycles, independently.

    Each color class, and each union of two classes that meet at some
    vertex, is run through union-find; the first edge joining two already
    connected vertices yields a witness cycle.
    """
    missing = [e for e in g.edges if e not in c.colors]
    extra = [e for e in c.colors if e not in g.edges]
    if missing or extra:
        raise IncompleteColoring(f"{len(missing)} edges uncolored, {len(extra)} colored edges not in graph")

    clash = None
    seen: list[dict[int, Edge]] = [{} for _ in range(g.n)]
    for e in sorted(c.colors):
        col = c.colors[e]
        for x in e:
            if col in seen[x] and clash is None:
                clash = Clash(x, (seen[x][col], e), col)
            seen[x].setdefault(col, e)

    classes: dict[int, list[Edge]] = defaultdict(list)
    for e, col in sorted(c.colors.items()):
        classes[col].append(e)
    pairs: set[tuple[int, int]] = set()
    for x in range(g.n):
        cols = sorted(seen[x])
        for i, a in enumerate(cols):
            for b in cols[i + 1 :]:
                pairs.add((a, b))

    witness = None
    for a in sorted(classes):
        witness = _cycle_in(classes[a], a, a)
        if witness:
            break
    if witness is None:
        for a, b in sorted(pairs):
            witness = _cycle_in(classes[a] + classes[b], a, b)
            if witness:
                break
    return ColoringReport(clash is None, witness is None, clash, witness)


def _cycle_in(edges: list[Edge], a: int, b: int) -> BichromaticWitness | None:
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    forest: dict[int, list[int]] = defaultdict(list)
    for x, y in edges:
        rx, ry = find(x), find(y)
        if rx == ry:
            return BichromaticWitness(tuple(_path(forest, y, x)), a, b)
        parent[rx] = ry
        forest[x].append(y)
        forest[y].append(x)
    return None


def _path(forest: dict[int, list[int]], src: int, dst: int) -> list[int]:
    prev = {src: src}
    stack = [src]
    while stack:
        x = stack.pop()
        if x == dst:
            break
        for y in forest[x]:
            if y not in prev:
                prev[y] = x
                stack.append(y)
    path = [dst]
    while path[-1] != src:
        path.append(prev[path[-1]])
    return path[::-1]


# -- elimination -----------------------------------------------------------------


@dataclass(frozen=True)
class EliminationStep:
    """One removed edge ``uv`` and the configuration that justified it.

    ``u`` is the endpoint whose whole color set the recipe forbids, ``v``
    the endpoint whose neighborhood it inspects.  ``neighbors`` and
    ``degrees`` are taken in the graph after removal.
    """

    u: int
    v: int
    context: Reducible
    neighbors: tuple[int, ...]
    degrees: dict[int, int] = field(hash=False)

    @property
    def edge(self) -> Edge:
        return edge_id(self.u, self.v)

    @property
    def kind(self) -> str:
        return self.context.kind

    def to_json(self) -> dict:
        return {
            "edge": list(self.edge),
            "u": self.u,
            "v": self.v,
            "context": self.context.to_json(),
            "neighbors_of_v": list(self.neighbors),
            "degrees": {str(k): d for k, d in sorted(self.degrees.items())},
        }


def _removed_neighbor(ctx: Reducible, adj: list[set[int]]) -> int:
    """The far endpoint of the edge removed at ``ctx.center``."""
    w = ctx.witnesses
    if ctx.kind == "C4":
        return min(adj[ctx.center] - set(w))
    if ctx.kind == "C9":
        return next(x for x in w if len(adj[x]) == 4)
    return w[0]


def elimination_order(g: Graph, *, certify: bool = True) -> list[EliminationStep]:
    """Removal sequence down to the edgeless graph."""
    if certify:
        cert = is_linear(g, FOUR_NEGATIVE)
        if not cert.verdict:
            raise DensityRefusal(cert)
    adj = [set(a) for a in g.adj]
    deg = [len(a) for a in adj]
    steps = []
    remaining = g.m
    while remaining:
        low = next((x for x in range(g.n) if 1 <= deg[x] <= 3), None)
        if low is not None:
            ctx = Reducible(LOW_DEGREE, low)
            u, v = min(adj[low]), low
        else:
            ctx = scan_configurations(adj, deg)
            if ctx is None:
                edges = sorted(edge_id(x, y) for x in range(g.n) for y in adj[x] if x < y)
                raise LemmaViolation(
                    "minimum degree >= 4 but no configuration found",
                    {"n": g.n, "edges": [list(e) for e in edges], "removed_so_far": len(steps)},
                )
            u, v = _removed_neighbor(ctx, adj), ctx.center
        adj[u].discard(v)
        adj[v].discard(u)
        deg[u] -= 1
        deg[v] -= 1
        remaining -= 1
        watched = {u, v} | adj[v] | adj[u]
        steps.append(EliminationStep(u, v, ctx, tuple(sorted(adj[v])), {x: deg[x] for x in sorted(watched)}))
    return steps


# -- extension ------------------------------------------------------------------------


class Extension(NamedTuple):
    color: int
    route: str  # "recipe", "recolor" or "fallback"
    recolored: tuple[tuple[Edge, int, int], ...] = ()


def _forbidden(state: PartialColoring, step: EliminationStep) -> set[int]:
    u, v, kind = step.u, step.v, step.kind
    at = state.at
    if kind in (LOW_DEGREE, "C1", "C2", "C3"):
        out = set(at[u])
        for x in at[v].values():
            out.update(at[x])
        return out
    if kind == "C4":
        witnesses = set(step.context.witnesses)
        spare = [x for col, x in sorted(at[v].items()) if x in witnesses and col not in at[u]]
        out = set(at[u]) | set(at[v])
        for x in at[v].values():
            if not spare or x != spare[0]:
                out.update(at[x])
        return out
    deg = step.degrees
    out = set(at[u]) | set(at[v])
    for col, w in at[v].items():
        # C9 forbids only the colors toward big neighbors, not their color sets
        if col in at[u] or (deg[w] > SMALL and kind != "C9"):
            out.update(at[w])
    return out


def _big_colors(state: PartialColoring, step: EliminationStep) -> set[int]:
    return {col for col, w in state.at[step.v].items() if step.degrees[w] > SMALL}


def _first_valid(state: PartialColoring, u: int, v: int, candidates: Iterable[int]) -> int | None:
    at_u, at_v = state.at[u], state.at[v]
    for col in sorted(candidates):
        if col in at_u or col in at_v:
            continue
        if state.closes_cycle(u, v, col) is None:
            return col
    return None


def _recolor_at_four_vertex(state: PartialColoring, step: EliminationStep, lists: ListAssignment) -> list:
    u = step.u
    big = _big_colors(state, step)
    changed = []
    for col in sorted(set(state.at[u]) & big):
        x = state.at[u].get(col)
        if x is None:
            continue
        avoid = set(big)
        for w in state.at[u].values():
            avoid.update(state.at[w])
        state.unassign(u, x)
        new = _first_valid(state, u, x, lists[edge_id(u, x)] - avoid)
        if new is None:
            state.assign(u, x, col)
            continue
        state.assign(u, x, new)
        changed.append((edge_id(u, x), col, new))
    return changed


def extend_coloring(state: PartialColoring, step: EliminationStep, lists: ListAssignment) -> Extension:
    """Color ``step.edge`` (mutating ``state``) or raise :class:`ExtensionFailure`."""
    u, v = step.u, step.v
    options = lists[step.edge]
    forbidden = _forbidden(state, step)
    col = _first_valid(state, u, v, options - forbidden)
    if col is not None:
        state.assign(u, v, col)
        return Extension(col, "recipe")

    recolored: list = []
    if step.kind == "C9" and set(state.at[u]) & _big_colors(state, step):
        recolored = _recolor_at_four_vertex(state, step, lists)
        forbidden = _forbidden(state, step)
        col = _first_valid(state, u, v, options - forbidden)
        if col is not None:
            state.assign(u, v, col)
            return Extension(col, "recolor", tuple(recolored))

    col = _first_valid(state, u, v, options)
    if col is not None:
        state.assign(u, v, col)
        return Extension(col, "fallback", tuple(recolored))

    raise ExtensionFailure(
        f"no color in the list of {step.edge} extends the coloring ({step.kind} step)",
        {
            "step": step.to_json(),
            "list": sorted(options),
            "forbidden": sorted(forbidden),
            "colors_at_u": sorted(state.at[u]),
            "colors_at_v": sorted(state.at[v]),
            "recolored": [[list(e), a, b] for e, a, b in recolored],
            "partial_coloring": state.to_coloring().to_json(),
        },
    )


def color_graph(
    g: Graph,
    lists: ListAssignment | None = None,
    *,
    certify: bool = True,
    debug: bool = False,
) -> EdgeColoring:
    """Acyclic coloring of ``g`` from ``lists`` (default: uniform ``3*Delta + 70``).

    ``debug`` re-runs the full verifier after every extension.
    """
    if lists is None:
        lists = uniform_lists(g)
    uncovered = lists.covers(g)
    if uncovered:
        raise ValueError(f"no list for {len(uncovered)} edges, first {uncovered[0]}")
    bound = list_size_bound(g.max_degree())
    if g.m and min(len(lists[e]) for e in g.edges) < bound:
        warnings.warn(f"some list has fewer than 3*Delta+70 = {bound} colors", ListTooSmall, stacklevel=2)
    steps = elimination_order(g, certify=certify)
    state = PartialColoring(g.n)
    for step in reversed(steps):
        try:
            extend_coloring(state, step, lists)
        except ExtensionFailure as exc:
            exc.report["graph"] = {"n": g.n, "edges": [list(e) for e in g.sorted_edges()]}
            exc.report["list_bound"] = bound
            raise
        if debug:
            partial = state.to_coloring()
            sub = Graph(g.n, frozenset(partial.colors))
            assert verify_coloring(sub, partial).ok, step
    result = state.to_coloring()
    report = verify_coloring(g, result)
    if not report.ok:
        raise AssertionError(f"engine produced an invalid coloring: {report}")
    return result


# -- exact oracle --------------------------------------------------------------------


@dataclass(frozen=True)
class AcyclicIndex:
    value: int | None  # None when every k up to k_max fails
    coloring: EdgeColoring | None
    k_max: int

    @property
    def exceeded(self) -> bool:
        return self.value is None


def chi_a_bruteforce(g: Graph, k_max: int | None = None) -> AcyclicIndex:
    """Least ``k`` with an acyclic edge ``k``-coloring, by backtracking.

    Colors are introduced in increasing order to skip relabelings; each
    assignment is rejected when it repeats a color at a vertex or when its
    endpoints are already joined by a path in the two colors involved.
    """
    if g.m > ORACLE_EDGE_LIMIT:
        raise TooLarge(f"oracle limited to {ORACLE_EDGE_LIMIT} edges, got {g.m}")
    if k_max is None:
        k_max = list_size_bound(g.max_degree())
    if g.m == 0:
        return AcyclicIndex(0, EdgeColoring({}), k_max)
    order = _bfs_edge_order(g)
    for k in range(g.max_degree(), k_max + 1):
        found = _search(g, order, k)
        if found is not None:
            return AcyclicIndex(k, EdgeColoring(found), k_max)
    return AcyclicIndex(None, None, k_max)


def _bfs_edge_order(g: Graph) -> list[Edge]:
    order: list[Edge] = []
    seen: set[Edge] = set()
    visited = [False] * g.n
    for root in range(g.n):
        if visited[root]:
            continue
        visited[root] = True
        queue = [root]
        for x in queue:
            for y in g.adj[x]:
                e = edge_id(x, y)
                if e not in seen:
                    seen.add(e)
                    order.append(e)
                if not visited[y]:
                    visited[y] = True
                    queue.append(y)
    return order


def _search(g: Graph, order: list[Edge], k: int) -> dict[Edge, int] | None:
    colored: dict[Edge, int] = {}
    incident: list[dict[int, int]] = [{} for _ in range(g.n)]

    def joined(x: int, y: int, cols: tuple[int, int]) -> bool:
        stack, seen = [x], {x}
        while stack:
            z = stack.pop()
            if z == y:
                return True
            for col, w in incident[z].items():
                if col in cols and w not in seen:
                    seen.add(w)
                    stack.append(w)
        return False

    def place(i: int, used: int) -> bool:
        if i == len(order):
            return True
        x, y = order[i]
        for col in range(min(k, used + 1)):
            if col in incident[x] or col in incident[y]:
                continue
            others = (set(incident[x]) | set(incident[y])) - {col}
            if any(joined(x, y, (col, b)) for b in others):
                continue
            colored[(x, y)] = col
            incident[x][col] = y
            incident[y][col] = x
            if place(i + 1, max(used, col + 1)):
                return True
            del colored[(x, y)], incident[x][col], incident[y][col]
        return False

    return dict(colored) if place(0, 0) else None
