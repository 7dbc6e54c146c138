"""Simple undirected graphs on dense integer vertex ids.

A :class:`Graph` is immutable.  Vertices are ``0..n-1`` and every edge is
stored once as a canonical pair ``(min, max)``.  Per-vertex sorted neighbor
tuples are built alongside the pair set because the structure scans and the
coloring engine iterate neighborhoods far more often than they test pairs.

The edge-list text format used by every CLI command is::

    # optional comment lines
    n m
    u v
    ...
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple

Edge = tuple[int, int]


class GraphError(ValueError):
    """Base class for malformed graph input."""


class LoopEdge(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class VertexOutOfRange(GraphError):
    pass


class GraphFormatError(GraphError):
    """Edge-list text that does not parse; the message cites the line."""


def edge_id(u: int, v: int) -> Edge:
    """Canonical unordered pair for the edge ``uv``."""
    if u == v:
        raise LoopEdge(f"loop at vertex {u}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset[Edge]
    adj: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise GraphError("vertex count must be nonnegative")
        nbrs: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            if u == v:
                raise LoopEdge(f"loop at vertex {u}")
            if not (0 <= u < v < self.n):
                if u > v:
                    raise GraphError(f"edge {(u, v)} is not canonical")
                raise VertexOutOfRange(f"edge {(u, v)} outside 0..{self.n - 1}")
            nbrs[u].append(v)
            nbrs[v].append(u)
        object.__setattr__(self, "adj", tuple(tuple(sorted(a)) for a in nbrs))
        assert sum(len(a) for a in self.adj) == 2 * len(self.edges)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adj]

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return u != v and edge_id(u, v) in self.edges

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def remove_edge(self, u: int, v: int) -> Graph:
        e = edge_id(u, v)
        if e not in self.edges:
            raise KeyError(f"no edge {e}")
        return Graph(self.n, self.edges - {e})

    def add_edge(self, u: int, v: int) -> Graph:
        e = edge_id(u, v)
        if e in self.edges:
            raise DuplicateEdge(f"edge {e} already present")
        if not (0 <= e[0] and e[1] < self.n):
            raise VertexOutOfRange(f"edge {e} outside 0..{self.n - 1}")
        return Graph(self.n, self.edges | {e})


def build_graph(n: int, pairs: Iterable[tuple[int, int]]) -> Graph:
    """Build a graph from vertex pairs, rejecting loops, repeats and bad ids."""
    seen: set[Edge] = set()
    for u, v in pairs:
        u, v = int(u), int(v)
        if u == v:
            raise LoopEdge(f"loop at vertex {u}")
        for w in (u, v):
            if not 0 <= w < n:
                raise VertexOutOfRange(f"vertex {w} outside 0..{n - 1}")
        e = edge_id(u, v)
        if e in seen:
            raise DuplicateEdge(f"edge {e} listed twice")
        seen.add(e)
    return Graph(n, frozenset(seen))


class DegreeProfile(NamedTuple):
    degrees: tuple[int, ...]
    min_degree: int
    max_degree: int


def degree_profile(g: Graph) -> DegreeProfile:
    degs = tuple(g.degrees())
    if g.m == 0:
        return DegreeProfile(degs, 0, 0)
    return DegreeProfile(degs, min(degs), max(degs))


def girth(g: Graph) -> int | None:
    """Length of a shortest cycle, or ``None`` when ``g`` is a forest.

    BFS from every vertex; a non-tree edge ``xy`` closes a walk of length
    ``dist[x] + dist[y] + 1`` which bounds the girth from above, and the
    minimum over all roots is exact.  Each search stops once its frontier
    can no longer beat the best cycle found so far.
    """
    best: int | None = None
    for root in range(g.n):
        if not g.adj[root]:
            continue
        dist = {root: 0}
        parent = {root: -1}
        queue = deque([root])
        while queue:
            x = queue.popleft()
            if best is not None and 2 * dist[x] + 1 >= best:
                break
            for y in g.adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    queue.append(y)
                elif parent[x] != y:
                    length = dist[x] + dist[y] + 1
                    if best is None or length < best:
                        best = length
        if best == 3:
            break
    return best


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> tuple[Graph, dict[int, int]]:
    """``G[S]`` relabeled to ``0..|S|-1`` in increasing old-id order.

    Returns the subgraph and the map from old ids to new ids.
    """
    keep = sorted(set(vertices))
    for v in keep:
        if not 0 <= v < g.n:
            raise VertexOutOfRange(f"vertex {v} outside 0..{g.n - 1}")
    relabel = {v: i for i, v in enumerate(keep)}
    sub = frozenset(
        (relabel[u], relabel[v]) for u, v in g.edges if u in relabel and v in relabel
    )
    return Graph(len(keep), sub), relabel


def count_edges_within(g: Graph, vertices: Iterable[int]) -> int:
    s = set(vertices)
    return sum(1 for u, v in g.edges if u in s and v in s)


def connected_components(g: Graph) -> list[list[int]]:
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        stack = [s]
        while stack:
            x = stack.pop()
            for y in g.adj[x]:
                if not seen[y]:
                    seen[y] = True
                    comp.append(y)
                    stack.append(y)
        comps.append(sorted(comp))
    return comps


# -- edge-list text format ---------------------------------------------------


def parse_edge_list(text: str, source: str = "<string>") -> Graph:
    header: tuple[int, int] | None = None
    pairs: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"{source}:{lineno}: expected two integers, got {line!r}")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"{source}:{lineno}: expected two integers, got {line!r}") from None
        if header is None:
            if a < 0 or b < 0:
                raise GraphFormatError(f"{source}:{lineno}: negative header values")
            header = (a, b)
            continue
        if a == b:
            raise LoopEdge(f"{source}:{lineno}: loop at vertex {a}")
        if not (0 <= a < header[0] and 0 <= b < header[0]):
            raise VertexOutOfRange(f"{source}:{lineno}: vertex outside 0..{header[0] - 1}")
        pairs.append((a, b))
    if header is None:
        raise GraphFormatError(f"{source}: missing 'n m' header")
    if len(pairs) != header[1]:
        raise GraphFormatError(f"{source}: header declares {header[1]} edges, found {len(pairs)}")
    try:
        return build_graph(header[0], pairs)
    except DuplicateEdge as exc:
        raise DuplicateEdge(f"{source}: {exc}") from None


def format_edge_list(g: Graph, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"{g.n} {g.m}")
    lines.extend(f"{u} {v}" for u, v in g.sorted_edges())
    return "\n".join(lines) + "\n"


def read_edge_list(path: str | Path) -> Graph:
    path = Path(path)
    return parse_edge_list(path.read_text(encoding="utf-8"), source=str(path))


def write_edge_list(g: Graph, path: str | Path, comment: str | None = None) -> None:
    Path(path).write_text(format_edge_list(g, comment), encoding="utf-8")
