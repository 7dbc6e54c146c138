"""Drawings with at most one crossing per edge, as planarized rotation systems.

A :class:`Drawing` lists the original edges, the crossing pairs, and for
every node of the planarized graph the cyclic order of its segment ends.
Real vertices are nodes ``0..n-1``; crossing ``k`` is node ``n + k``.

Segment-end ids are derived from edge indices.  Edge ``i`` listed as
``(a, b)`` owns ids ``4i .. 4i+3``::

    uncrossed:  4i   at a,  4i+1 at b          (one segment)
    crossed:    4i   at a,  4i+1 at x          (half 0, a -> x)
                4i+2 at x,  4i+3 at b          (half 1, x -> b)

so ``s ^ 1`` is always the other end of the segment holding ``s``.
Faces are traced by following, from a segment end ``s``, the rotation
successor of ``s ^ 1`` at the node where ``s ^ 1`` sits.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import NamedTuple

from .graph import Edge, Graph, GraphError, build_graph, edge_id, girth

EDGE_DOUBLY_CROSSED = "EdgeDoublyCrossed"
CROSSING_SHARED_ENDPOINT = "CrossingSharedEndpoint"
BAD_CROSSING_DEGREE = "BadCrossingDegree"
ROTATION_INCONSISTENT = "RotationInconsistent"
BAD_EDGE = "BadEdge"
BAD_CROSSING_INDEX = "BadCrossingIndex"
DISCONNECTED = "Disconnected"


class DrawingIssue(NamedTuple):
    code: str
    message: str


class InvalidDrawing(ValueError):
    def __init__(self, issues: list[DrawingIssue]):
        self.issues = issues
        super().__init__("; ".join(f"{i.code}: {i.message}" for i in issues))


class NotPlanarDrawing(ValueError):
    pass


class DrawingFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Drawing:
    n: int
    edges: tuple[Edge, ...]
    crossings: tuple[tuple[int, int], ...]
    rotation: dict[int, tuple[int, ...]] = field(hash=False)

    @property
    def crossing_count(self) -> int:
        return len(self.crossings)

    @property
    def node_count(self) -> int:
        return self.n + len(self.crossings)

    @property
    def base(self) -> Graph:
        return build_graph(self.n, self.edges)

    def crossing_of(self) -> dict[int, int]:
        """Edge index -> crossing node, for crossed edges."""
        out = {}
        for k, (i, j) in enumerate(self.crossings):
            out[i] = self.n + k
            out[j] = self.n + k
        return out

    def segments(self) -> dict[int, list[tuple[int, int]]]:
        """Edge index -> its one or two segments as (node, node) paths."""
        cross = self.crossing_of()
        out = {}
        for i, (a, b) in enumerate(self.edges):
            x = cross.get(i)
            out[i] = [(a, b)] if x is None else [(a, x), (x, b)]
        return out

    def end_nodes(self) -> dict[int, int]:
        """Segment-end id -> node it sits at."""
        out = {}
        for i, segs in self.segments().items():
            for h, (s, t) in enumerate(segs):
                out[4 * i + 2 * h] = s
                out[4 * i + 2 * h + 1] = t
        return out

    def segment_count(self) -> int:
        return len(self.edges) + 2 * len(self.crossings)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "edges": [list(e) for e in self.edges],
            "crossings": [list(c) for c in self.crossings],
            "rotation": {str(k): list(v) for k, v in sorted(self.rotation.items())},
        }


_FIELDS = {"n", "edges", "crossings", "rotation"}


def drawing_from_json(obj: dict) -> Drawing:
    if not isinstance(obj, dict):
        raise DrawingFormatError("drawing must be a JSON object")
    unknown = set(obj) - _FIELDS
    if unknown:
        raise DrawingFormatError(f"unknown field(s): {', '.join(sorted(unknown))}")
    missing = _FIELDS - set(obj)
    if missing:
        raise DrawingFormatError(f"missing field(s): {', '.join(sorted(missing))}")
    try:
        n = int(obj["n"])
        edges = tuple((int(u), int(v)) for u, v in obj["edges"])
        crossings = tuple((int(i), int(j)) for i, j in obj["crossings"])
        rotation = {int(k): tuple(int(s) for s in v) for k, v in obj["rotation"].items()}
    except (TypeError, ValueError, AttributeError) as exc:
        raise DrawingFormatError(f"malformed drawing: {exc}") from None
    return Drawing(n, edges, crossings, rotation)


def read_drawing(path: str | Path) -> Drawing:
    path = Path(path)
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise DrawingFormatError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    try:
        return drawing_from_json(obj)
    except DrawingFormatError as exc:
        raise DrawingFormatError(f"{path}: {exc}") from None


def write_drawing(d: Drawing, path: str | Path) -> None:
    Path(path).write_text(json.dumps(d.to_json(), sort_keys=True) + "\n", encoding="utf-8")


# -- validation ---------------------------------------------------------------


def validate_drawing(d: Drawing) -> list[DrawingIssue]:
    """Every problem found in ``d``; an empty list means the drawing is valid."""
    issues: list[DrawingIssue] = []
    try:
        build_graph(d.n, d.edges)
    except GraphError as exc:
        return [DrawingIssue(BAD_EDGE, str(exc))]

    m = len(d.edges)
    times_crossed = [0] * m
    for k, (i, j) in enumerate(d.crossings):
        if not (0 <= i < m and 0 <= j < m):
            issues.append(DrawingIssue(BAD_CROSSING_INDEX, f"crossing {k} names edge outside 0..{m - 1}"))
            continue
        times_crossed[i] += 1
        if i != j:
            times_crossed[j] += 1
        if len(set(d.edges[i]) | set(d.edges[j])) < 4:
            issues.append(
                DrawingIssue(
                    CROSSING_SHARED_ENDPOINT,
                    f"crossing {k}: edges {d.edges[i]} and {d.edges[j]} share an endpoint",
                )
            )
    for i, t in enumerate(times_crossed):
        if t > 1:
            issues.append(DrawingIssue(EDGE_DOUBLY_CROSSED, f"edge {i} {d.edges[i]} is crossed {t} times"))
    if issues:
        return issues

    ends_at = d.end_nodes()
    expected: dict[int, set[int]] = {v: set() for v in range(d.node_count)}
    for s, node in ends_at.items():
        expected[node].add(s)
    for node in sorted(d.rotation):
        if node not in expected:
            issues.append(DrawingIssue(ROTATION_INCONSISTENT, f"rotation given for unknown node {node}"))
    for node in range(d.node_count):
        listed = d.rotation.get(node, ())
        want = expected[node]
        if node >= d.n and len(listed) != 4:
            issues.append(
                DrawingIssue(BAD_CROSSING_DEGREE, f"crossing node {node} has {len(listed)} segment ends, not 4")
            )
            continue
        if len(listed) != len(set(listed)):
            issues.append(DrawingIssue(ROTATION_INCONSISTENT, f"node {node} lists a segment end twice"))
        if set(listed) != want:
            extra = sorted(set(listed) - want)
            absent = sorted(want - set(listed))
            issues.append(
                DrawingIssue(
                    ROTATION_INCONSISTENT,
                    f"node {node}: unexpected ends {extra}, missing ends {absent}",
                )
            )
            continue
        if node >= d.n:
            # the two halves of each crossing edge must sit opposite each other
            owner = [s // 4 for s in listed]
            if owner[0] != owner[2] or owner[1] != owner[3]:
                issues.append(
                    DrawingIssue(BAD_CROSSING_DEGREE, f"crossing node {node}: crossing edges are not opposite")
                )
    if issues:
        return issues

    if d.node_count > 1 and not _planarized_connected(d, ends_at):
        issues.append(DrawingIssue(DISCONNECTED, "planarized graph is not connected"))
    return issues


def _planarized_connected(d: Drawing, ends_at: dict[int, int]) -> bool:
    adj: dict[int, list[int]] = {v: [] for v in range(d.node_count)}
    for s, node in ends_at.items():
        if s % 2 == 0:
            other = ends_at[s + 1]
            adj[node].append(other)
            adj[other].append(node)
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == d.node_count


def _require_valid(d: Drawing) -> None:
    issues = validate_drawing(d)
    if issues:
        raise InvalidDrawing(issues)


# -- faces and Euler characteristic -------------------------------------------


class Face(NamedTuple):
    ends: tuple[int, ...]  # segment ends, each leaving the node listed at the same position
    nodes: tuple[int, ...]


def trace_faces(d: Drawing) -> list[Face]:
    ends_at = d.end_nodes()
    position = {}
    for node, rot in d.rotation.items():
        for idx, s in enumerate(rot):
            position[s] = idx
    faces = []
    seen: set[int] = set()
    for start in sorted(ends_at):
        if start in seen:
            continue
        walk = []
        s = start
        while s not in seen:
            seen.add(s)
            walk.append(s)
            twin = s ^ 1
            rot = d.rotation[ends_at[twin]]
            s = rot[(position[twin] + 1) % len(rot)]
        faces.append(Face(tuple(walk), tuple(ends_at[s] for s in walk)))
    return faces


def euler_characteristic(d: Drawing) -> tuple[int, list[Face]]:
    """``V - E + F`` of the planarized graph, with the traced faces.

    A drawing without edges is a single vertex on the sphere: one face.
    """
    _require_valid(d)
    faces = trace_faces(d)
    f = len(faces) if faces else 1
    return d.node_count - d.segment_count() + f, faces


@dataclass(frozen=True)
class BoundsReport:
    lambda_: int
    cr: int
    v: int
    e: int
    girth: int | None
    crossing_ok: bool
    crossing_slack: int
    edge_limit: Fraction | None
    edge_ok: bool | None  # None: girth undefined (forest), bound not applicable
    edge_slack: Fraction | None

    def to_json(self) -> dict:
        frac = lambda x: None if x is None else f"{x.numerator}/{x.denominator}"  # noqa: E731
        return {
            "lambda": self.lambda_,
            "cr": self.cr,
            "v": self.v,
            "e": self.e,
            "girth": self.girth,
            "crossing_bound_ok": self.crossing_ok,
            "crossing_bound_slack": self.crossing_slack,
            "edge_bound": frac(self.edge_limit),
            "edge_bound_ok": "not_applicable" if self.edge_ok is None else self.edge_ok,
            "edge_bound_slack": frac(self.edge_slack),
        }


def edge_bound(v: int, lambda_: int, g: int) -> Fraction:
    """``(2g-2)/(g-2) * (v - lambda)`` for girth at least ``g >= 3``."""
    return Fraction(2 * g - 2, g - 2) * (v - lambda_)


def check_bounds(d: Drawing) -> BoundsReport:
    lam, _ = euler_characteristic(d)
    base = d.base
    v, e, cr = base.n, base.m, d.crossing_count
    crossing_slack = v - lam - cr
    g = girth(base)
    if g is None:
        bound = ok2 = slack2 = None
    else:
        bound = edge_bound(v, lam, g)
        ok2 = e <= bound
        slack2 = bound - e
    return BoundsReport(lam, cr, v, e, g, crossing_slack >= 0, crossing_slack, bound, ok2, slack2)


# -- vertex-face graph ----------------------------------------------------------


def ringel_graph(d: Drawing) -> Graph:
    """Graph on vertices and faces of a plane drawing.

    Faces get ids ``n, n+1, ...`` in trace order.  Two vertices are joined
    when adjacent, a vertex and a face when the vertex lies on the face
    boundary, two faces when they share at least one edge.
    """
    if d.crossing_count:
        raise NotPlanarDrawing(f"drawing has {d.crossing_count} crossings")
    lam, faces = euler_characteristic(d)
    if lam != 2:
        raise NotPlanarDrawing(f"drawing traces to Euler characteristic {lam}, not 2")
    n = d.n
    if not faces:
        return build_graph(n + 1, [(0, n)] if n else [])
    face_of = {}
    for k, face in enumerate(faces):
        for s in face.ends:
            face_of[s] = n + k
    pairs: set[Edge] = set(edge_id(a, b) for a, b in d.edges)
    for k, face in enumerate(faces):
        for v in set(face.nodes):
            pairs.add(edge_id(v, n + k))
    for s, f in face_of.items():
        other = face_of[s ^ 1]
        if other != f:
            pairs.add(edge_id(f, other))
    return Graph(n + len(faces), frozenset(pairs))


# -- generator ------------------------------------------------------------------


class _PlaneBuilder:
    """Triangulation held as per-node neighbor rotations (planarized)."""

    def __init__(self) -> None:
        self.rot: list[list[int]] = [[1, 2], [2, 0], [0, 1]]
        self.real = 3
        self.base: set[Edge] = {(0, 1), (0, 2), (1, 2)}

    def succ(self, v: int, u: int) -> int:
        r = self.rot[v]
        return r[(r.index(u) + 1) % len(r)]

    def _insert_after(self, v: int, u: int, new: int) -> None:
        r = self.rot[v]
        r.insert(r.index(u) + 1, new)

    def _replace(self, v: int, old: int, new: int) -> None:
        r = self.rot[v]
        r[r.index(old)] = new

    def real_darts(self) -> list[tuple[int, int]]:
        return [(a, b) for a, b in sorted(self.base) if b in self.rot[a]] + [
            (b, a) for a, b in sorted(self.base) if b in self.rot[a]
        ]

    def stack_vertex(self, a: int, b: int) -> None:
        """Insert a new vertex into the face a -> b -> succ_b(a)."""
        c = self.succ(b, a)
        x = len(self.rot)
        self.rot.append([a, c, b])
        self._insert_after(b, a, x)
        self._insert_after(c, b, x)
        self._insert_after(a, c, x)
        self.real += 1
        self.base |= {edge_id(x, a), edge_id(x, b), edge_id(x, c)}

    def flip(self, a: int, b: int) -> bool:
        c, d = self.succ(b, a), self.succ(a, b)
        if c == d or edge_id(c, d) in self.base or len(self.rot[a]) <= 3 or len(self.rot[b]) <= 3:
            return False
        self.rot[a].remove(b)
        self.rot[b].remove(a)
        self._insert_after(c, b, d)
        self._insert_after(d, a, c)
        self.base.discard(edge_id(a, b))
        self.base.add(edge_id(c, d))
        return True

    def cross(self, a: int, b: int, crossings: list[tuple[Edge, Edge, int]]) -> bool:
        """Add chord ``cd`` across the two triangles on ``ab``."""
        if b not in self.rot[a]:
            return False
        c, d = self.succ(b, a), self.succ(a, b)
        n = self.real
        if c >= n or d >= n or c == d or edge_id(c, d) in self.base:
            return False
        if self.succ(c, b) != a or self.succ(d, a) != b:
            return False
        x = len(self.rot)
        self.rot.append([a, c, b, d])
        self._replace(a, b, x)
        self._replace(b, a, x)
        self._insert_after(c, b, x)
        self._insert_after(d, a, x)
        self.base.add(edge_id(c, d))
        crossings.append((edge_id(a, b), edge_id(c, d), x))
        return True


def generate_one_planar(n: int, seed: int, *, max_crossings: int | None = None) -> Drawing:
    """Random drawing with at most one crossing per edge and ``lambda = 2``.

    A triangulation is grown by stacking vertices into random faces and
    mixed with random edge flips; crossings are then added as second
    diagonals of quadrilaterals formed by two adjacent uncrossed triangles.
    """
    if n < 3:
        raise ValueError("need n >= 3")
    rng = random.Random(f"one-planar:{n}:{seed}")
    pb = _PlaneBuilder()
    while pb.real < n:
        a, b = rng.choice(pb.real_darts())
        pb.stack_vertex(a, b)
        for _ in range(rng.randint(0, 2)):
            a, b = rng.choice(sorted(pb.base))
            pb.flip(a, b)
    limit = n - 2 if max_crossings is None else max_crossings
    target = rng.randint(0, limit)
    crossings: list[tuple[Edge, Edge, int]] = []
    attempts = 0
    while len(crossings) < target and attempts < 20 * n:
        attempts += 1
        a, b = rng.choice(pb.real_darts())
        pb.cross(a, b, crossings)
    return _to_drawing(n, pb, crossings)


def _to_drawing(n: int, pb: _PlaneBuilder, crossings: list[tuple[Edge, Edge, int]]) -> Drawing:
    edges = sorted(pb.base)
    index = {e: i for i, e in enumerate(edges)}
    node_of_crossing = {}
    pairs = []
    for k, (e1, e2, x) in enumerate(crossings):
        node_of_crossing[x] = n + k
        pairs.append((index[e1], index[e2]))
    relabel = lambda y: node_of_crossing.get(y, y)  # noqa: E731
    cross_at = {}
    for e1, e2, x in crossings:
        cross_at[index[e1]] = x
        cross_at[index[e2]] = x
    end_toward: dict[tuple[int, int], int] = {}
    for i, (a, b) in enumerate(edges):
        x = cross_at.get(i)
        if x is None:
            end_toward[(a, b)] = 4 * i
            end_toward[(b, a)] = 4 * i + 1
        else:
            end_toward[(a, x)] = 4 * i
            end_toward[(x, a)] = 4 * i + 1
            end_toward[(x, b)] = 4 * i + 2
            end_toward[(b, x)] = 4 * i + 3
    rotation = {relabel(y): tuple(end_toward[(y, z)] for z in nbrs) for y, nbrs in enumerate(pb.rot)}
    return Drawing(n, tuple(edges), tuple(pairs), rotation)
