"""Exact hereditary-sparsity certificates.

A graph is ``(alpha, beta)``-linear when every subgraph ``H`` satisfies
``e(H) <= alpha * v(H) + beta``.  Only induced subgraphs matter, so the
question reduces to the largest *excess* ``e(G[S]) - alpha*|S|`` over
nonempty vertex sets ``S``.

The excess is maximized as a maximum-weight closure: every edge is an item
worth 1 that requires both endpoints, every vertex costs ``alpha``.  With
``alpha = p/q`` all capacities are scaled by ``q`` so the flow is integral
and every value below is an exact :class:`~fractions.Fraction`.

A closure may be empty, which is where the work is.  When the best closure
has positive value, or value zero with a nonempty maximal source side, it
is the answer.  Otherwise the optimum is negative and at least ``-alpha``
(any singleton).  A set beating ``-alpha`` survives peeling of vertices of
degree ``<= alpha`` without losing value, so only the ``floor(alpha)+1``
core needs searching, one forced-vertex cut per core vertex.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order, maximum_flow

from .graph import Graph, count_edges_within

BRUTE_FORCE_LIMIT = 20


class EmptyGraph(ValueError):
    pass


class TooLarge(ValueError):
    pass


@dataclass(frozen=True)
class LinearityParams:
    alpha: Fraction
    beta: int

    def __post_init__(self) -> None:
        alpha = Fraction(self.alpha)
        if alpha < 0:
            raise ValueError("alpha must be nonnegative")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", int(self.beta))


@dataclass(frozen=True)
class DensityCertificate:
    max_excess: Fraction
    witness: tuple[int, ...]
    verdict: bool
    params: LinearityParams

    def to_json(self) -> dict:
        return {
            "max_excess": format_fraction(self.max_excess),
            "witness": list(self.witness),
            "verdict": bool(self.verdict),
            "alpha": format_fraction(self.params.alpha),
            "beta": self.params.beta,
        }


def format_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(text: str) -> Fraction:
    return Fraction(text.strip())


def excess(g: Graph, vertices: Sequence[int], alpha: Fraction) -> Fraction:
    """``e(G[S]) - alpha*|S|`` computed directly."""
    s = set(vertices)
    return count_edges_within(g, s) - Fraction(alpha) * len(s)


def _core(adj: dict[int, set[int]], k: int) -> dict[int, set[int]]:
    """The ``k``-core of an adjacency map, as a new adjacency map."""
    adj = {v: set(nb) for v, nb in adj.items()}
    stack = [v for v, nb in adj.items() if len(nb) < k]
    while stack:
        v = stack.pop()
        if v not in adj:
            continue
        for w in adj.pop(v):
            nb = adj[w]
            nb.discard(v)
            if len(nb) == k - 1:
                stack.append(w)
    return adj


def _closure(
    vertices: list[int],
    edges: list[tuple[int, int]],
    p: int,
    q: int,
    forced: int | None = None,
) -> tuple[int, list[int]]:
    """Best closure value scaled by ``q`` and its maximal source side.

    Nodes: 0 source, 1 sink, then one node per edge, then one per vertex.
    """
    m, k = len(edges), len(vertices)
    index = {v: 2 + m + i for i, v in enumerate(vertices)}
    size = 2 + m + k
    inf = m * q + k * p + 1
    rows: list[int] = []
    cols: list[int] = []
    caps: list[int] = []
    for i, (a, b) in enumerate(edges):
        node = 2 + i
        rows += [0, node, node]
        cols += [node, index[a], index[b]]
        caps += [q, inf, inf]
    for v in vertices:
        rows.append(index[v])
        cols.append(1)
        caps.append(p)
    if forced is not None:
        rows.append(0)
        cols.append(index[forced])
        caps.append(inf)
    cap = csr_matrix(
        (np.asarray(caps, dtype=np.int32), (np.asarray(rows), np.asarray(cols))),
        shape=(size, size),
    )
    res = maximum_flow(cap, 0, 1, method="dinic")
    residual = (cap - res.flow).tocsr()
    residual.data[residual.data < 0] = 0
    residual.eliminate_zeros()
    # Nodes that still reach the sink lie on the sink side of every min cut.
    reaches_sink = breadth_first_order(residual.T.tocsr(), 1, directed=True, return_predecessors=False)
    sink_side = set(reaches_sink.tolist())
    chosen = [v for v in vertices if index[v] not in sink_side]
    return int(m * q - res.flow_value), chosen


def max_excess(g: Graph, alpha: Fraction | int | str) -> tuple[Fraction, tuple[int, ...]]:
    """Maximum of ``e(G[S]) - alpha*|S|`` over nonempty ``S``, with a maximizer."""
    if g.n == 0:
        raise EmptyGraph("max_excess needs at least one vertex")
    alpha = Fraction(alpha)
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    p, q = alpha.numerator, alpha.denominator

    if g.m:
        value, chosen = _closure(list(range(g.n)), g.sorted_edges(), p, q)
        if value > 0 or (value == 0 and chosen):
            return Fraction(value, q), tuple(chosen)

    best_value, best_set = -p, [0]
    adj = {v: set(g.adj[v]) for v in range(g.n)}
    core = _core(adj, alpha.numerator // alpha.denominator + 1)
    while core and best_value < -1:
        # Lowest current degree first: those vertices drop out of the core
        # fastest, which shrinks every later network.
        v = min(core, key=lambda x: (len(core[x]), x))
        comp = _component(core, v)
        sub_edges = sorted((a, b) for a in comp for b in core[a] if a < b)
        value, chosen = _closure(sorted(comp), sub_edges, p, q, forced=v)
        if value > best_value:
            best_value, best_set = value, chosen
        for w in core.pop(v):
            core[w].discard(v)
        core = _core(core, alpha.numerator // alpha.denominator + 1)
    return Fraction(best_value, q), tuple(sorted(best_set))


def _component(adj: dict[int, set[int]], start: int) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def max_excess_bruteforce(g: Graph, alpha: Fraction | int | str) -> tuple[Fraction, tuple[int, ...]]:
    """Exhaustive oracle over all ``2**n - 1`` nonempty subsets (``n <= 20``)."""
    if g.n == 0:
        raise EmptyGraph("max_excess needs at least one vertex")
    if g.n > BRUTE_FORCE_LIMIT:
        raise TooLarge(f"brute force limited to n <= {BRUTE_FORCE_LIMIT}, got {g.n}")
    alpha = Fraction(alpha)
    p, q = alpha.numerator, alpha.denominator
    n = g.n
    lower = [0] * n
    for u, v in g.edges:
        lower[v] |= 1 << u
    # edges[mask] = edges[mask without its top vertex] + edges from top vertex down
    edges = [0] * (1 << n)
    size = [0] * (1 << n)
    best_value, best_mask = None, 0
    for mask in range(1, 1 << n):
        top = mask.bit_length() - 1
        rest = mask ^ (1 << top)
        edges[mask] = edges[rest] + (lower[top] & rest).bit_count()
        size[mask] = size[rest] + 1
        value = q * edges[mask] - p * size[mask]
        if best_value is None or value > best_value:
            best_value, best_mask = value, mask
    witness = tuple(v for v in range(n) if best_mask >> v & 1)
    return Fraction(best_value, q), witness


def is_linear(g: Graph, params: LinearityParams) -> DensityCertificate:
    value, witness = max_excess(g, params.alpha)
    return DensityCertificate(value, witness, value <= params.beta, params)


FOUR_NEGATIVE = LinearityParams(Fraction(4), -1)
