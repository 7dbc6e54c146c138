"""Seeded graph families for test corpora and benchmarks.

Every generator is a pure function of its arguments; the random stream is
seeded from a string naming the family, size and seed so that families
never share streams.
"""

from __future__ import annotations

import random
from typing import Callable, Iterator, NamedTuple

import networkx as nx

from .density import FOUR_NEGATIVE, is_linear
from .embedding import generate_one_planar, ringel_graph
from .graph import Graph, build_graph, edge_id, induced_subgraph


class Instance(NamedTuple):
    name: str
    graph: Graph


def regular(n: int, d: int, seed: int) -> Graph:
    g = nx.random_regular_graph(d, n, seed=random.Random(f"regular:{d}:{n}:{seed}").getrandbits(32))
    return build_graph(n, g.edges())


def ringel_of_triangulation(n: int, seed: int) -> Graph:
    """Vertex-face graph of a random plane triangulation on ``n`` vertices."""
    return ringel_graph(generate_one_planar(n, seed, max_crossings=0))


def one_planar(n: int, seed: int) -> Graph:
    return generate_one_planar(n, seed).base


def hub_graph(n: int, seed: int) -> Graph:
    """A few high-degree hubs over many vertices of degree 4..7.

    Small vertices take one to four hub edges plus a sparse random
    structure among themselves; hubs may be adjacent to each other.  With
    probability 1/2 the hubs get the lowest ids, which makes the
    configuration scan meet them first.
    """
    rng = random.Random(f"hubs:{n}:{seed}")
    hubs = rng.randint(2, max(2, min(6, n // 9)))
    ids = list(range(n))
    if rng.random() < 0.5:
        rng.shuffle(ids)
    hub_ids, small_ids = ids[:hubs], ids[hubs:]
    pairs: set[tuple[int, int]] = set()
    deg = dict.fromkeys(range(n), 0)

    def add(a: int, b: int) -> None:
        e = edge_id(a, b)
        if e not in pairs:
            pairs.add(e)
            deg[a] += 1
            deg[b] += 1

    for i, a in enumerate(hub_ids):
        for b in hub_ids[i + 1 :]:
            if rng.random() < 0.3:
                add(a, b)
    for s in small_ids:
        for h in rng.sample(hub_ids, rng.randint(1, min(4, hubs))):
            add(s, h)
    order = small_ids[:]
    rng.shuffle(order)
    for s in order:
        tries = 0
        while deg[s] < 4 and tries < 20:
            tries += 1
            t = rng.choice(small_ids)
            if t != s and deg[t] < rng.randint(5, 7):
                add(s, t)
    return build_graph(n, pairs)


def four_core(g: Graph) -> Graph:
    """Induced subgraph on the 4-core, relabeled (possibly empty)."""
    adj = {v: set(g.adj[v]) for v in range(g.n)}
    stack = [v for v in adj if len(adj[v]) < 4]
    while stack:
        v = stack.pop()
        if v not in adj:
            continue
        for w in adj.pop(v):
            adj[w].discard(v)
            if len(adj[w]) == 3:
                stack.append(w)
    return induced_subgraph(g, adj)[0]


def bipartite_hubs(hubs: int, smalls: int) -> Graph:
    """``K_{hubs, smalls}``: hubs are ``0..hubs-1``."""
    return build_graph(hubs + smalls, [(h, hubs + s) for h in range(hubs) for s in range(smalls)])


FAMILIES: dict[str, Callable[[int, int], Graph]] = {
    "regular4": lambda n, s: regular(n, 4, s),
    "ringel": lambda n, s: ringel_of_triangulation(max(3, (n + 4) // 3), s),
    "oneplanar": one_planar,
    "hubs": hub_graph,
}


def theorem_corpus(count: int, seed: int, max_n: int = 150) -> Iterator[Instance]:
    """Graphs certified (4,-1)-linear, cycling through :data:`FAMILIES`.

    For ``ringel`` the size is the vertex count of the result (``3k - 4``
    for a triangulation on ``k`` vertices).  Candidates that fail the
    certificate are skipped, never repaired.
    """
    rng = random.Random(f"theorem-corpus:{seed}")
    names = sorted(FAMILIES)
    produced = attempt = 0
    while produced < count:
        family = names[attempt % len(names)]
        attempt += 1
        n = rng.randint(8, max_n)
        sub = rng.getrandbits(31)
        g = FAMILIES[family](n, sub)
        if g.m == 0 or not is_linear(g, FOUR_NEGATIVE).verdict:
            continue
        produced += 1
        yield Instance(f"{family}-n{g.n}-s{sub}", g)


def lemma_corpus(count: int, seed: int, max_n: int = 150) -> Iterator[Instance]:
    """Graphs with minimum degree >= 4 and ``e <= 4v - 1``."""
    rng = random.Random(f"lemma-corpus:{seed}")
    makers: list[tuple[str, Callable[[int, int], Graph]]] = [
        ("regular4", lambda n, s: regular(n, 4, s)),
        ("regular5", lambda n, s: regular(n + n % 2, 5, s)),
        ("regular7", lambda n, s: regular(n + n % 2, 7, s)),
        ("ringel", FAMILIES["ringel"]),
        ("oneplanar-core", lambda n, s: four_core(one_planar(n, s))),
        ("hubs", hub_graph),
        ("hubs-core", lambda n, s: four_core(hub_graph(n, s))),
    ]
    produced = attempt = 0
    while produced < count:
        label, make = makers[attempt % len(makers)]
        attempt += 1
        n = rng.randint(8, max_n)
        sub = rng.getrandbits(31)
        g = make(n, sub)
        if g.n == 0 or min(g.degrees()) < 4 or g.m > 4 * g.n - 1:
            continue
        produced += 1
        yield Instance(f"{label}-n{g.n}-s{sub}", g)


def drawing_corpus(count: int, seed: int, max_n: int = 80):
    rng = random.Random(f"drawing-corpus:{seed}")
    for _ in range(count):
        n = rng.randint(3, max_n)
        sub = rng.getrandbits(31)
        yield f"drawing-n{n}-s{sub}", generate_one_planar(n, sub)
