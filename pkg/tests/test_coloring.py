import json
import random
import warnings
from itertools import combinations
from pathlib import Path

import pytest

from acyclic_choice.coloring import (
    DensityRefusal,
    EdgeColoring,
    EliminationStep,
    ExtensionFailure,
    FormatError,
    IncompleteColoring,
    ListAssignment,
    ListTooSmall,
    PartialColoring,
    TooLarge,
    _forbidden,
    chi_a_bruteforce,
    coloring_from_json,
    color_graph,
    elimination_order,
    extend_coloring,
    list_size_bound,
    lists_from_json,
    uniform_lists,
    verify_coloring,
)
from acyclic_choice.generators import theorem_corpus
from acyclic_choice.graph import build_graph, edge_id
from acyclic_choice.structure import LOW_DEGREE, LemmaViolation, Reducible
from strategies import complete, cycle, path, star
from test_structure import wheel_hub

GOLDENS = Path(__file__).parent / "goldens" / "chi_a.json"


def coloring(pairs_colors):
    return EdgeColoring({edge_id(u, v): c for u, v, c in pairs_colors})


# -- verifier ---------------------------------------------------------------------


def test_verifier_examples():
    c4 = cycle(4)
    r = verify_coloring(c4, coloring([(0, 1, 1), (1, 2, 2), (2, 3, 1), (3, 0, 2)]))
    assert r.proper and not r.acyclic
    assert sorted(r.witness.cycle) == [0, 1, 2, 3] and {r.witness.color_a, r.witness.color_b} == {1, 2}
    assert verify_coloring(complete(3), coloring([(0, 1, 1), (1, 2, 2), (0, 2, 3)])).ok
    r = verify_coloring(path(3), coloring([(0, 1, 1), (1, 2, 1)]))
    assert not r.proper and r.clash.vertex == 1
    with pytest.raises(IncompleteColoring):
        verify_coloring(path(3), coloring([(0, 1, 1)]))


def _all_cycles(g):
    """Every cycle as an edge list, by DFS from its smallest vertex."""
    out = []
    for s in range(g.n):
        stack = [(s, [s])]
        while stack:
            x, walk = stack.pop()
            for y in g.adj[x]:
                if y == s and len(walk) >= 3 and walk[1] < walk[-1]:
                    out.append([edge_id(walk[i], walk[(i + 1) % len(walk)]) for i in range(len(walk))])
                elif y > s and y not in walk:
                    stack.append((y, walk + [y]))
    return out


def test_verifier_matches_cycle_scan():
    rng = random.Random(1)
    bad = good = 0
    for _ in range(400):
        n = rng.randint(3, 8)
        g = build_graph(n, [e for e in combinations(range(n), 2) if rng.random() < 0.5])
        if not g.m:
            continue
        k = rng.randint(2, 5)
        colors = {}
        at = [set() for _ in range(n)]
        for e in g.sorted_edges():
            options = [c for c in range(k) if c not in at[e[0]] | at[e[1]]]
            colors[e] = rng.choice(options) if options else rng.randrange(k)
            at[e[0]].add(colors[e])
            at[e[1]].add(colors[e])
        c = EdgeColoring(colors)
        report = verify_coloring(g, c)
        proper = all(len({colors[e] for e in g.edges if v in e}) == g.degree(v) for v in range(n))
        assert report.proper == proper
        if proper:
            bichromatic = any(len({colors[e] for e in cyc}) <= 2 for cyc in _all_cycles(g))
            assert report.acyclic == (not bichromatic)
            bad += bichromatic
            good += not bichromatic
            if report.witness:
                w = report.witness.cycle
                ring = [edge_id(w[i], w[(i + 1) % len(w)]) for i in range(len(w))]
                assert {colors[e] for e in ring} <= {report.witness.color_a, report.witness.color_b}
    assert bad > 20 and good > 20


def test_closes_cycle_agrees_with_verifier():
    rng = random.Random(2)
    checked = 0
    for _ in range(300):
        n = rng.randint(4, 9)
        g = build_graph(n, [e for e in combinations(range(n), 2) if rng.random() < 0.5])
        edges = g.sorted_edges()
        if len(edges) < 2:
            continue
        rng.shuffle(edges)
        state = PartialColoring(n)
        for u, v in edges[:-1]:
            options = [c for c in range(4) if c not in state.at[u] and c not in state.at[v]]
            if options and (col := rng.choice(options)) is not None:
                if state.closes_cycle(u, v, col) is None:
                    state.assign(u, v, col)
        u, v = edges[-1]
        for col in range(5):
            if col in state.at[u] or col in state.at[v]:
                continue
            colors = dict(state.to_coloring().colors)
            colors[edge_id(u, v)] = col
            sub = build_graph(n, colors)
            assert verify_coloring(sub, EdgeColoring(colors)).ok == (state.closes_cycle(u, v, col) is None)
            checked += 1
    assert checked > 300


def test_coloring_json():
    c = coloring([(1, 0, 3), (1, 2, 4)])
    assert c.to_json() == {"edges": [[0, 1, 3], [1, 2, 4]]}
    assert coloring_from_json(c.to_json()) == c
    with pytest.raises(FormatError, match="edges"):
        coloring_from_json({"colors": []})
    with pytest.raises(FormatError, match=r"\[1\]"):
        coloring_from_json({"edges": [[0, 1, 2], [0, 1]]})


# -- lists -------------------------------------------------------------------------------


def test_uniform_lists():
    lists = uniform_lists(complete(5))
    assert lists.min_size() == 82 and len(lists.lists) == 10
    assert uniform_lists(build_graph(3, [])).lists == {}
    assert set(uniform_lists(cycle(4), 5).lists.values()) == {frozenset(range(5))}
    assert list_size_bound(4) == 82


def test_lists_from_json():
    g = path(3)
    assert lists_from_json({"k": 4}, g) == uniform_lists(g, 4)
    lists = lists_from_json({"lists": [[0, 1, [5, 6]], [2, 1, [7]]]}, g)
    assert lists[(1, 2)] == {7}
    with pytest.raises(FormatError):
        lists_from_json({"k": 0}, g)
    with pytest.raises(FormatError):
        lists_from_json({"lists": [[0, 1, [5]]]}, g)
    with pytest.raises(ValueError):
        ListAssignment({(0, 1): frozenset()})


# -- elimination and extension ----------------------------------------------------------


def test_elimination_examples():
    steps = elimination_order(complete(5))
    assert len(steps) == 10 and steps[0].kind == "C1"
    assert steps[0].context == Reducible("C1", 0, (1,)) and steps[0].edge == (0, 1)
    steps = elimination_order(cycle(4))
    assert [s.kind for s in steps] == [LOW_DEGREE] * 4
    assert [s.kind for s in elimination_order(path(2))] == [LOW_DEGREE]


def test_elimination_refuses_dense_graph():
    with pytest.raises(DensityRefusal) as info:
        elimination_order(complete(9))
    assert info.value.certificate.witness == tuple(range(9))
    # 8-regular: no configuration exists, which is what the certificate rules out
    with pytest.raises(LemmaViolation):
        elimination_order(complete(9), certify=False)


def test_extend_path_end():
    g = path(3)
    steps = elimination_order(g)
    state = PartialColoring(3)
    assert [s.edge for s in steps] == [(0, 1), (1, 2)]
    lists = ListAssignment({(0, 1): frozenset({4, 9}), (1, 2): frozenset({4})})
    results = [extend_coloring(state, s, lists) for s in reversed(steps)]
    assert all(r.route == "recipe" for r in results)
    assert state.to_coloring().colors == {(0, 1): 9, (1, 2): 4}


def test_k5_colors_with_82_lists():
    g = complete(5)
    c = color_graph(g)
    assert set(c.colors) == g.edges and verify_coloring(g, c).ok


def test_edgeless_graph():
    g = build_graph(3, [])
    assert color_graph(g, uniform_lists(g)).colors == {}


def test_c4_with_two_colors_fails():
    g = cycle(4)
    lists = ListAssignment({e: frozenset({1, 2}) for e in g.edges})
    with pytest.warns(ListTooSmall):
        with pytest.raises(ExtensionFailure) as info:
            color_graph(g, lists)
    report = info.value.report
    assert report["list"] == [1, 2] and report["list_bound"] == list_size_bound(2)
    assert json.loads(json.dumps(report)) == report


def test_c4_recipe_forbids_center_colors():
    # v = 0 with witnesses 1..6 colored 10..15; u = 7 is x7
    state = PartialColoring(20)
    for x, col in zip(range(1, 7), range(10, 16)):
        state.assign(0, x, col)
    for y, col in zip(range(8, 13), (10, 12, 13, 14, 15)):
        state.assign(7, y, col)  # u misses only 11 = c(v x2)
    state.assign(1, 13, 31)
    state.assign(2, 14, 30)
    step = EliminationStep(7, 0, Reducible("C4", 0, tuple(range(1, 7))), tuple(range(1, 7)), {})
    forbidden = _forbidden(state, step)
    assert set(range(10, 16)) <= forbidden
    assert 31 in forbidden and 30 not in forbidden
    state.assign(7, 15, 11)  # now every witness color is at u
    forbidden = _forbidden(state, step)
    assert {30, 31} <= forbidden


def test_c9_recolor_maneuver():
    # v = 0 center, u = 1 its 4-vertex witness with other neighbors 2, 3, 4;
    # w = 5 is a big neighbor of v, reached by color 1, and w also holds color 7
    state = PartialColoring(7)
    state.assign(0, 5, 1)
    state.assign(5, 6, 7)
    state.assign(1, 2, 1)
    state.assign(1, 3, 2)
    state.assign(1, 4, 3)
    degrees = {0: 1, 1: 3, 2: 1, 3: 1, 4: 1, 5: 25, 6: 1}
    step = EliminationStep(1, 0, Reducible("C9", 0, (1,)), (5,), degrees)
    lists = ListAssignment({(0, 1): frozenset({2, 7}), (1, 2): frozenset({1, 9})})
    result = extend_coloring(state, step, lists)
    assert result.route == "recolor"
    assert result.recolored == (((1, 2), 1, 9),)
    assert result.color == 7
    final = state.to_coloring()
    assert verify_coloring(build_graph(7, final.colors), final).ok


def test_forbidden_sets_stay_below_list_size():
    for inst in theorem_corpus(30, seed=4, max_n=90):
        g = inst.graph
        bound = list_size_bound(g.max_degree())
        lists = uniform_lists(g)
        state = PartialColoring(g.n)
        for step in reversed(elimination_order(g)):
            assert len(_forbidden(state, step)) < bound, (inst.name, step.kind)
            assert extend_coloring(state, step, lists).route == "recipe"


def test_debug_mode_rechecks_every_step():
    for inst in theorem_corpus(8, seed=6, max_n=50):
        c = color_graph(inst.graph, debug=True)
        assert verify_coloring(inst.graph, c).ok


def test_random_lists_of_full_size():
    rng = random.Random(8)
    for inst in theorem_corpus(10, seed=8, max_n=70):
        g = inst.graph
        k = list_size_bound(g.max_degree())
        pool = range(max(10 * g.max_degree(), 2 * k))
        lists = ListAssignment({e: frozenset(rng.sample(pool, k)) for e in g.sorted_edges()})
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            c = color_graph(g, lists)
        assert all(c.colors[e] in lists[e] for e in g.edges)
        assert verify_coloring(g, c).ok


def test_color_graph_is_deterministic():
    inst = next(theorem_corpus(1, seed=12, max_n=60))
    assert color_graph(inst.graph) == color_graph(inst.graph)


# -- exact oracle ------------------------------------------------------------------------

NAMED = {
    "K3": complete(3),
    "C4": cycle(4),
    "C5": cycle(5),
    "K1,4": star(4),
}


def test_chi_a_goldens():
    golden = json.loads(GOLDENS.read_text())
    for name, g in NAMED.items():
        res = chi_a_bruteforce(g)
        assert res.value == golden[name], name
        assert verify_coloring(g, res.coloring).ok
        assert res.coloring.num_colors() == res.value


def test_chi_a_more_values():
    assert chi_a_bruteforce(complete(4)).value == 5
    assert chi_a_bruteforce(path(4)).value == 2
    assert chi_a_bruteforce(build_graph(2, [])).value == 0
    assert chi_a_bruteforce(cycle(4), k_max=2).exceeded
    with pytest.raises(TooLarge):
        chi_a_bruteforce(complete(7))


def test_oracle_consistency():
    rng = random.Random(4)
    for _ in range(40):
        n = rng.randint(3, 7)
        g = build_graph(n, [e for e in combinations(range(n), 2) if rng.random() < 0.5])
        if g.m == 0 or g.m > 12:
            continue
        chi = chi_a_bruteforce(g).value
        assert chi <= list_size_bound(g.max_degree())
        for k in (chi - 1, chi, chi + 1):
            if k < 1:
                continue
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", ListTooSmall)
                try:
                    c = color_graph(g, uniform_lists(g, k))
                except ExtensionFailure:
                    continue
            assert k >= chi and verify_coloring(g, c).ok


def test_wheel_hub_colors():
    g = wheel_hub(24)
    c = color_graph(g)
    assert verify_coloring(g, c).ok
