import random
from fractions import Fraction

import pytest

from acyclic_choice.generators import bipartite_hubs, lemma_corpus, regular
from acyclic_choice.graph import build_graph, degree_profile
from acyclic_choice.structure import (
    LOW_DEGREE,
    LemmaViolation,
    PreconditionUnmet,
    Reducible,
    check_reducible,
    discharging_audit,
    find_reducible,
    scan_configurations,
    verify_lemma,
)
from strategies import complete, cycle


def wheel_hub(spokes: int):
    """Center 0 joined to a cycle 1..spokes plus a perfect matching on the rim."""
    half = spokes // 2
    pairs = [(0, i) for i in range(1, spokes + 1)]
    pairs += [(i, i % spokes + 1) for i in range(1, spokes + 1)]
    pairs += [(i, i + half) for i in range(1, half + 1)]
    if spokes % 2:
        pairs.append((2, spokes))  # rim vertex 2 ends with degree 5
    return build_graph(spokes + 1, pairs)


def test_find_examples():
    assert find_reducible(complete(5)) == Reducible("C1", 0, (1,))
    assert find_reducible(cycle(4)) == Reducible(LOW_DEGREE, 0)
    assert find_reducible(build_graph(3, [])) == Reducible(LOW_DEGREE, 0)


def test_c5_fixture():
    g = wheel_hub(20)
    prof = degree_profile(g)
    assert prof.degrees[0] == 20 and set(prof.degrees[1:]) == {4}
    assert g.m <= 4 * g.n - 1
    r = find_reducible(g)
    assert r == Reducible("C5", 0, tuple(range(1, 21)))
    assert check_reducible(g, r)


def test_c5_fixture_audit():
    audit = discharging_audit(wheel_hub(20))
    assert audit.initial[0] == 12
    assert len(audit.transfers) == 20 and all(x == 1 for _, _, x in audit.transfers)
    assert audit.final[0] == 12 - 20
    assert all(audit.final[v] == -4 + 1 for v in range(1, 21))


@pytest.mark.parametrize(
    "spokes, kind",
    [(20, "C5"), (22, "C5"), (23, "C6"), (25, "C6"), (26, "C7"), (28, "C7"), (29, "C8"), (31, "C8"), (32, "C9"), (60, "C9")],
)
def test_big_center_kinds(spokes, kind):
    g = wheel_hub(spokes)
    r = find_reducible(g)
    assert r.kind == kind and r.center == 0 and check_reducible(g, r)


@pytest.mark.parametrize("d, kind, need", [(4, "C1", 1), (5, "C2", 2), (6, "C3", 4), (7, "C4", 6)])
def test_small_center_kinds(d, kind, need):
    # vertex 0 of degree d: neighbors 1..need are low, the others sit in a K21
    low = list(range(1, 1 + need))
    high = list(range(1 + need, 1 + d))
    clique = high + list(range(1 + d, 1 + d + 21 - len(high)))
    pairs = [(0, x) for x in low + high]
    pairs += [(a, b) for i, a in enumerate(clique) for b in clique[i + 1 :]]
    g = build_graph(1 + d + 21 - len(high), pairs)
    deg = g.degrees()
    r = scan_configurations(g.adj, deg, [0])
    assert r == Reducible(kind, 0, tuple(low))
    assert check_reducible(g, r)
    deg[low[0]] = 25  # one low neighbor short
    assert scan_configurations(g.adj, deg, [0]) is None


def test_check_reducible_rejects_bad_witnesses():
    g = complete(5)
    assert not check_reducible(g, Reducible("C1", 0, (0,)))
    assert not check_reducible(g, Reducible("C2", 0, (1, 2)))
    assert not check_reducible(g, Reducible(LOW_DEGREE, 0))
    assert not check_reducible(g, Reducible("C1", 9, (1,)))


def test_audit_examples():
    audit = discharging_audit(complete(5))
    assert all(w == -4 for w in audit.final.values()) and not audit.transfers
    assert audit.total == -20
    g = regular(30, 8, 0)
    audit = discharging_audit(g)
    assert audit.total == 0 and not audit.transfers and not audit.negative()


def test_audit_json():
    obj = discharging_audit(wheel_hub(20)).to_json()
    assert obj["initial_total"] == obj["final_total"]
    assert obj["negative_vertices"] == [0] + list(range(1, 21))


def test_verify_lemma_examples():
    assert verify_lemma(complete(5)).kind == "C1"
    g = regular(50, 4, 1)
    assert g.m == 100 and verify_lemma(g).kind == "C1"
    with pytest.raises(PreconditionUnmet):
        verify_lemma(complete(9))
    with pytest.raises(PreconditionUnmet):
        verify_lemma(cycle(6))


def test_lemma_violation_carries_ledger(monkeypatch):
    import acyclic_choice.structure as structure

    monkeypatch.setattr(structure, "find_reducible", lambda g: None)
    with pytest.raises(LemmaViolation) as info:
        structure.verify_lemma(complete(5))
    assert info.value.report["audit"]["final_total"] == "-20/1"


def _nonnegative_when_free(g):
    if degree_profile(g).min_degree >= 4 and find_reducible(g) is None:
        audit = discharging_audit(g)
        assert not audit.negative(), audit.negative()
        assert g.m >= 4 * g.n
        return True
    return False


def test_nonnegativity_on_configuration_free_graphs():
    free = 0
    for seed in range(5):
        free += _nonnegative_when_free(regular(40, 8, seed))
        free += _nonnegative_when_free(regular(41 + seed % 2, 10, seed))
    for hubs, smalls in [(5, 40), (6, 33), (7, 60), (8, 21), (20, 20)]:
        free += _nonnegative_when_free(bipartite_hubs(hubs, smalls))
    assert free == 15


def test_nonnegativity_on_random_graphs():
    rng = random.Random(5)
    free = 0
    for _ in range(300):
        n = rng.randint(10, 40)
        p = rng.uniform(0.25, 0.9)
        g = build_graph(n, [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < p])
        free += _nonnegative_when_free(g)
    assert free > 50


def test_conservation_exact():
    for inst in lemma_corpus(40, seed=9, max_n=80):
        audit = discharging_audit(inst.graph)
        assert sum(audit.initial.values(), Fraction(0)) == audit.total
        r = verify_lemma(inst.graph)
        assert check_reducible(inst.graph, r)
