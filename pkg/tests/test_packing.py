"""Greedy packing, improving swaps and local search."""

import random

import pytest

from tricover import (
    Packing,
    enumerate_triangles,
    greedy_packing,
    improve_packing,
    local_search_packing,
    nu_exact,
    targeted_swap,
    verify_packing,
    verify_swap,
)
from tricover.generators import bowtie, complete_graph, gnp
from tricover.order2 import (
    build_chains,
    build_lend,
    check_demand_lemma,
    compute_demanding,
    compute_f_fix,
    initial_half_charge,
)
from tricover.structure import build_structure, check_structure


def test_greedy_k4_single_triangle():
    # any two K4 triangles share an edge
    assert len(greedy_packing(complete_graph(4), 0)) == 1
    assert len(greedy_packing(complete_graph(4), 9)) == 1


def test_greedy_bowtie_two_triangles():
    assert len(greedy_packing(bowtie(), 0)) == 2


def test_greedy_triangle_free_empty():
    g = gnp(8, 0.0, 1)
    assert len(greedy_packing(g, 0)) == 0


def test_greedy_deterministic_given_seed():
    g = gnp(10, 0.5, 2)
    assert greedy_packing(g, 5).triangles == greedy_packing(g, 5).triangles
    assert verify_packing(g, greedy_packing(g, 5))


def test_improve_bowtie_zero_swap():
    g = bowtie()
    p = Packing(g, [g.triangle(0, 1, 2)])
    cert = improve_packing(g, p, 5)
    assert cert is not None and cert.removed == ()
    assert cert.added == (g.triangle(2, 3, 4),)
    assert verify_swap(g, p, cert)


def test_improve_k4_already_optimal():
    g = complete_graph(4)
    p = Packing(g, [g.triangle(0, 1, 2)])
    assert improve_packing(g, p, 5) is None


def test_improve_k6_from_size_three():
    g = complete_graph(6)
    tris = enumerate_triangles(g)
    rng = random.Random(11)
    p = None
    while p is None or len(p) != 3:
        order = tris[:]
        rng.shuffle(order)
        chosen, used = [], set()
        for t in order:
            if len(chosen) == 3:
                break
            if not any(e in used for e in t.edge_ids):
                chosen.append(t)
                used.update(t.edge_ids)
        p = Packing(g, chosen)
    cert = improve_packing(g, p, 5)
    assert cert is not None and verify_swap(g, p, cert)
    assert len(p.with_swap(cert)) == 4 == nu_exact(g).value


def test_local_search_values():
    assert len(local_search_packing(complete_graph(6), 0, 5)) == 4
    assert len(local_search_packing(complete_graph(4), 0, 5)) == 1
    c5 = gnp(5, 0.0, 0)
    assert len(local_search_packing(c5, 0, 5)) == 0


def test_local_search_bracketed_by_greedy_and_exact():
    rng = random.Random(3)
    for _ in range(100):
        n = rng.randint(4, 10)
        g = gnp(n, rng.choice([0.3, 0.5, 0.7]), rng.randint(0, 10**6))
        seed = rng.randint(0, 100)
        gp = greedy_packing(g, seed)
        lp = local_search_packing(g, seed, 5)
        assert verify_packing(g, lp)
        assert len(gp) <= len(lp) <= nu_exact(g).value


def test_swap_certificates_add_exactly_one():
    rng = random.Random(17)
    for _ in range(20):
        g = gnp(rng.randint(5, 9), 0.6, rng.randint(0, 10**6))
        p = greedy_packing(g, rng.randint(1, 50))
        cert = improve_packing(g, p, 3)
        if cert is not None:
            assert verify_swap(g, p, cert)
            assert len(p.with_swap(cert)) == len(p) + 1


def test_targeted_swap_empty_focus():
    g = complete_graph(6)
    p = local_search_packing(g, 0, 5)
    assert targeted_swap(g, p, set(), 5) is None


def test_targeted_swap_on_locally_optimal_k6():
    g = complete_graph(6)
    p = local_search_packing(g, 0, 5)
    assert targeted_swap(g, p, set(range(g.m)), 5) is None


def test_targeted_swap_repairs_demand_violation():
    # fuzz-found: a greedy packing that passes the structural checks but
    # violates the demanding-triangle lemma; the witness edges localize
    # an improving swap
    g = gnp(7, 0.6, 4)
    p = greedy_packing(g, 4)
    s = build_structure(g, p)
    assert check_structure(s) == []
    cs = initial_half_charge(s)
    chains, cs = build_chains(s, build_lend(s), cs)
    cs = compute_f_fix(cs, chains)
    ds = compute_demanding(s, cs, chains)
    witness = check_demand_lemma(s, ds)
    assert witness is not None
    cert = targeted_swap(g, p, witness, 5)
    assert cert is not None and verify_swap(g, p, cert)


def test_local_search_terminates_within_edge_bound():
    g = gnp(12, 0.5, 8)
    p = local_search_packing(g, 1, 5)
    assert len(p) <= g.m // 3


def test_max_swap_must_be_positive():
    g = complete_graph(4)
    p = greedy_packing(g, 0)
    with pytest.raises(ValueError):
        improve_packing(g, p, 0)
