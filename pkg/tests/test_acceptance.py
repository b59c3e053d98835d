"""Acceptance suite.

One test per criterion; each prints a single PASS line when it holds.
All arithmetic is exact rational, so checks are equalities and exact
inequalities, no tolerances.
"""

import time
from fractions import Fraction
from itertools import combinations

from tricover import (
    build_structure,
    check_structure,
    cover,
    enumerate_triangles,
    local_search_packing,
    nu_exact,
    round_third_integral,
    tau_exact,
    tau_star_k_exact,
    verify_cover,
)
from tricover.generators import bowtie, complete_graph, glued_k4, gnp, lend_chain
from tricover.order2 import (
    HALF,
    build_chains,
    build_lend,
    check_demand_lemma,
    compute_demanding,
    compute_f_fix,
    initial_half_charge,
)

F = Fraction


def suite_instances():
    """The desk-scale suite: complete graphs, gadgets and 100 random graphs."""
    instances = [(f"K{n}", complete_graph(n)) for n in (4, 5, 6, 7, 8)]
    instances.append(("bowtie", bowtie()))
    instances += [(f"lend_chain({L})", lend_chain(L)) for L in (1, 2, 3, 4)]
    instances += [(f"glued_k4({L})", glued_k4(L)) for L in (1, 2, 3, 4)]
    ps = (0.3, 0.5, 0.7)
    for i in range(100):
        n = 8 + (i % 5)
        p = ps[i % 3]
        instances.append((f"gnp({n},{p},{i})", gnp(n, p, i)))
    return instances


def random_instances(count=200):
    ps = (0.3, 0.5, 0.7)
    out = []
    for i in range(count):
        n = 4 + (i % 7)
        out.append(gnp(n, ps[i % 3], 1000 + i))
    return out


def ceil_frac(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def test_criterion_1_complete_graph_formulas():
    t0 = time.time()
    for n in (4, 6):
        expected = n * (n - 2) // 4
        start = time.time()
        assert tau_exact(complete_graph(n)).value == expected
        assert tau_star_k_exact(complete_graph(n), 2).value == expected
        assert time.time() - start < 10
    print(f"ACCEPTANCE 1 PASS: tau(K4)=tau*2(K4)=2, tau(K6)=tau*2(K6)=6 "
          f"({time.time() - t0:.1f}s)")


def test_criterion_2_k6_order_gap():
    t0 = time.time()
    ts3 = tau_star_k_exact(complete_graph(6), 3).value
    ts2 = tau_star_k_exact(complete_graph(6), 2).value
    assert ts3 == 5 and ts2 == 6
    assert ts3 <= F(5, 6) * ts2
    elapsed = time.time() - t0
    assert elapsed < 60
    print(f"ACCEPTANCE 2 PASS: tau*3(K6)=5 <= (5/6)*tau*2(K6)=5 ({elapsed:.1f}s)")


def test_criterion_3_main_theorem_desk_scale():
    t0 = time.time()
    runs = 0
    for name, g in suite_instances():
        for order in (2, 3, 6):
            r = cover(g, order)  # raises RepairExhaustedError on failure
            runs += 1
            assert r.report.covered, (name, order)
            assert r.report.integrality_ok, (name, order)
            assert r.assignment.total() <= 2 * len(r.packing), (name, order)
    elapsed = time.time() - t0
    assert elapsed < 300
    print(f"ACCEPTANCE 3 PASS: {runs} verified covers, zero repair exhaustion "
          f"({elapsed:.1f}s)")


def test_criterion_4_charging_totals():
    t0 = time.time()
    checked = 0
    for name, g in suite_instances()[:40]:
        r6 = cover(g, 6)
        assert all(v == 2 for v in r6.assignment.per_triangle.values()), name
        assert r6.assignment.total() <= 2 * len(r6.packing)

        r3 = cover(g, 3)
        s = build_structure(g, r3.packing)
        for psi, spent in r3.assignment.per_triangle.items():
            info = s.info[psi]
            if info.type == 1 and len(info.cl_sin) > 1:
                assert F(5, 3) <= spent <= 2, name
            else:
                assert spent == 2, name

        r2 = cover(g, 2)
        s2 = build_structure(g, r2.packing)
        for psi, spent in r2.assignment.per_triangle.items():
            if s2.info[psi].type == 0:
                assert spent in (F(3, 2), F(2)), name  # 1.5 plus one optional half
            else:
                assert spent <= 2, name
        checked += 1
    print(f"ACCEPTANCE 4 PASS: per-triangle ledgers on {checked} instances "
          f"({time.time() - t0:.1f}s)")


def test_criterion_5_oracle_sandwich():
    t0 = time.time()
    for g in random_instances(200):
        nu = nu_exact(g).value
        tau = tau_exact(g).value
        assert nu <= tau <= 3 * nu
        for order in (2, 3, 6):
            tsk = tau_star_k_exact(g, order).value
            assert tsk <= tau
            r = cover(g, order)
            assert tsk <= r.assignment.total() <= 2 * nu or nu == 0
    print(f"ACCEPTANCE 5 PASS: sandwich on 200 random graphs n<=10 "
          f"({time.time() - t0:.1f}s)")


def test_criterion_6_rounding():
    t0 = time.time()
    for name, g in suite_instances():
        r3 = cover(g, 3)
        rounded = round_third_integral(g, r3.assignment)
        covered = set(rounded)
        for t in enumerate_triangles(g):
            assert any(e in covered for e in t.edge_ids), name
        bound = ceil_frac(F(3, 2) * r3.assignment.total())
        assert len(rounded) <= bound, name
        assert len(rounded) >= tau_exact(g).value, name
    print(f"ACCEPTANCE 6 PASS: 1.5-rounding verified on the full suite "
          f"({time.time() - t0:.1f}s)")


def test_criterion_7_structure_postconditions():
    t0 = time.time()
    for name, g in suite_instances():
        p = local_search_packing(g, 0, 5)
        s = build_structure(g, p)
        assert check_structure(s) == [], name
        cs = initial_half_charge(s)
        chains, cs = build_chains(s, build_lend(s), cs)
        cs = compute_f_fix(cs, chains)
        ds = compute_demanding(s, cs, chains)
        assert check_demand_lemma(s, ds) is None, name
    print(f"ACCEPTANCE 7 PASS: structure and demand checks clean on the suite "
          f"({time.time() - t0:.1f}s)")


def test_criterion_8_k4_half_integral_fact():
    g = complete_graph(4)
    tris = enumerate_triangles(g)
    matchings = [
        pair
        for pair in combinations(range(6), 2)
        if set(g.edges[pair[0]]) | set(g.edges[pair[1]]) == {0, 1, 2, 3}
    ]
    assert len(matchings) == 3
    for matching in matchings:
        weights = {e: HALF for e in range(6) if e not in matching}
        assert all(
            sum(weights.get(e, F(0)) for e in t.edge_ids) >= 1 for t in tris
        )
    print("ACCEPTANCE 8 PASS: every C4 half-charge covers all four K4 triangles")


def test_criterion_9_chain_construction():
    t0 = time.time()
    for L in (1, 2, 3, 4):
        g = lend_chain(L)
        p = local_search_packing(g, 0, 5)
        s = build_structure(g, p)
        cs = initial_half_charge(s)
        chains, cs = build_chains(s, build_lend(s), cs)
        real = [c for c in chains.chains if not c.zero_sized]
        assert len(real) == 1 and real[0].size == L
        chain = real[0]
        halves = chain.half_nonsolution_edges()
        assert len(halves) == L + 1
        assert all(cs.f(e) == HALF for e in halves)
        for link in chain.links:
            assert cs.f(link.gain) == HALF
        for flip in (False, True):
            r = cover(g, 2, flip_tails=flip)
            assert verify_cover(g, r.assignment, len(r.packing)).ok
    print(f"ACCEPTANCE 9 PASS: size-L chains with the half-edge pattern, "
          f"tail renaming invariant ({time.time() - t0:.1f}s)")
