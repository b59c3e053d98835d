"""Exact brute-force baselines for small instances, plus rounding and
order composition.

All three solvers are branch-and-bound searches designed for desk-scale
graphs (a few hundred triangles at most).  Values and witnesses are
exact; no floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .charges import ChargeAssignment
from .errors import (
    InstanceTooLargeError,
    MissingInputError,
    NotACoverError,
    NotThirdIntegralError,
)
from .graph import Graph, Triangle, enumerate_triangles

DEFAULT_TRIANGLE_CAP = 200


@dataclass
class OracleResult:
    value: Fraction
    witness: object
    nodes_explored: int


def _triangles_capped(g: Graph, cap: int) -> list[Triangle]:
    tris = enumerate_triangles(g)
    if len(tris) > cap:
        raise InstanceTooLargeError(f"{len(tris)} triangles exceeds cap {cap}")
    return tris


def nu_exact(g: Graph, cap: int = DEFAULT_TRIANGLE_CAP) -> OracleResult:
    """Maximum number of pairwise edge-disjoint triangles, exactly."""
    tris = _triangles_capped(g, cap)
    masks = [sum(1 << e for e in t.edge_ids) for t in tris]
    nodes = 0

    best: list[int] = []
    chosen: list[int] = []

    def dfs(candidates: list[int], used: int) -> None:
        nonlocal nodes, best
        nodes += 1
        if len(chosen) + len(candidates) <= len(best):
            return
        if not candidates:
            if len(chosen) > len(best):
                best = chosen[:]
            return
        head, rest = candidates[0], candidates[1:]
        # include head
        chosen.append(head)
        dfs([j for j in rest if masks[j] & (used | masks[head]) == 0], used | masks[head])
        chosen.pop()
        # exclude head
        dfs(rest, used)

    dfs(list(range(len(tris))), 0)
    return OracleResult(Fraction(len(best)), [tris[j] for j in best], nodes)


def tau_exact(g: Graph, cap: int = DEFAULT_TRIANGLE_CAP) -> OracleResult:
    """Minimum edge set meeting every triangle, exactly.

    Branches on the three edges of an uncovered triangle; previously
    tried edges of the same triangle are banned in later branches so each
    cover is enumerated once.
    """
    tris = _triangles_capped(g, cap)
    nodes = 0

    # greedy incumbent: repeatedly take the edge in most uncovered triangles
    cover: set[int] = set()
    uncovered = list(tris)
    while uncovered:
        counts: dict[int, int] = {}
        for t in uncovered:
            for e in t.edge_ids:
                counts[e] = counts.get(e, 0) + 1
        e_best = max(sorted(counts), key=lambda e: counts[e])
        cover.add(e_best)
        uncovered = [t for t in uncovered if e_best not in t.edge_ids]
    best: set[int] = set(cover)

    def lower_bound(covered_by: set[int], banned: frozenset[int]) -> int | None:
        """Greedy edge-disjoint uncovered triangles; None if infeasible."""
        used: set[int] = set()
        count = 0
        for t in tris:
            if any(e in covered_by for e in t.edge_ids):
                continue
            if all(e in banned for e in t.edge_ids):
                return None
            if not any(e in used for e in t.edge_ids):
                used.update(t.edge_ids)
                count += 1
        return count

    def dfs(cover_now: set[int], banned: frozenset[int]) -> None:
        nonlocal nodes, best
        nodes += 1
        lb = lower_bound(cover_now, banned)
        if lb is None or len(cover_now) + lb >= len(best):
            return
        target = next(
            (t for t in tris if not any(e in cover_now for e in t.edge_ids)), None
        )
        if target is None:
            best = set(cover_now)
            return
        tried: set[int] = set()
        for e in target.edge_ids:
            if e in banned:
                continue
            dfs(cover_now | {e}, banned | frozenset(tried))
            tried.add(e)

    dfs(set(), frozenset())
    return OracleResult(Fraction(len(best)), sorted(best), nodes)


def _simplex_min(
    rows: list[list[Fraction]], cost: list[Fraction], basis: list[int]
) -> tuple[Fraction, list[Fraction]]:
    """Bland-rule tableau simplex for min c.x, rows = [A | b], x >= 0.

    The caller supplies a feasible starting basis (slack columns).
    Returns the optimal objective value and the final reduced-cost row.
    """
    m = len(rows)
    ncols = len(rows[0]) - 1
    # reduced cost row for the starting basis (slack costs are zero)
    z = cost[:] + [Fraction(0)]
    for i, bi in enumerate(basis):
        if cost[bi]:
            f = cost[bi]
            z = [zj - f * aj for zj, aj in zip(z, rows[i] + [Fraction(0)])]
    while True:
        enter = next((j for j in range(ncols) if z[j] < 0), None)
        if enter is None:
            break
        leave, best_ratio = None, None
        for i in range(m):
            if rows[i][enter] > 0:
                ratio = rows[i][-1] / rows[i][enter]
                if best_ratio is None or ratio < best_ratio or (
                    ratio == best_ratio and basis[i] < basis[leave]
                ):
                    leave, best_ratio = i, ratio
        if leave is None:
            raise ArithmeticError("unbounded LP")
        piv = rows[leave][enter]
        rows[leave] = [v / piv for v in rows[leave]]
        for i in range(m):
            if i != leave and rows[i][enter]:
                f = rows[i][enter]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[leave])]
        if z[enter]:
            f = z[enter]
            z = [a - f * b for a, b in zip(z, rows[leave] + [Fraction(0)])]
        basis[leave] = enter
    value = sum(cost[basis[i]] * rows[i][-1] for i in range(m))
    return value, z


def tau_star_lp_exact(g: Graph, cap: int = DEFAULT_TRIANGLE_CAP) -> OracleResult:
    """The LP optimum over all fractional covers, exactly.

    Solved through the dual (maximum fractional triangle packing), whose
    all-slack basis is feasible, so no phase-1 is needed.  The witness is
    an optimal primal cover, read off the final reduced costs and checked
    by weak duality: it is feasible and its value meets the packing bound.
    """
    tris = _triangles_capped(g, cap)
    if not tris:
        return OracleResult(Fraction(0), {}, 0)
    m = g.m
    nv = len(tris)
    rows = [[Fraction(0)] * (nv + m + 1) for _ in range(m)]
    for j, t in enumerate(tris):
        for e in t.edge_ids:
            rows[e][j] = Fraction(1)
    for i in range(m):
        rows[i][nv + i] = Fraction(1)
        rows[i][-1] = Fraction(1)
    cost = [Fraction(-1)] * nv + [Fraction(0)] * m
    basis = list(range(nv, nv + m))
    neg_value, z = _simplex_min(rows, cost, basis)
    value = -neg_value
    cover = {e: z[nv + e] for e in range(m) if z[nv + e]}
    assert sum(cover.values(), Fraction(0)) == value
    for t in tris:
        assert sum(cover.get(e, Fraction(0)) for e in t.edge_ids) >= 1
    return OracleResult(value, cover, 0)


def tau_star_k_exact(
    g: Graph,
    k: int,
    cap: int = DEFAULT_TRIANGLE_CAP,
    warm_start: ChargeAssignment | None = None,
) -> OracleResult:
    """Minimum total of a (1/k)-integral assignment hitting every triangle.

    Works in numerator units: y_e in {0..k}, every triangle needs
    sum >= k units.  Branches by fixing the final value of one edge of a
    deficient triangle; the lower bound adds the deficiencies of a greedy
    edge-disjoint family of deficient triangles.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    tris = _triangles_capped(g, cap)
    nodes = 0
    nt = len(tris)
    m = g.m
    tri_edges = [t.edge_ids for t in tris]

    # incumbent: warm start if given, else an integral cover at value k
    if warm_start is not None and warm_start.order == k:
        best_y = [warm_start.numerators.get(e, 0) for e in range(m)]
        best_units = sum(best_y)
    else:
        cover = set(tau_exact(g, cap).witness)
        best_y = [k if e in cover else 0 for e in range(m)]
        best_units = k * len(cover)

    # the LP optimum bounds every node from below globally; when its
    # primal witness is already (1/k)-integral it solves the instance
    lp_res = tau_star_lp_exact(g, cap)
    lp = lp_res.value * k
    lp_floor = -((-lp.numerator) // lp.denominator)  # ceil in units
    scaled = {e: v * k for e, v in lp_res.witness.items()}
    if all(v.denominator == 1 for v in scaled.values()):
        witness = ChargeAssignment(k, {e: int(v) for e, v in scaled.items() if v})
        return OracleResult(lp_res.value, witness, 1)

    y = [0] * m
    frozen = bytearray(m)
    deficit = [k] * nt  # k - current sum over the triangle's edges
    edge_used = [0] * m  # generation stamps for the disjoint-triangle bound
    gen = 0

    def raise_edge(e: int, delta: int) -> None:
        y[e] += delta
        for ti in eligible_tris[e]:
            deficit[ti] -= delta

    eligible_tris: list[list[int]] = [[] for _ in range(m)]
    for ti, es in enumerate(tri_edges):
        for e in es:
            eligible_tris[e].append(ti)

    def propagate(trail: list[tuple[int, int]]) -> int | None:
        """Forced raises; returns added units or None when stuck."""
        added = 0
        changed = True
        while changed:
            changed = False
            for ti in range(nt):
                d = deficit[ti]
                if d <= 0:
                    continue
                free = [e for e in tri_edges[ti] if not frozen[e]]
                if not free:
                    return None
                if len(free) == 1:
                    e = free[0]
                    if y[e] + d > k:
                        return None
                    raise_edge(e, d)
                    trail.append((e, d))
                    added += d
                    changed = True
                elif sum(k - y[e] for e in free) == d:
                    for e in free:
                        delta = k - y[e]
                        if delta:
                            raise_edge(e, delta)
                            trail.append((e, delta))
                            added += delta
                    changed = True
        return added

    def analyze():
        """(lower bound in units, per-edge deficient counts, target), or None."""
        nonlocal gen
        gen += 1
        units = 0
        total_deficiency = 0
        hot = [0] * m
        target, target_key = None, None
        for ti in range(nt):
            d = deficit[ti]
            if d <= 0:
                continue
            total_deficiency += d
            room = 0
            free = 0
            for e in tri_edges[ti]:
                if not frozen[e]:
                    room += k - y[e]
                    hot[e] += 1
                    free += 1
            if room < d:
                return None
            key = (free, -d, ti)
            if target_key is None or key < target_key:
                target, target_key = ti, key
            es = tri_edges[ti]
            if edge_used[es[0]] != gen and edge_used[es[1]] != gen and edge_used[es[2]] != gen:
                edge_used[es[0]] = edge_used[es[1]] = edge_used[es[2]] = gen
                units += d
        if not total_deficiency:
            return 0, hot, None
        # fractional bound: one unit on an edge settles at most its count
        # of deficient triangles, so spend capacity on the busiest first
        rem = total_deficiency
        frac = 0
        for e in sorted((e for e in range(m) if hot[e]), key=lambda e: -hot[e]):
            capacity = k - y[e]
            if capacity * hot[e] < rem:
                frac += capacity
                rem -= capacity * hot[e]
            else:
                frac += -(-rem // hot[e])
                rem = 0
                break
        if rem > 0:
            return None
        return max(units, frac), hot, target

    def dfs(units: int) -> None:
        nonlocal nodes, best_units, best_y
        nodes += 1
        if best_units <= lp_floor:
            return  # incumbent already matches the LP bound
        trail: list[tuple[int, int]] = []
        added = propagate(trail)
        try:
            if added is None:
                return
            units += added
            if units >= best_units:
                return
            info = analyze()
            if info is None:
                return
            lb, hot, ti = info
            if max(units + lb, lp_floor) >= best_units:
                return
            if ti is None:
                best_units = units
                best_y = y[:]
                return
            open_edges = [e for e in tri_edges[ti] if not frozen[e]]
            e = max(open_edges, key=lambda e: (hot[e], -e))
            frozen[e] = 1
            # final value of e stays as-is
            dfs(units)
            # or is raised to v
            base = y[e]
            for v in range(base + 1, k + 1):
                raise_edge(e, v - y[e])
                dfs(units + v - base)
            if y[e] != base:
                raise_edge(e, base - y[e])
            frozen[e] = 0
        finally:
            for ed, delta in reversed(trail):
                raise_edge(ed, -delta)

    dfs(0)
    witness = ChargeAssignment(k, {e: v for e, v in enumerate(best_y) if v})
    return OracleResult(Fraction(best_units, k), witness, nodes)


def _greedy_max_cut(n: int, edges: list[tuple[int, int]]) -> list[int]:
    """Two-sides cut with at least half the edges crossing.

    Sequential placement guarantees the half bound; a single improvement
    pass can only raise the cut.
    """
    adj: dict[int, list[int]] = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    side = [0] * n

    def gain_of_flip(v: int) -> int:
        same = sum(1 for w in adj.get(v, ()) if side[w] == side[v])
        return same - (len(adj.get(v, ()))) + same  # same - cross

    placed: set[int] = set()
    for v in range(n):
        cross0 = sum(1 for w in adj.get(v, ()) if w in placed and side[w] != 0)
        cross1 = sum(1 for w in adj.get(v, ()) if w in placed and side[w] != 1)
        side[v] = 1 if cross1 > cross0 else 0
        placed.add(v)
    for v in range(n):
        if gain_of_flip(v) > 0:
            side[v] = 1 - side[v]
    return side


def round_third_integral(g: Graph, f: ChargeAssignment) -> list[int]:
    """Turn a (1/3)-integral cover into an integral cover of size <= 1.5 total.

    Keeps every edge at weight >= 2/3, then removes a bipartizing half of
    the remaining 1/3-edges; what stays uncut hits every leftover
    triangle.
    """
    if f.order != 3 or any(not (0 <= v <= 3) for v in f.numerators.values()):
        raise NotThirdIntegralError("assignment is not a valid 1/3-integral vector")
    tris = enumerate_triangles(g)
    for t in tris:
        if f.triangle_value(t) < 1:
            raise NotACoverError(f"triangle {t.vertices} not covered")

    heavy = {e for e, v in f.numerators.items() if v >= 2}
    thirds = sorted(e for e, v in f.numerators.items() if v == 1)
    side = _greedy_max_cut(g.n, [g.edges[e] for e in thirds])
    uncut = [e for e in thirds if side[g.edges[e][0]] == side[g.edges[e][1]]]
    assert 2 * len(uncut) <= len(thirds)
    result = sorted(heavy | set(uncut))

    covered = set(result)
    for t in tris:
        if not any(e in covered for e in t.edge_ids):
            raise AssertionError(f"rounded set misses triangle {t.vertices}")
    return result


def compose_order_k(
    f2: ChargeAssignment | None, f3: ChargeAssignment | None, k: int
) -> ChargeAssignment:
    """k-multi-transversal from order-2 and order-3 covers.

    Even k uses k/2 copies of the order-2 multiset; odd k > 3 adds one
    order-3 copy to (k-3)/2 order-2 copies; k = 3 passes f3 through.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if k == 3:
        if f3 is None:
            raise MissingInputError("k=3 needs an order-3 cover")
        return ChargeAssignment(3, dict(f3.numerators))
    if k % 2 == 0:
        if f2 is None:
            raise MissingInputError("even k needs an order-2 cover")
        q = k // 2
        return ChargeAssignment(k, {e: q * v for e, v in f2.numerators.items() if v})
    if f2 is None or f3 is None:
        raise MissingInputError("odd k > 3 needs both order-2 and order-3 covers")
    q = (k - 3) // 2
    nums: dict[int, int] = {}
    for e, v in f2.numerators.items():
        nums[e] = nums.get(e, 0) + q * v
    for e, v in f3.numerators.items():
        nums[e] = nums.get(e, 0) + v
    return ChargeAssignment(k, {e: v for e, v in nums.items() if v})
