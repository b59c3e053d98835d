"""Triangle packings: greedy seeding and bounded improving-swap local search.

A swap certificate replaces r packed triangles by r+1 pairwise
edge-disjoint ones, witnessing that the packing was not maximum.  The
search enumerates removal sets that are connected under vertex sharing;
a minimal improving swap always has that form because any added triangle
bridging two removed ones shares a vertex with both.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .graph import Graph, Triangle, enumerate_triangles


@dataclass(frozen=True)
class SwapCertificate:
    removed: tuple[Triangle, ...]
    added: tuple[Triangle, ...]


class Packing:
    """A set of pairwise edge-disjoint triangles."""

    def __init__(self, g: Graph, triangles: list[Triangle]):
        self.g = g
        self.triangles: tuple[Triangle, ...] = tuple(sorted(set(triangles)))
        used: set[int] = set()
        for t in self.triangles:
            for e in t.edge_ids:
                if e in used:
                    raise ValueError(f"edge {e} used twice in packing")
                used.add(e)
        self.used_edges: frozenset[int] = frozenset(used)

    def __len__(self) -> int:
        return len(self.triangles)

    def __contains__(self, t: Triangle) -> bool:
        return t in set(self.triangles)

    def uses(self, eid: int) -> bool:
        return eid in self.used_edges

    def with_swap(self, cert: SwapCertificate) -> "Packing":
        kept = [t for t in self.triangles if t not in set(cert.removed)]
        return Packing(self.g, kept + list(cert.added))


def verify_packing(g: Graph, p: Packing) -> bool:
    """True iff every triangle exists in g and no edge is used twice."""
    seen: set[int] = set()
    for t in p.triangles:
        a, b, c = t.vertices
        if not g.is_triangle(a, b, c):
            return False
        if g.triangle(a, b, c) != t:
            return False
        for e in t.edge_ids:
            if e in seen:
                return False
            seen.add(e)
    return seen == set(p.used_edges)


def verify_swap(g: Graph, p: Packing, cert: SwapCertificate) -> bool:
    """True iff applying cert yields a valid packing larger by exactly one."""
    if len(cert.added) != len(cert.removed) + 1:
        return False
    if any(t not in p for t in cert.removed):
        return False
    try:
        q = p.with_swap(cert)
    except ValueError:
        return False
    return verify_packing(g, q) and len(q) == len(p) + 1


def greedy_packing(g: Graph, order_seed: int = 0) -> Packing:
    """Maximal packing from a greedy pass over all triangles.

    Seed 0 keeps the canonical triangle order; any other seed is a
    deterministic shuffle.
    """
    tris = enumerate_triangles(g)
    if order_seed != 0:
        rng = random.Random(order_seed)
        rng.shuffle(tris)
    used: set[int] = set()
    chosen: list[Triangle] = []
    for t in tris:
        if not any(e in used for e in t.edge_ids):
            chosen.append(t)
            used.update(t.edge_ids)
    return Packing(g, chosen)


def _connected_subsets(nodes: list[Triangle], nbrs: dict[Triangle, set[Triangle]], size: int):
    """Connected size-`size` subsets of the vertex-sharing graph on `nodes`.

    Each subset is produced once: grown from its smallest member, the
    frontier extended only with larger triangles, and every frontier
    member either taken now or excluded from the rest of this root's
    search tree.
    """
    for i, root in enumerate(nodes):
        allowed = set(nodes[i + 1 :])

        def grow(current: tuple[Triangle, ...], frontier: frozenset, excluded: frozenset):
            if len(current) == size:
                yield current
                return
            ex = set(excluded)
            for t in sorted(frontier - excluded):
                nxt = (frontier | (nbrs[t] & allowed)) - set(current) - {t}
                yield from grow(current + (t,), frozenset(nxt), frozenset(ex))
                ex.add(t)

        yield from grow((root,), frozenset(nbrs[root] & allowed), frozenset())


def _disjoint_selection(pool: list[Triangle], need: int) -> list[Triangle] | None:
    """Find `need` pairwise edge-disjoint triangles in pool, or None."""
    chosen: list[Triangle] = []
    used: set[int] = set()

    def dfs(idx: int) -> bool:
        if len(chosen) == need:
            return True
        if len(pool) - idx < need - len(chosen):
            return False
        for j in range(idx, len(pool)):
            t = pool[j]
            if any(e in used for e in t.edge_ids):
                continue
            chosen.append(t)
            used.update(t.edge_ids)
            if dfs(j + 1):
                return True
            chosen.pop()
            used.difference_update(t.edge_ids)
        return False

    return chosen if dfs(0) else None


def _find_swap(
    g: Graph,
    p: Packing,
    max_swap: int,
    eligible: list[Triangle] | None = None,
) -> SwapCertificate | None:
    all_tris = enumerate_triangles(g)
    packed = set(p.triangles)
    free = [t for t in all_tris if not any(p.uses(e) for e in t.edge_ids)]
    if free:
        return SwapCertificate(removed=(), added=(free[0],))

    candidates = list(p.triangles) if eligible is None else sorted(eligible)
    nbrs: dict[Triangle, set[Triangle]] = {t: set() for t in candidates}
    for i, a in enumerate(candidates):
        va = set(a.vertices)
        for b in candidates[i + 1 :]:
            if va & set(b.vertices):
                nbrs[a].add(b)
                nbrs[b].add(a)

    nonpacked = [t for t in all_tris if t not in packed]
    for r in range(1, max_swap + 1):
        for removal in _connected_subsets(candidates, nbrs, r):
            freed = set()
            for t in removal:
                freed.update(t.edge_ids)
            pool = [
                t
                for t in nonpacked
                if all(e in freed or not p.uses(e) for e in t.edge_ids)
            ]
            if len(pool) <= r:
                continue
            found = _disjoint_selection(pool, r + 1)
            if found is not None:
                return SwapCertificate(removed=removal, added=tuple(found))
    return None


def improve_packing(g: Graph, p: Packing, max_swap: int = 5) -> SwapCertificate | None:
    """One improving swap of size <= max_swap in the connected neighborhood, or None."""
    if max_swap < 1:
        raise ValueError("max_swap must be >= 1")
    return _find_swap(g, p, max_swap)


def targeted_swap(
    g: Graph, p: Packing, focus_edges: set[int], max_swap: int = 5
) -> SwapCertificate | None:
    """Improving swap whose removals lie within 2 hops (edge-adjacency) of focus_edges."""
    if not focus_edges:
        return None
    verts0 = {v for e in focus_edges for v in g.edges[e]}
    edges1 = {i for i, (u, v) in enumerate(g.edges) if u in verts0 or v in verts0}
    verts1 = {v for e in edges1 for v in g.edges[e]}
    eligible = [
        t
        for t in p.triangles
        if any(g.edges[e][0] in verts1 or g.edges[e][1] in verts1 for e in t.edge_ids)
    ]
    return _find_swap(g, p, max_swap, eligible=eligible)


def local_search_packing(g: Graph, seed: int = 0, max_swap: int = 5) -> Packing:
    """Greedy packing improved until no swap of size <= max_swap is found."""
    p = greedy_packing(g, seed)
    while True:
        cert = improve_packing(g, p, max_swap)
        if cert is None:
            return p
        p = p.with_swap(cert)
