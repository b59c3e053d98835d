"""Immutable simple graphs, triangle enumeration and edge-list text I/O.

Vertices are ``0..n-1``.  Edges get dense ids ``0..m-1`` in input order
after canonicalizing each pair to ``(min, max)``, so a graph built twice
from the same edge list is bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DuplicateEdgeError, SelfLoopError, VertexOutOfRangeError


@dataclass(frozen=True, order=True)
class Triangle:
    """Canonical triangle: strictly increasing vertex triple plus its edge ids."""

    vertices: tuple[int, int, int]
    edge_ids: tuple[int, int, int] = field(compare=False)

    def __repr__(self) -> str:
        return "T{}".format(self.vertices)


class Graph:
    """Undirected simple graph with stable vertex and edge identifiers."""

    def __init__(self, n: int, edges: list[tuple[int, int]]):
        self.n = n
        self.edges: list[tuple[int, int]] = []
        self.edge_index: dict[tuple[int, int], int] = {}
        adj_sets: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n) or not (0 <= v < n):
                raise VertexOutOfRangeError(f"edge ({u},{v}) outside 0..{n - 1}")
            if u == v:
                raise SelfLoopError(f"self-loop at vertex {u}")
            a, b = (u, v) if u < v else (v, u)
            if (a, b) in self.edge_index:
                raise DuplicateEdgeError(f"duplicate edge ({a},{b})")
            self.edge_index[(a, b)] = len(self.edges)
            self.edges.append((a, b))
            adj_sets[a].add(b)
            adj_sets[b].add(a)
        self.m = len(self.edges)
        self.adjacency: list[list[int]] = [sorted(s) for s in adj_sets]
        self._adj_sets = adj_sets

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj_sets[u] if 0 <= u < self.n else False

    def edge_id(self, u: int, v: int) -> int:
        """Edge id of {u,v}; KeyError if the edge does not exist."""
        return self.edge_index[(u, v) if u < v else (v, u)]

    def triangle(self, a: int, b: int, c: int) -> Triangle:
        """The canonical Triangle on {a,b,c}; all three edges must exist."""
        x, y, z = sorted((a, b, c))
        return Triangle(
            (x, y, z),
            (self.edge_id(x, y), self.edge_id(x, z), self.edge_id(y, z)),
        )

    def is_triangle(self, a: int, b: int, c: int) -> bool:
        return (
            len({a, b, c}) == 3
            and self.has_edge(a, b)
            and self.has_edge(b, c)
            and self.has_edge(a, c)
        )

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def build_graph(n: int, edge_list: list[tuple[int, int]]) -> Graph:
    """Validate and canonicalize an edge list into a Graph.

    Raises SelfLoopError, DuplicateEdgeError or VertexOutOfRangeError on
    malformed input; duplicates are an error, never silently merged.
    """
    return Graph(n, list(edge_list))


def enumerate_triangles(g: Graph) -> list[Triangle]:
    """All triangles of ``g`` exactly once, in lexicographic triple order.

    Neighbor intersection on sorted adjacency with u < v < w, so each
    triangle is produced from its smallest vertex only.
    """
    out: list[Triangle] = []
    for u in range(g.n):
        nbrs = g.adjacency[u]
        for i, v in enumerate(nbrs):
            if v < u:
                continue
            for w in nbrs[i + 1 :]:
                if g.has_edge(v, w):
                    out.append(g.triangle(u, v, w))
    return out


def triangles_on_edge(g: Graph, eid: int) -> list[Triangle]:
    """All triangles containing edge ``eid``, canonical order."""
    u, v = g.edges[eid]
    common = sorted(g._adj_sets[u] & g._adj_sets[v])
    return [g.triangle(u, v, w) for w in common]


def parse_edge_list(text: str) -> Graph:
    """Parse the edge-list text format.

    First meaningful line is ``n m``, followed by m lines ``u v``
    (0-based).  Blank lines and lines starting with '#' are ignored.
    """
    rows: list[list[str]] = []
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        rows.append(stripped.split())
    if not rows:
        raise VertexOutOfRangeError("empty edge-list input")
    header = rows[0]
    if len(header) != 2:
        raise VertexOutOfRangeError(f"bad header {' '.join(header)!r}, expected 'n m'")
    n, m = int(header[0]), int(header[1])
    if len(rows) - 1 != m:
        raise VertexOutOfRangeError(f"header claims {m} edges, found {len(rows) - 1}")
    edges = [(int(r[0]), int(r[1])) for r in rows[1:]]
    return build_graph(n, edges)


def format_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def read_edge_list(path: str) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_edge_list(fh.read())


def write_edge_list(g: Graph, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_edge_list(g))
