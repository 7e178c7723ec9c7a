"""Complete graphs, canonical cycles, and exact cycle enumeration.

Vertices are labeled 1..n.  A cycle is stored in canonical form: the
smallest vertex first, followed by its smaller neighbor, so each cycle of
the underlying graph appears exactly once regardless of rotation or
direction of traversal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import FrozenSet, List, Tuple

Edge = Tuple[int, int]


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 1..vertex_count."""

    vertex_count: int
    edges: FrozenSet[Edge] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.vertex_count < 1:
            raise ValueError("vertex_count must be positive")
        for u, v in self.edges:
            if u == v:
                raise ValueError("self-loop at vertex %d" % u)
            if not (0 < u < v <= self.vertex_count):
                raise ValueError("edge (%d, %d) out of range or unordered" % (u, v))

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def neighbors(self, u: int) -> List[int]:
        out = []
        for a, b in self.edges:
            if a == u:
                out.append(b)
            elif b == u:
                out.append(a)
        return sorted(out)


Cycle = Tuple[int, ...]


def complete_graph(n: int) -> Graph:
    """The complete graph K_n on vertices 1..n."""
    if n < 1:
        raise ValueError("n must be positive")
    edges = frozenset((u, v) for u in range(1, n) for v in range(u + 1, n + 1))
    return Graph(n, edges)


def choose_n(g: Graph) -> int:
    """Smallest odd n >= max(3, |V(g)|), so g is a minor of K_n."""
    n = max(3, g.vertex_count)
    return n if n % 2 == 1 else n + 1


def canonical_cycle(vertices: Tuple[int, ...]) -> Cycle:
    """Rotate and possibly reflect a vertex sequence into canonical form."""
    verts = tuple(vertices)
    if len(verts) < 3 or len(set(verts)) != len(verts):
        raise ValueError("a cycle needs >= 3 distinct vertices")
    k = verts.index(min(verts))
    rot = verts[k:] + verts[:k]
    if rot[1] > rot[-1]:
        rot = (rot[0],) + tuple(reversed(rot[1:]))
    return rot


def enumerate_cycles(g: Graph) -> List[Cycle]:
    """Every simple cycle of g exactly once, canonical, in sorted order.

    Depth-first search rooted at each vertex in turn; only vertices larger
    than the root may appear later in the path, and the closing step keeps
    a cycle only when the path's second vertex is smaller than its last,
    which picks one of the two traversal directions.
    """
    adj = {u: g.neighbors(u) for u in range(1, g.vertex_count + 1)}
    cycles: List[Cycle] = []

    def extend(path: List[int], used: set) -> None:
        root, last = path[0], path[-1]
        for nxt in adj[last]:
            if nxt == root and len(path) >= 3 and path[1] < path[-1]:
                cycles.append(tuple(path))
            elif nxt > root and nxt not in used:
                path.append(nxt)
                used.add(nxt)
                extend(path, used)
                used.discard(nxt)
                path.pop()

    for root in range(1, g.vertex_count + 1):
        extend([root], {root})
    cycles.sort()
    return cycles


def cycle_edges(c: Cycle) -> List[Edge]:
    """The cycle's edges as sorted vertex pairs, in traversal order."""
    out = []
    for i, u in enumerate(c):
        v = c[(i + 1) % len(c)]
        out.append((min(u, v), max(u, v)))
    return out
