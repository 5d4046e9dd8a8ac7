"""Interleaver graphs: two solid rings coupled by the permutation's matching.

The graph has 2n vertices: an upper and a lower copy of the index ring
0..n-1, each closed by the 0 to n-1 wrap edge (solid edges), plus one
dotted edge (upper, i) to (lower, pi(i)) per index.  Every cycle that is
not one of the two rings alternates solid runs with dotted crossings and
corresponds to a permutation cycle; its solid-edge count is that cycle's
summary distance.  Both the shortest such cycle and the minimum solid
count are computed exactly by per-dotted-edge searches.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Iterator

from .errors import ResourceLimitError, ValidationError
from .permutation import Permutation

UPPER = "u"
LOWER = "l"


class InterleaverGraph:
    """3-regular graph on 2n vertices encoding a permutation.

    Vertices are addressed as (chain, index) with chain "u" or "l"; the
    flat layout used internally maps (u, i) to i and (l, j) to n + j.
    """

    __slots__ = ("perm", "_adj")

    def __init__(self, perm: Permutation):
        if perm.n < 3:
            raise ValidationError(f"need block length at least 3, got {perm.n}")
        self.perm = perm
        n = perm.n
        adj: list[list[int]] = [[] for _ in range(2 * n)]
        for base in (0, n):
            for i in range(n):
                adj[base + i].append(base + (i + 1) % n)
                adj[base + i].append(base + (i - 1) % n)
        for i, v in enumerate(perm.table):
            adj[i].append(n + v)
            adj[n + v].append(i)
        self._adj = adj

    @property
    def n(self) -> int:
        return self.perm.n

    @property
    def num_vertices(self) -> int:
        return 2 * self.perm.n

    @property
    def num_edges(self) -> int:
        return 3 * self.perm.n

    def solid_edges(self) -> Iterator[tuple[tuple[str, int], tuple[str, int]]]:
        n = self.perm.n
        for chain in (UPPER, LOWER):
            for i in range(n):
                yield ((chain, i), (chain, (i + 1) % n))

    def dotted_edges(self) -> Iterator[tuple[tuple[str, int], tuple[str, int]]]:
        for i, v in enumerate(self.perm.table):
            yield ((UPPER, i), (LOWER, v))

    def __repr__(self) -> str:
        return f"InterleaverGraph(n={self.perm.n})"


def build_ig(perm: Permutation) -> InterleaverGraph:
    """Interleaver graph of any permutation (involution not required)."""
    return InterleaverGraph(perm)


def _is_dotted(n: int, u: int, v: int) -> bool:
    return (u < n) != (v < n)


def nonchain_girth(
    graph: InterleaverGraph, dotted_indices: Iterable[int] | None = None
) -> int:
    """Shortest cycle that uses at least one dotted edge.

    Every such cycle passes through some dotted edge (u, v), and the
    shortest one through that edge is 1 plus the shortest u-v path with the
    edge removed, so minimizing over dotted edges is exact.  The two chain
    rings never enter the minimum.  dotted_indices restricts the scan for
    callers exploiting a symmetry (one index per shift orbit).
    """
    n = graph.n
    adj = graph._adj
    best = 2 * n  # upper ring + one crossing pair is always beatable by this
    for i in dotted_indices if dotted_indices is not None else range(n):
        src = i
        dst = n + graph.perm.table[i]
        dist = [-1] * (2 * n)
        dist[src] = 0
        frontier = [src]
        found = -1
        while frontier and found < 0:
            nxt = []
            for u in frontier:
                du = dist[u]
                if du + 1 >= best:
                    break
                for w in adj[u]:
                    if u == src and w == dst:
                        continue  # the removed dotted edge
                    if dist[w] < 0:
                        dist[w] = du + 1
                        if w == dst:
                            found = du + 1
                            break
                        nxt.append(w)
                if found >= 0:
                    break
            frontier = nxt
        if found >= 0 and found + 1 < best:
            best = found + 1
            if best == 4:
                break  # dotted runs alternate with solid runs, so 4 is the floor
    return best


def summary_distance_exact(
    graph: InterleaverGraph, dotted_indices: Iterable[int] | None = None
) -> int:
    """Minimum solid-edge count over all cycles using a dotted edge.

    Per dotted edge (u, v), a deque-based 0-1 shortest path (dotted edges
    cost 0, solid edges cost 1) from u to v with the edge itself removed
    gives the best cycle through it; the overall minimum is the exact
    summary distance of the permutation.
    """
    n = graph.n
    adj = graph._adj
    best = n  # half of one ring plus a return leg is always beatable by this
    indices = dotted_indices if dotted_indices is not None else range(n)
    for i in indices:
        src = i
        dst = n + graph.perm.table[i]
        dist = [-1] * (2 * n)
        dist[src] = 0
        dq = deque([src])
        while dq:
            u = dq.popleft()
            du = dist[u]
            if du >= best:
                continue
            if u == dst:
                break
            for w in adj[u]:
                if u == src and w == dst:
                    continue
                cost = du + (0 if _is_dotted(n, u, w) else 1)
                if dist[w] < 0 or cost < dist[w]:
                    dist[w] = cost
                    if cost == du:
                        dq.appendleft(w)
                    else:
                        dq.append(w)
        if 0 <= dist[dst] < best:
            best = dist[dst]
            if best == 2:
                break  # two crossings need at least one solid edge per chain
    return best


def dsum_bounds(nonchain_girth_value: int) -> tuple[int, int]:
    """Sandwich for the summary distance given the non-chain girth g.

    Cycles split into solid and dotted edges with the dotted count between
    2 and half the length, so ceil(g/2) <= d_sum <= g - 2.
    """
    if nonchain_girth_value < 4:
        raise ValidationError(
            f"non-chain girth is at least 4, got {nonchain_girth_value}"
        )
    return ((nonchain_girth_value + 1) // 2, nonchain_girth_value - 2)


def min_solid_cycle_bruteforce(graph: InterleaverGraph, limit: int = 26) -> int:
    """Oracle: enumerate every simple cycle and take the minimum solid count.

    Discards the two all-solid chain rings.  Exponential; refuses graphs
    with more than `limit` vertices.
    """
    if graph.num_vertices > limit:
        raise ResourceLimitError(
            f"cycle enumeration limited to {limit} vertices, graph has {graph.num_vertices}"
        )
    import networkx as nx

    n = graph.n
    g = nx.Graph()
    g.add_nodes_from(range(2 * n))
    for u in range(2 * n):
        for v in graph._adj[u]:
            if u < v:
                g.add_edge(u, v)
    best = None
    for cycle in nx.simple_cycles(g):
        solid = 0
        dotted = 0
        for a, b in zip(cycle, cycle[1:] + cycle[:1]):
            if _is_dotted(n, a, b):
                dotted += 1
            else:
                solid += 1
        if dotted == 0:
            continue  # a chain ring
        if best is None or solid < best:
            best = solid
    if best is None:
        raise ValidationError("graph has no cycle through a dotted edge")
    return best


def write_ig_edge_list(graph: InterleaverGraph, path) -> None:
    """Edge list `u v solid|dotted` with flat ids (upper i -> i, lower j -> n+j)."""
    n = graph.n
    with open(path, "w", encoding="ascii") as fh:
        for base in (0, n):
            for i in range(n):
                fh.write(f"{base + i} {base + (i + 1) % n} solid\n")
        for i, v in enumerate(graph.perm.table):
            fh.write(f"{i} {n + v} dotted\n")
