"""3-regular graphs with an explicit Hamiltonian ring and one chord per vertex.

Vertices 0..n-1 sit on a ring (i adjacent to i+-1 mod n); the chord table
is a fixed-point-free involution supplying the third edge at every vertex.
Fixing the ring up front sidesteps Hamiltonian-cycle search entirely, which
is the point of the construction: girth is then the only quality to chase.
"""

from __future__ import annotations

import math
from typing import Iterable, Iterator, Sequence

from .errors import ValidationError


class CubicGraph:
    """Ring plus chord-involution graph; every vertex has degree exactly 3."""

    __slots__ = ("chord",)

    def __init__(self, chords: Iterable[int]):
        chord = tuple(int(c) for c in chords)
        n = len(chord)
        if n < 4:
            raise ValidationError(f"need at least 4 vertices, got {n}")
        if n % 2:
            raise ValidationError(f"vertex count must be even, got {n}")
        for i, c in enumerate(chord):
            if not 0 <= c < n:
                raise ValidationError(f"chord target {c} at vertex {i} is outside 0..{n - 1}")
            if c == i:
                raise ValidationError(f"chord at vertex {i} is a self-loop")
            if chord[c] != i:
                raise ValidationError(
                    f"chord table is not an involution at vertex {i}: {i}->{c}->{chord[c]}"
                )
            if c == (i + 1) % n or c == (i - 1) % n:
                raise ValidationError(f"chord at vertex {i} parallels a ring edge")
        self.chord = chord

    @property
    def n(self) -> int:
        return len(self.chord)

    def neighbors(self, i: int) -> tuple[int, int, int]:
        n = len(self.chord)
        return ((i - 1) % n, (i + 1) % n, self.chord[i])

    def edges(self) -> Iterator[tuple[int, int]]:
        """All edges, ring edges first, then chords, each once."""
        n = len(self.chord)
        for i in range(n):
            yield (i, (i + 1) % n)
        for i in range(n):
            if i < self.chord[i]:
                yield (i, self.chord[i])

    def __eq__(self, other) -> bool:
        return isinstance(other, CubicGraph) and self.chord == other.chord

    def __hash__(self) -> int:
        return hash(self.chord)

    def __repr__(self) -> str:
        return f"CubicGraph(n={self.n})"


def from_chord_involution(n: int, chords: Sequence[int]) -> CubicGraph:
    """Validate a chord table of length n and build the graph."""
    if len(chords) != n:
        raise ValidationError(f"chord table has {len(chords)} entries, expected {n}")
    return CubicGraph(chords)


def _shortest_cycle_through(graph: CubicGraph, root: int, cap: int) -> int:
    """Length of the shortest cycle found by BFS from root, pruned at cap.

    Any non-tree edge (u, w) closes a cycle of length at most
    dist(u) + dist(w) + 1, and that bound is tight for some root on a
    shortest cycle, so minimizing over all roots is exact.
    """
    n = graph.n
    dist = [-1] * n
    parent = [-1] * n
    dist[root] = 0
    frontier = [root]
    best = cap
    while frontier:
        nxt = []
        for u in frontier:
            du = dist[u]
            if 2 * du >= best:
                return best
            for w in graph.neighbors(u):
                if dist[w] < 0:
                    dist[w] = du + 1
                    parent[w] = u
                    nxt.append(w)
                elif w != parent[u]:
                    cand = du + dist[w] + 1
                    if cand < best:
                        best = cand
        frontier = nxt
    return best


def girth_bfs(graph: CubicGraph, roots: Iterable[int] | None = None) -> int:
    """Exact girth via truncated BFS from each root.

    The default root set is every vertex.  Callers that know a
    vertex-transitive symmetry (spoke-vector graphs are invariant under
    index shifts by the vector size) may pass one root per orbit.
    """
    best = graph.n  # the ring is always a cycle
    for r in roots if roots is not None else range(graph.n):
        best = _shortest_cycle_through(graph, r, best)
    return best


def girth_upper_bound(vertex_count: int) -> float:
    """Moore-type girth ceiling 2*log2(vertex_count + 2) - 2 for cubic graphs."""
    if vertex_count < 4:
        raise ValidationError(f"vertex count must be at least 4, got {vertex_count}")
    return 2.0 * math.log2(vertex_count + 2) - 2.0


def write_edge_list(graph: CubicGraph, path) -> None:
    """Plain `u v` lines, ring edges first, chords after."""
    with open(path, "w", encoding="ascii") as fh:
        for u, v in graph.edges():
            fh.write(f"{u} {v}\n")
