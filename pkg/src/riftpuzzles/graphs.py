"""Grid graphs, digraphs, and exhaustive Hamiltonicity oracles.

A grid graph is an induced subgraph of the integer lattice: two vertices are
adjacent exactly when their Euclidean distance is 1.  The oracles here are
deliberately brute force; they referee the puzzle reductions on small
instances and are not meant to scale.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator

Vertex = tuple[int, int]

ORTHO_STEPS: tuple[Vertex, ...] = ((1, 0), (-1, 0), (0, 1), (0, -1))

# subset-DP oracle refuses anything bigger than this
DIRECTED_SEARCH_LIMIT = 16

ENUM_BOX_LIMIT = 12


class InstanceTooLarge(ValueError):
    """An exact oracle was asked to search beyond its documented limit."""


@dataclass(frozen=True)
class GridGraph:
    """Finite set of lattice points with implicit unit-distance adjacency."""

    vertices: frozenset[Vertex]

    def __post_init__(self) -> None:
        if not isinstance(self.vertices, frozenset):
            object.__setattr__(self, "vertices", frozenset(self.vertices))
        if not self.vertices:
            raise ValueError("grid graph must have at least one vertex")

    def __len__(self) -> int:
        return len(self.vertices)

    def neighbors(self, v: Vertex) -> list[Vertex]:
        x, y = v
        return [(x + dx, y + dy) for dx, dy in ORTHO_STEPS if (x + dx, y + dy) in self.vertices]

    def degree(self, v: Vertex) -> int:
        return len(self.neighbors(v))

    def is_connected(self) -> bool:
        return _connected(self.vertices)

    def sorted_vertices(self) -> list[Vertex]:
        return sorted(self.vertices)


def _connected(cells: frozenset[Vertex] | set[Vertex]) -> bool:
    if not cells:
        return False
    start = next(iter(cells))
    seen = {start}
    queue = deque([start])
    while queue:
        x, y = queue.popleft()
        for dx, dy in ORTHO_STEPS:
            nxt = (x + dx, y + dy)
            if nxt in cells and nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return len(seen) == len(cells)


def grid_edges(g: GridGraph) -> set[tuple[Vertex, Vertex]]:
    """Unordered adjacency pairs, each reported once as (min, max)."""
    edges = set()
    for x, y in g.vertices:
        for nxt in ((x + 1, y), (x, y + 1)):
            if nxt in g.vertices:
                edges.add(((x, y), nxt))
    return edges


def has_ham_cycle_grid(g: GridGraph) -> bool:
    """Exhaustive Hamiltonian-cycle test; graphs on fewer than 4 vertices fail."""
    n = len(g)
    if n < 4:
        return False
    if any(g.degree(v) < 2 for v in g.vertices):
        return False
    start = min(g.vertices)
    path = [start]
    visited = {start}

    def extend() -> bool:
        if len(path) == n:
            return start in g.neighbors(path[-1])
        if not _remainder_connected(g, visited, path[-1], start):
            return False
        for nxt in g.neighbors(path[-1]):
            if nxt not in visited:
                visited.add(nxt)
                path.append(nxt)
                if extend():
                    return True
                path.pop()
                visited.remove(nxt)
        return False

    return extend()


def has_ham_path_grid(g: GridGraph) -> bool:
    """Exhaustive Hamiltonian-path test; a single vertex counts as a path."""
    n = len(g)
    if n == 1:
        return True
    if not g.is_connected():
        return False
    for start in g.sorted_vertices():
        path = [start]
        visited = {start}
        if _ham_path_from(g, path, visited, n):
            return True
    return False


def _ham_path_from(g: GridGraph, path: list[Vertex], visited: set[Vertex], n: int) -> bool:
    if len(path) == n:
        return True
    if not _remainder_connected(g, visited, path[-1], None):
        return False
    for nxt in g.neighbors(path[-1]):
        if nxt not in visited:
            visited.add(nxt)
            path.append(nxt)
            if _ham_path_from(g, path, visited, n):
                return True
            path.pop()
            visited.remove(nxt)
    return False


def _remainder_connected(
    g: GridGraph, visited: set[Vertex], current: Vertex, must_reach: Vertex | None
) -> bool:
    # every unvisited vertex (and the cycle anchor, if any) must still be
    # reachable from the path head through unvisited territory
    remaining = g.vertices - visited
    if not remaining:
        return True
    allowed = set(remaining)
    allowed.add(current)
    if must_reach is not None:
        allowed.add(must_reach)
    seen = {current}
    queue = deque([current])
    while queue:
        x, y = queue.popleft()
        for dx, dy in ORTHO_STEPS:
            nxt = (x + dx, y + dy)
            if nxt in allowed and nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    if must_reach is not None and must_reach not in seen:
        return False
    return remaining <= seen


def enumerate_grid_graphs(box_w: int, box_h: int, max_vertices: int) -> Iterator[GridGraph]:
    """Yield every connected induced grid graph inside a box, each exactly once.

    Cells live at (0..box_w-1, 0..box_h-1).  Enumeration order is by vertex
    count, then lexicographic, so the stream is deterministic.
    """
    if box_w < 1 or box_h < 1:
        raise ValueError("box dimensions must be positive")
    if box_w * box_h > ENUM_BOX_LIMIT:
        raise InstanceTooLarge(f"box {box_w}x{box_h} exceeds the {ENUM_BOX_LIMIT}-cell enumeration limit")
    cells = [(x, y) for x in range(box_w) for y in range(box_h)]
    cells.sort()
    top = min(max_vertices, len(cells))
    for size in range(1, top + 1):
        for combo in combinations(cells, size):
            if _connected(set(combo)):
                yield GridGraph(frozenset(combo))


@dataclass(frozen=True)
class Digraph:
    """Directed graph on vertices 0..vertex_count-1 with explicit arcs."""

    vertex_count: int
    arcs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.vertex_count < 1:
            raise ValueError("digraph must have at least one vertex")
        object.__setattr__(self, "arcs", tuple((int(s), int(t)) for s, t in self.arcs))
        seen = set()
        for s, t in self.arcs:
            if not (0 <= s < self.vertex_count and 0 <= t < self.vertex_count):
                raise ValueError(f"arc ({s},{t}) outside vertex range")
            if s == t:
                raise ValueError(f"self-loop at vertex {s}")
            if (s, t) in seen:
                raise ValueError(f"duplicate arc ({s},{t})")
            seen.add((s, t))

    def out_neighbors(self, v: int) -> list[int]:
        return [t for s, t in self.arcs if s == v]

    @property
    def outdeg12(self) -> bool:
        """True when every vertex has outdegree 1 or 2."""
        degs = [0] * self.vertex_count
        for s, _ in self.arcs:
            degs[s] += 1
        return all(d in (1, 2) for d in degs)


def has_directed_ham_path(d: Digraph) -> bool:
    """Subset-DP Hamiltonian path oracle (any endpoints).

    Trusted reference: exact for vertex_count <= DIRECTED_SEARCH_LIMIT,
    refuses larger instances.
    """
    n = d.vertex_count
    if n > DIRECTED_SEARCH_LIMIT:
        raise InstanceTooLarge(f"{n} vertices exceeds the directed search limit {DIRECTED_SEARCH_LIMIT}")
    if n == 1:
        return True
    succ_mask = [0] * n
    for s, t in d.arcs:
        succ_mask[s] |= 1 << t
    full = (1 << n) - 1
    # dp[mask] = bitmask of vertices that can end a path visiting exactly `mask`
    dp = [0] * (full + 1)
    for v in range(n):
        dp[1 << v] = 1 << v
    for mask in range(1, full + 1):
        ends = dp[mask]
        if not ends:
            continue
        v = 0
        while ends:
            if ends & 1:
                fresh = succ_mask[v] & ~mask
                w = 0
                m = fresh
                while m:
                    if m & 1:
                        dp[mask | (1 << w)] |= 1 << w
                    m >>= 1
                    w += 1
            ends >>= 1
            v += 1
    return dp[full] != 0


def symmetric_orientation(g: GridGraph) -> Digraph:
    """Both orientations of every grid edge, vertices indexed in sorted order."""
    order = g.sorted_vertices()
    index = {v: i for i, v in enumerate(order)}
    arcs = []
    for a, b in sorted(grid_edges(g)):
        arcs.append((index[a], index[b]))
        arcs.append((index[b], index[a]))
    return Digraph(len(order), tuple(arcs))


def gen_random_digraph(v: int, seed: int, min_out: int = 1, max_out: int = 2) -> Digraph:
    """Seeded random digraph with per-vertex outdegree in [min_out, max_out]."""
    if v < 2:
        raise ValueError("need at least 2 vertices")
    rng = random.Random(seed)
    arcs = []
    for s in range(v):
        cap = min(max_out, v - 1)
        lo = min(min_out, cap)
        deg = rng.randint(lo, cap)
        targets = rng.sample([t for t in range(v) if t != s], deg)
        for t in sorted(targets):
            arcs.append((s, t))
    return Digraph(v, tuple(arcs))
