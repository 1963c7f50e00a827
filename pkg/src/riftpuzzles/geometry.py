"""Geometry of tile regions: pinch corners, geodesics, and distance oracles.

A region is a union of closed unit squares ("tiles") on the integer lattice.
Movement happens anywhere inside the closed union, except that pinch corners
(lattice points where exactly two tiles meet diagonally with no orthogonal
neighbor shared by both) are impassable points.

Three distance notions live here:

* ``grid_distance``    -- orthogonal tile steps (BFS between tiles),
* ``euclidean_geodesic`` -- true shortest path length, via a visibility graph
  over the region's reflex corners,
* ``fine_grid_distance`` -- 8-connected shortest path on a 1/k sublattice,
  an upper distance oracle used to sanity-check the geodesics.

Unreachable queries return ``math.inf``.  Comparisons use an absolute
epsilon of 1e-9.
"""

from __future__ import annotations

import heapq
import math
import random
from collections import deque
from dataclasses import dataclass

Tile = tuple[int, int]
Point = tuple[float, float]

EPS = 1e-9


class PointOutsideRegion(ValueError):
    """A geodesic query point does not lie in the closed region."""


@dataclass(frozen=True)
class TileRegion:
    """Union of closed unit squares; tile (x, y) spans [x,x+1] x [y,y+1]."""

    tiles: frozenset[Tile]

    def __post_init__(self) -> None:
        if not isinstance(self.tiles, frozenset):
            object.__setattr__(self, "tiles", frozenset(self.tiles))
        if not self.tiles:
            raise ValueError("region must contain at least one tile")

    def __contains__(self, tile: Tile) -> bool:
        return tile in self.tiles

    def __len__(self) -> int:
        return len(self.tiles)


def tile_center(tile: Tile) -> Point:
    return (tile[0] + 0.5, tile[1] + 0.5)


def pinch_corners(region: TileRegion) -> frozenset[Tile]:
    """Lattice corners where exactly two tiles meet only diagonally."""
    tiles = region.tiles
    pinches = set()
    corners = set()
    for x, y in tiles:
        corners.update(((x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)))
    for cx, cy in corners:
        sw = (cx - 1, cy - 1) in tiles
        se = (cx, cy - 1) in tiles
        nw = (cx - 1, cy) in tiles
        ne = (cx, cy) in tiles
        if (sw and ne and not se and not nw) or (se and nw and not sw and not ne):
            pinches.add((cx, cy))
    return frozenset(pinches)


def _reflex_corners(region: TileRegion) -> list[Tile]:
    """Corners with exactly three surrounding tiles: the only bend points."""
    tiles = region.tiles
    corners = set()
    for x, y in tiles:
        corners.update(((x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)))
    out = []
    for cx, cy in sorted(corners):
        count = sum(
            1
            for cell in ((cx - 1, cy - 1), (cx, cy - 1), (cx - 1, cy), (cx, cy))
            if cell in tiles
        )
        if count == 3:
            out.append((cx, cy))
    return out


def _cells_containing(p: Point) -> list[Tile]:
    """Up to four lattice cells whose closed square contains the point."""
    x, y = p
    xs = []
    fx = math.floor(x)
    if abs(x - round(x)) < EPS:
        xs = [round(x) - 1, round(x)]
    else:
        xs = [fx]
    if abs(y - round(y)) < EPS:
        ys = [round(y) - 1, round(y)]
    else:
        ys = [math.floor(y)]
    return [(cx, cy) for cx in xs for cy in ys]


def region_contains_point(region: TileRegion, p: Point) -> bool:
    return any(cell in region.tiles for cell in _cells_containing(p))


def _point_admissible(region: TileRegion, pinches: frozenset[Tile], p: Point) -> bool:
    x, y = p
    if abs(x - round(x)) < EPS and abs(y - round(y)) < EPS:
        if (round(x), round(y)) in pinches:
            return False
    return region_contains_point(region, p)


def segment_admissible(
    region: TileRegion, pinches: frozenset[Tile], p: Point, q: Point
) -> bool:
    """True when the closed segment p-q stays in the region and avoids pinches.

    The segment is cut at every crossing of an integer grid line; each open
    piece lies inside a single cell column/row, so a midpoint test is exact
    up to epsilon.
    """
    px, py = p
    qx, qy = q
    if not _point_admissible(region, pinches, p):
        return False
    if not _point_admissible(region, pinches, q):
        return False
    dx = qx - px
    dy = qy - py
    length = math.hypot(dx, dy)
    if length < EPS:
        return True
    ts = [0.0, 1.0]
    if abs(dx) > EPS:
        lo, hi = sorted((px, qx))
        for gx in range(math.ceil(lo - EPS), math.floor(hi + EPS) + 1):
            t = (gx - px) / dx
            if EPS < t < 1 - EPS:
                ts.append(t)
    if abs(dy) > EPS:
        lo, hi = sorted((py, qy))
        for gy in range(math.ceil(lo - EPS), math.floor(hi + EPS) + 1):
            t = (gy - py) / dy
            if EPS < t < 1 - EPS:
                ts.append(t)
    ts.sort()
    t_eps = EPS / max(length, 1.0)
    for i in range(len(ts) - 1):
        t1, t2 = ts[i], ts[i + 1]
        if t2 - t1 <= t_eps:
            continue
        tm = (t1 + t2) / 2
        if not region_contains_point(region, (px + tm * dx, py + tm * dy)):
            return False
    # crossing points themselves: wall points need a neighboring tile, lattice
    # points must not be pinches
    for t in ts[1:-1]:
        if not _point_admissible(region, pinches, (px + t * dx, py + t * dy)):
            return False
    return True


def euclidean_geodesic_matrix(region: TileRegion, points: list[Point]) -> list[list[float]]:
    """Pairwise geodesic distances between query points.

    Builds one visibility graph over the query points plus the region's
    reflex corners and runs Dijkstra from each query point.
    """
    pinches = pinch_corners(region)
    for p in points:
        if not region_contains_point(region, p):
            raise PointOutsideRegion(f"point {p} is outside the region")
    corners = [(float(cx), float(cy)) for cx, cy in _reflex_corners(region)]
    nodes: list[Point] = list(points) + corners
    n = len(nodes)
    adj: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if segment_admissible(region, pinches, nodes[i], nodes[j]):
                w = math.hypot(nodes[i][0] - nodes[j][0], nodes[i][1] - nodes[j][1])
                adj[i].append((j, w))
                adj[j].append((i, w))
    k = len(points)
    result = [[math.inf] * k for _ in range(k)]
    for src in range(k):
        dist = [math.inf] * n
        dist[src] = 0.0
        heap = [(0.0, src)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist[u] + EPS:
                continue
            for v, w in adj[u]:
                nd = d + w
                if nd < dist[v] - EPS:
                    dist[v] = nd
                    heapq.heappush(heap, (nd, v))
        for dst in range(k):
            result[src][dst] = dist[dst]
        result[src][src] = 0.0
    return result


def euclidean_geodesic(region: TileRegion, p: Point, q: Point) -> float:
    """Length of the shortest admissible path from p to q (inf if none)."""
    return euclidean_geodesic_matrix(region, [p, q])[0][1]


def grid_distance(region: TileRegion, a: Tile, b: Tile) -> float:
    """Orthogonal tile steps between two tiles of the region (inf if cut off)."""
    if a not in region.tiles or b not in region.tiles:
        raise PointOutsideRegion(f"tile {a if a not in region.tiles else b} not in region")
    if a == b:
        return 0
    dist = {a: 0}
    queue = deque([a])
    while queue:
        x, y = queue.popleft()
        d = dist[(x, y)]
        for nxt in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
            if nxt in region.tiles and nxt not in dist:
                if nxt == b:
                    return d + 1
                dist[nxt] = d + 1
                queue.append(nxt)
    return math.inf


def grid_distance_matrix(region: TileRegion, tiles: list[Tile]) -> list[list[float]]:
    """Pairwise orthogonal-step distances between the given tiles."""
    for t in tiles:
        if t not in region.tiles:
            raise PointOutsideRegion(f"tile {t} not in region")
    n = len(tiles)
    result = [[math.inf] * n for _ in range(n)]
    index = {}
    for i, t in enumerate(tiles):
        index.setdefault(t, []).append(i)
    for i, src in enumerate(tiles):
        dist = {src: 0}
        queue = deque([src])
        while queue:
            x, y = queue.popleft()
            d = dist[(x, y)]
            for nxt in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
                if nxt in region.tiles and nxt not in dist:
                    dist[nxt] = d + 1
                    queue.append(nxt)
        for j, dst in enumerate(tiles):
            if dst in dist:
                result[i][j] = dist[dst]
    return result


def fine_grid_distance(region: TileRegion, p: Point, q: Point, k: int) -> float:
    """Shortest 8-connected path on the 1/k sublattice of the region.

    Nodes are lattice multiples of 1/k; pinch corners are removed.  Every
    move's interior stays inside a single cell row/column (k divides the
    tile size), so admissibility is exact integer arithmetic.  Any returned
    length is the length of a real admissible path, hence an upper bound on
    the Euclidean geodesic.  Both endpoints must lie on the sublattice.
    """
    if k < 2:
        raise ValueError("subdivision k must be at least 2")
    pinches = pinch_corners(region)

    def to_node(pt: Point) -> tuple[int, int]:
        i = round(pt[0] * k)
        j = round(pt[1] * k)
        if abs(pt[0] * k - i) > 1e-6 or abs(pt[1] * k - j) > 1e-6:
            raise ValueError(f"point {pt} is not on the 1/{k} sublattice")
        return (i, j)

    tiles = region.tiles

    def node_ok(i: int, j: int) -> bool:
        if i % k == 0 and j % k == 0 and (i // k, j // k) in pinches:
            return False
        if i % k == 0:
            xs = (i // k - 1, i // k)
        else:
            xs = (i // k,)
        if j % k == 0:
            ys = (j // k - 1, j // k)
        else:
            ys = (j // k,)
        return any((cx, cy) in tiles for cx in xs for cy in ys)

    def h_step_ok(i: int, j: int) -> bool:
        # interior of the step from (i,j) to (i+1,j)
        cx = i // k
        if j % k == 0:
            return (cx, j // k) in tiles or (cx, j // k - 1) in tiles
        return (cx, j // k) in tiles

    def v_step_ok(i: int, j: int) -> bool:
        cy = j // k
        if i % k == 0:
            return (i // k, cy) in tiles or (i // k - 1, cy) in tiles
        return (i // k, cy) in tiles

    src = to_node(p)
    dst = to_node(q)
    if not node_ok(*src) or not node_ok(*dst):
        return math.inf
    if src == dst:
        return 0.0

    sqrt2 = math.sqrt(2.0)
    dist = {src: 0.0}
    heap = [(0.0, src)]
    while heap:
        d, (i, j) = heapq.heappop(heap)
        if (i, j) == dst:
            return d / k
        if d > dist[(i, j)] + EPS:
            continue
        moves = []
        if h_step_ok(i, j):
            moves.append((i + 1, j, 1.0))
        if h_step_ok(i - 1, j):
            moves.append((i - 1, j, 1.0))
        if v_step_ok(i, j):
            moves.append((i, j + 1, 1.0))
        if v_step_ok(i, j - 1):
            moves.append((i, j - 1, 1.0))
        # a diagonal step's interior lies strictly inside one cell
        if (i // k, j // k) in tiles:
            moves.append((i + 1, j + 1, sqrt2))
        if ((i - 1) // k, (j - 1) // k) in tiles:
            moves.append((i - 1, j - 1, sqrt2))
        if ((i - 1) // k, j // k) in tiles:
            moves.append((i - 1, j + 1, sqrt2))
        if (i // k, (j - 1) // k) in tiles:
            moves.append((i + 1, j - 1, sqrt2))
        for ni, nj, w in moves:
            if not node_ok(ni, nj):
                continue
            nd = d + w
            if nd < dist.get((ni, nj), math.inf) - EPS:
                dist[(ni, nj)] = nd
                heapq.heappush(heap, (nd, (ni, nj)))
    return math.inf


def gen_random_region(seed: int, box_w: int, box_h: int, n_tiles: int) -> TileRegion:
    """Seeded random connected region grown inside a box."""
    rng = random.Random(seed)
    if n_tiles < 1:
        raise ValueError("need at least one tile")
    start = (rng.randrange(box_w), rng.randrange(box_h))
    tiles = {start}
    frontier = [start]
    while len(tiles) < n_tiles and frontier:
        x, y = frontier[rng.randrange(len(frontier))]
        options = [
            (x + dx, y + dy)
            for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1))
            if 0 <= x + dx < box_w and 0 <= y + dy < box_h and (x + dx, y + dy) not in tiles
        ]
        if not options:
            frontier.remove((x, y))
            continue
        nxt = options[rng.randrange(len(options))]
        tiles.add(nxt)
        frontier.append(nxt)
    return TileRegion(frozenset(tiles))
