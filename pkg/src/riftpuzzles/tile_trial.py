"""The step-limit tile puzzle: boards, path verification, exact solving,
and the reduction from grid-graph Hamiltonian cycles.

A board is a set of tiles with step capacities 1 or 2.  The player walks
orthogonally from the start tile to the finish tile, may stand on each tile
at most its capacity, and must touch every crystal tile at least once.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .graphs import ORTHO_STEPS, GridGraph

Tile = tuple[int, int]


class SearchBudgetExceeded(RuntimeError):
    """The backtracking solver ran out of its node budget (result unknown)."""


@dataclass(frozen=True)
class TileBoard:
    """Capacities map tiles to 1 or 2; start and finish are plain tiles."""

    capacities: dict[Tile, int]
    crystals: frozenset[Tile]
    start: Tile
    finish: Tile

    def __post_init__(self) -> None:
        if not isinstance(self.crystals, frozenset):
            object.__setattr__(self, "crystals", frozenset(self.crystals))
        tiles = self.capacities
        if not tiles:
            raise ValueError("board must have at least one tile")
        for t, cap in tiles.items():
            if cap not in (1, 2):
                raise ValueError(f"capacity at {t} must be 1 or 2")
        if not self.crystals <= set(tiles):
            raise ValueError("crystals must sit on board tiles")
        if self.start not in tiles or self.finish not in tiles:
            raise ValueError("start and finish must be board tiles")
        if self.start == self.finish:
            raise ValueError("start and finish must differ")
        for name, t in (("start", self.start), ("finish", self.finish)):
            if t in self.crystals or tiles[t] != 1:
                raise ValueError(f"{name} must be an ordinary capacity-1 tile")

    @property
    def tiles(self) -> set[Tile]:
        return set(self.capacities)


@dataclass(frozen=True)
class TilePath:
    """Sequence of tiles, consecutive ones orthogonally adjacent."""

    steps: tuple[Tile, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "steps", tuple(tuple(s) for s in self.steps))
        if not self.steps:
            raise ValueError("path must be nonempty")


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    rule: str | None = None
    where: object = None

    @classmethod
    def passed(cls) -> "VerifyResult":
        return cls(True)

    @classmethod
    def failed(cls, rule: str, where: object = None) -> "VerifyResult":
        return cls(False, rule, where)


def verify_tile_path(board: TileBoard, path: TilePath) -> VerifyResult:
    """Check a path against all board rules; report the first violation."""
    steps = path.steps
    if steps[0] != board.start:
        return VerifyResult.failed("path must begin at the start tile", steps[0])
    used: dict[Tile, int] = {}
    prev = None
    for i, t in enumerate(steps):
        if t not in board.capacities:
            return VerifyResult.failed("step leaves the board", t)
        if prev is not None:
            dx, dy = t[0] - prev[0], t[1] - prev[1]
            if (dx, dy) not in ORTHO_STEPS:
                return VerifyResult.failed("consecutive steps must be orthogonally adjacent", t)
        used[t] = used.get(t, 0) + 1
        if used[t] > board.capacities[t]:
            return VerifyResult.failed("capacity exceeded", t)
        prev = t
    if steps[-1] != board.finish:
        return VerifyResult.failed("path must end at the finish tile", steps[-1])
    for c in sorted(board.crystals):
        if c not in used:
            return VerifyResult.failed("crystal never visited", c)
    return VerifyResult.passed()


def solve_tile_trial(board: TileBoard, node_budget: int | None = None) -> TilePath | None:
    """Exact backtracking solver.

    Returns a valid path or None when provably unsolvable.  Raises
    SearchBudgetExceeded when the budget runs out first.  Prunes branches
    where the finish or any untouched crystal is no longer reachable through
    residual capacity.
    """
    caps = board.capacities
    crystals = board.crystals
    finish = board.finish
    used = {board.start: 1}
    path = [board.start]
    pending = set(crystals) - {board.start}
    nodes = 0

    def reachable_ok(pos: Tile) -> bool:
        seen = {pos}
        queue = deque([pos])
        while queue:
            x, y = queue.popleft()
            for dx, dy in ORTHO_STEPS:
                nxt = (x + dx, y + dy)
                if nxt in seen or nxt not in caps:
                    continue
                if used.get(nxt, 0) >= caps[nxt]:
                    continue
                seen.add(nxt)
                queue.append(nxt)
        if finish not in seen:
            return False
        return pending <= seen

    def dfs(pos: Tile) -> bool:
        nonlocal nodes
        nodes += 1
        if node_budget is not None and nodes > node_budget:
            raise SearchBudgetExceeded(f"no verdict within {node_budget} nodes")
        if not reachable_ok(pos):
            return False
        x, y = pos
        for dx, dy in ORTHO_STEPS:
            nxt = (x + dx, y + dy)
            if nxt not in caps or used.get(nxt, 0) >= caps[nxt]:
                continue
            was_pending = nxt in pending
            used[nxt] = used.get(nxt, 0) + 1
            path.append(nxt)
            if was_pending:
                pending.discard(nxt)
            if nxt == finish:
                if not pending:
                    return True
            elif dfs(nxt):
                return True
            if was_pending:
                pending.add(nxt)
            used[nxt] -= 1
            path.pop()
        return False

    if dfs(board.start):
        return TilePath(tuple(path))
    return None


def reduce_grid_to_tile_trial(g: GridGraph) -> TileBoard:
    """Build a board solvable exactly when g has a Hamiltonian cycle.

    Every vertex becomes a capacity-1 crystal tile.  The bottommost vertex
    (minimal y, then minimal x) is upgraded to capacity 2 and joined by two
    capacity-2 connector tiles to a capacity-1 corridor row two rows below
    the graph, running from the start at the far left to the finish at the
    far right.  A solving walk must climb the connector, trace a Hamiltonian
    cycle through the crystals, and come back down, spending both uses of
    the three capacity-2 tiles.

    Two-vertex graphs are the one degenerate case: a twice-steppable vertex
    tile would let the walk double back over the single edge, faking a closed
    tour, so there the chosen vertex keeps capacity 1 and the board is
    unsolvable, matching the absence of a cycle.
    """
    if len(g) < 2 or not g.is_connected():
        raise ValueError("reduction needs a connected graph with at least 2 vertices")
    xs = [x for x, _ in g.vertices]
    ys = [y for _, y in g.vertices]
    min_x, max_x, min_y = min(xs), max(xs), min(ys)
    chosen = min(g.vertices, key=lambda v: (v[1], v[0]))
    x0, y0 = chosen  # y0 == min_y

    caps: dict[Tile, int] = {v: 1 for v in g.vertices}
    if len(g) >= 3:
        caps[chosen] = 2
    caps[(x0, y0 - 1)] = 2
    caps[(x0, y0 - 2)] = 2
    corridor_y = min_y - 2
    for x in range(min_x - 1, max_x + 2):
        caps.setdefault((x, corridor_y), 1)
    start = (min_x - 1, corridor_y)
    finish = (max_x + 1, corridor_y)
    return TileBoard(
        capacities=caps,
        crystals=frozenset(g.vertices),
        start=start,
        finish=finish,
    )
