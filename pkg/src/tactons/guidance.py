"""Guidance worlds: grid-maze navigation by direction cues and
electric-circuit exploration with component / available-direction tactons.

Both worlds are plain mutable state advanced by a single controller; the
tactons they emit come from :mod:`tactons.library`.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from pathlib import Path

from .core import DynamicTacton, Frame, StaticTacton, Tacton
from .library import (
    SET_TEMPO_MS,
    CircuitComponentKind,
    Direction,
    circuit_component,
    static_directional,
    wave,
)

Cell = tuple[int, int]  # (row, col), row 0 at the north edge

MAZE_PRIORITY = (Direction.N, Direction.E, Direction.S, Direction.W)
MIRRORED_PRIORITY = (Direction.N, Direction.W, Direction.S, Direction.E)

_STEP = {
    Direction.N: (-1, 0),
    Direction.E: (0, 1),
    Direction.S: (1, 0),
    Direction.W: (0, -1),
}

WALL, FLOOR, START, EXIT = "#", ".", "S", "E"


class MazeWorld:
    """Rectangular wall/floor maze with a start, an exit, and a cursor.

    The cursor starts on the start cell and only ever occupies floor; the
    exit must be reachable from the start (checked at construction).
    """

    def __init__(self, floor: frozenset[Cell], rows: int, cols: int, start: Cell, exit: Cell):
        if start == exit:
            raise ValueError("start and exit coincide")
        if start not in floor or exit not in floor:
            raise ValueError("start and exit must be floor cells")
        self.floor = floor
        self.rows = rows
        self.cols = cols
        self.start = start
        self.exit = exit
        self.current = start
        self._dist = self._distances_to_exit()
        if start not in self._dist:
            raise ValueError("exit is not reachable from start")

    @classmethod
    def from_text(cls, text: str) -> "MazeWorld":
        lines = text.rstrip("\n").split("\n")
        if not lines or not lines[0]:
            raise ValueError("empty maze")
        cols = len(lines[0])
        floor = set()
        start = exit_ = None
        for r, line in enumerate(lines):
            if len(line) != cols:
                raise ValueError(f"row {r} has {len(line)} cells, expected {cols}")
            for c, ch in enumerate(line):
                if ch == WALL:
                    continue
                if ch == START:
                    if start is not None:
                        raise ValueError("multiple start cells")
                    start = (r, c)
                elif ch == EXIT:
                    if exit_ is not None:
                        raise ValueError("multiple exit cells")
                    exit_ = (r, c)
                elif ch != FLOOR:
                    raise ValueError(f"bad cell {ch!r} at row {r}, col {c}")
                floor.add((r, c))
        if start is None or exit_ is None:
            raise ValueError("maze needs exactly one start and one exit")
        return cls(frozenset(floor), len(lines), cols, start, exit_)

    @classmethod
    def from_file(cls, path: str | Path) -> "MazeWorld":
        return cls.from_text(Path(path).read_text())

    def to_text(self) -> str:
        rows = []
        for r in range(self.rows):
            row = []
            for c in range(self.cols):
                cell = (r, c)
                if cell == self.start:
                    row.append(START)
                elif cell == self.exit:
                    row.append(EXIT)
                elif cell in self.floor:
                    row.append(FLOOR)
                else:
                    row.append(WALL)
            rows.append("".join(row))
        return "\n".join(rows) + "\n"

    def _distances_to_exit(self) -> dict[Cell, int]:
        # One flood fill from the exit serves every guidance query.
        dist = {self.exit: 0}
        queue = deque([self.exit])
        while queue:
            cell = queue.popleft()
            r, c = cell
            for dr, dc in _STEP.values():
                nxt = (r + dr, c + dc)
                if nxt in self.floor and nxt not in dist:
                    dist[nxt] = dist[cell] + 1
                    queue.append(nxt)
        return dist

    def distance(self, cell: Cell | None = None) -> int:
        """Shortest-path length from a floor cell (default: cursor) to the exit."""
        cell = self.current if cell is None else cell
        try:
            return self._dist[cell]
        except KeyError:
            raise ValueError(f"{cell} is not a floor cell connected to the exit") from None

    def at_exit(self) -> bool:
        return self.current == self.exit


def guidance_direction(
    maze: MazeWorld, priority: tuple[Direction, ...] = MAZE_PRIORITY
) -> Direction:
    """First move of a shortest path from the cursor to the exit.

    Ties go to the earliest direction in priority (N > E > S > W by
    default; pass MIRRORED_PRIORITY to compare against a mirrored maze).
    """
    if maze.at_exit():
        raise ValueError("already at the exit")
    here = maze.distance()
    r, c = maze.current
    for direction in priority:
        dr, dc = _STEP[direction]
        nxt = (r + dr, c + dc)
        if nxt in maze.floor and maze._dist.get(nxt, here) == here - 1:
            return direction
    raise AssertionError("distance field admits no descending neighbour")


def move(maze: MazeWorld, direction: Direction) -> str:
    """Step the cursor; returns "moved", "blocked" or "exited"."""
    r, c = maze.current
    dr, dc = _STEP[Direction(direction)]
    nxt = (r + dr, c + dc)
    if nxt not in maze.floor:
        return "blocked"
    maze.current = nxt
    return "exited" if nxt == maze.exit else "moved"


def guided_walk(maze: MazeWorld, priority: tuple[Direction, ...] = MAZE_PRIORITY) -> int:
    """Follow guidance cues until the exit; returns the number of moves.

    Never blocks, and by construction takes exactly distance(start) steps;
    bails out after rows*cols moves if the guidance were ever wrong.
    """
    steps = 0
    limit = maze.rows * maze.cols
    while not maze.at_exit():
        if steps >= limit:
            raise RuntimeError("guided walk failed to terminate")
        outcome = move(maze, guidance_direction(maze, priority))
        if outcome == "blocked":
            raise RuntimeError("guidance pointed into a wall")
        steps += 1
    return steps


def mirror(maze: MazeWorld) -> MazeWorld:
    """Horizontal reflection (west/east flip); preserves all distances."""
    flip = lambda cell: (cell[0], maze.cols - 1 - cell[1])
    mirrored = MazeWorld(
        frozenset(flip(cell) for cell in maze.floor),
        maze.rows,
        maze.cols,
        flip(maze.start),
        flip(maze.exit),
    )
    mirrored.current = flip(maze.current)
    return mirrored


MAZE_CUE_FAMILIES = ("set4", "set3")


def maze_cue(direction: Direction, family: str = "set4") -> Tacton:
    """Direction cue for the maze: a static or a wave radial pattern."""
    direction = Direction(direction)
    if not direction.is_radial:
        raise ValueError("maze cues cover N, S, E, W only")
    if family == "set4":
        return StaticTacton(static_directional(direction, "large"))
    if family == "set3":
        return wave("set3", direction)
    raise ValueError(f"unknown cue family {family!r}, expected one of {MAZE_CUE_FAMILIES}")


# --- circuits --------------------------------------------------------------


@dataclass(frozen=True)
class CircuitNode:
    x: int  # grows eastward
    y: int  # grows southward, matching pattern row order
    kind: CircuitComponentKind

    @property
    def position(self) -> tuple[int, int]:
        return (self.x, self.y)


class CircuitGraph:
    """Rectilinear component graph explored one node at a time."""

    def __init__(self, nodes: list[CircuitNode], edges: list[tuple[int, int]], cursor: int = 0):
        if not nodes:
            raise ValueError("circuit has no nodes")
        positions = [n.position for n in nodes]
        if len(set(positions)) != len(positions):
            raise ValueError("duplicate node positions")
        self.nodes = list(nodes)
        self.edges = [tuple(sorted(e)) for e in edges]
        self._adjacent: dict[int, set[int]] = {i: set() for i in range(len(nodes))}
        for a, b in self.edges:
            if not (0 <= a < len(nodes)) or not (0 <= b < len(nodes)) or a == b:
                raise ValueError(f"bad edge ({a}, {b})")
            dx = abs(nodes[a].x - nodes[b].x)
            dy = abs(nodes[a].y - nodes[b].y)
            if dx + dy != 1:
                raise ValueError(f"edge ({a}, {b}) is not a unit wire segment")
            self._adjacent[a].add(b)
            self._adjacent[b].add(a)
        self._check_connected()
        for i, node in enumerate(self.nodes):
            if node.kind is CircuitComponentKind.JUNCTION and len(self._adjacent[i]) < 3:
                raise ValueError(f"junction at {node.position} has degree {len(self._adjacent[i])}")
        if not (0 <= cursor < len(nodes)):
            raise ValueError("cursor outside node list")
        self.cursor = cursor

    def _check_connected(self):
        seen = {0}
        queue = deque([0])
        while queue:
            for j in self._adjacent[queue.popleft()]:
                if j not in seen:
                    seen.add(j)
                    queue.append(j)
        if len(seen) != len(self.nodes):
            raise ValueError("circuit is not connected")

    @classmethod
    def from_dict(cls, data: dict) -> "CircuitGraph":
        nodes = [
            CircuitNode(x=int(n["x"]), y=int(n["y"]), kind=CircuitComponentKind(n["kind"]))
            for n in data["nodes"]
        ]
        edges = [(int(a), int(b)) for a, b in data["edges"]]
        return cls(nodes, edges, cursor=int(data.get("cursor", 0)))

    @classmethod
    def from_file(cls, path: str | Path) -> "CircuitGraph":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def to_dict(self) -> dict:
        return {
            "nodes": [{"x": n.x, "y": n.y, "kind": n.kind.value} for n in self.nodes],
            "edges": [list(e) for e in self.edges],
            "cursor": self.cursor,
        }

    def degree(self, index: int | None = None) -> int:
        return len(self._adjacent[self.cursor if index is None else index])

    def node_directions(self, index: int) -> list[Direction]:
        """Directions with an incident wire, in fixed N, E, S, W order."""
        node = self.nodes[index]
        found = []
        for direction in (Direction.N, Direction.E, Direction.S, Direction.W):
            dr, dc = _STEP[direction]
            target = (node.x + dc, node.y + dr)  # (x, y): col delta, row delta
            for j in self._adjacent[index]:
                if self.nodes[j].position == target:
                    found.append(direction)
                    break
        return found

    def available_directions(self) -> list[Direction]:
        return self.node_directions(self.cursor)

    def move_cursor(self, direction: Direction) -> str:
        """Follow the wire in a direction; "moved" or "blocked"."""
        direction = Direction(direction)
        node = self.nodes[self.cursor]
        dr, dc = _STEP[direction]
        target = (node.x + dc, node.y + dr)
        for j in self._adjacent[self.cursor]:
            if self.nodes[j].position == target:
                self.cursor = j
                return "moved"
        return "blocked"

    @property
    def kind(self) -> CircuitComponentKind:
        return self.nodes[self.cursor].kind


def available_directions_tacton(circuit: CircuitGraph) -> Tacton:
    """Cycle through the set-4 radial pattern of each explorable direction."""
    directions = circuit.available_directions()
    if not directions:
        raise ValueError("cursor node has no incident wires")
    frames = tuple(Frame(static_directional(d, "large"), 1) for d in directions)
    return DynamicTacton(frames=frames, tempo_ms=SET_TEMPO_MS)


def local_tacton(circuit: CircuitGraph) -> Tacton:
    """The component tacton for whatever the cursor is standing on."""
    return circuit_component(circuit.kind)
