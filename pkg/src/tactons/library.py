"""Catalog of named tacton sets for the 4x4 pin array.

Eleven directional families (set1 .. set11p) cover the static, wave,
blinking and mixed design techniques; s2/s3 are the multi-dimensional
direction x size x speed spaces; six static tactons encode electric
circuit components.

Layouts are built from the structural rules below. Sets whose exact
figure layout is not pinned down by those rules carry a "reconstructed"
flag, and any entry can be overridden from a catalog JSON file.
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping

from .core import (
    BlinkRhythm,
    DimensionDef,
    DynamicTacton,
    Frame,
    Pattern,
    StaticTacton,
    Tacton,
    TactonSpace,
    make_blinking,
    tacton_from_dict,
    tacton_to_dict,
)

GRID = 4

# Every dynamic tacton in the directional sets runs at this tempo.
SET_TEMPO_MS = 100


class Direction(str, Enum):
    N = "N"
    S = "S"
    E = "E"
    W = "W"
    NE = "NE"
    NW = "NW"
    SE = "SE"
    SW = "SW"

    @property
    def is_radial(self) -> bool:
        return self in RADIALS

    @property
    def is_diagonal(self) -> bool:
        return self in DIAGONALS

    @property
    def opposite(self) -> "Direction":
        return _OPPOSITE[self]


RADIALS = (Direction.N, Direction.S, Direction.E, Direction.W)
DIAGONALS = (Direction.NE, Direction.NW, Direction.SE, Direction.SW)
ALL_DIRECTIONS = RADIALS + DIAGONALS

# Clockwise compass order, used for adjacency (ring neighbours).
COMPASS_RING = (
    Direction.N,
    Direction.NE,
    Direction.E,
    Direction.SE,
    Direction.S,
    Direction.SW,
    Direction.W,
    Direction.NW,
)

_OPPOSITE = {
    Direction.N: Direction.S,
    Direction.S: Direction.N,
    Direction.E: Direction.W,
    Direction.W: Direction.E,
    Direction.NE: Direction.SW,
    Direction.SW: Direction.NE,
    Direction.NW: Direction.SE,
    Direction.SE: Direction.NW,
}

# (row, col) unit steps; row 0 is north, col 0 is west.
DIRECTION_DELTAS = {
    Direction.N: (-1, 0),
    Direction.S: (1, 0),
    Direction.E: (0, 1),
    Direction.W: (0, -1),
    Direction.NE: (-1, 1),
    Direction.NW: (-1, -1),
    Direction.SE: (1, 1),
    Direction.SW: (1, -1),
}

# Corner cell of each diagonal direction.
_CORNER = {
    Direction.NE: (0, GRID - 1),
    Direction.NW: (0, 0),
    Direction.SE: (GRID - 1, GRID - 1),
    Direction.SW: (GRID - 1, 0),
}


def _edge_cells(direction: Direction) -> list[tuple[int, int]]:
    if direction is Direction.N:
        return [(0, c) for c in range(GRID)]
    if direction is Direction.S:
        return [(GRID - 1, c) for c in range(GRID)]
    if direction is Direction.W:
        return [(r, 0) for r in range(GRID)]
    if direction is Direction.E:
        return [(r, GRID - 1) for r in range(GRID)]
    raise ValueError(f"{direction} is not a radial direction")


def _corner_angle(direction: Direction, arm: int) -> set[tuple[int, int]]:
    """Corner cell plus `arm - 1` neighbours along each of its two edges."""
    cr, cc = _CORNER[direction]
    dr = 1 if cr == 0 else -1
    dc = 1 if cc == 0 else -1
    cells = {(cr, cc)}
    for i in range(1, arm):
        cells.add((cr, cc + dc * i))
        cells.add((cr + dr * i, cc))
    return cells


def static_directional(direction: Direction, size: str) -> Pattern:
    """Canonical static direction pattern.

    large: radial = full 4-pin edge line, diagonal = full-length 7-pin angle.
    small: radial = 2 centered edge pins, diagonal = 3-pin corner angle.
    """
    if size not in ("small", "large"):
        raise ValueError(f"unknown size {size!r}")
    if direction.is_radial:
        cells = _edge_cells(direction)
        if size == "small":
            cells = cells[1:3]
        return Pattern.from_pins(cells)
    arm = 4 if size == "large" else 2
    return Pattern.from_pins(_corner_angle(direction, arm))


def marker_pattern(direction: Direction) -> Pattern:
    """Two-pin direction marker (the set 1/2 pattern, also the set 11
    reference point)."""
    if direction.is_radial:
        return static_directional(direction, "small")
    cr, cc = _CORNER[direction]
    dr = 1 if cr == 0 else -1
    dc = 1 if cc == 0 else -1
    # Corner pin plus its inward diagonal neighbour: a short oriented segment.
    return Pattern.from_pins({(cr, cc), (cr + dr, cc + dc)})


CENTER_SQUARE = Pattern.from_pins({(1, 1), (1, 2), (2, 1), (2, 2)})


def _sweep_positions(direction: Direction) -> list[set[tuple[int, int]]]:
    """All line positions crossed when sweeping toward `direction`, in order."""
    dr, dc = DIRECTION_DELTAS[direction]
    axis = {}
    for r in range(GRID):
        for c in range(GRID):
            axis.setdefault(dr * r + dc * c, set()).add((r, c))
    return [axis[k] for k in sorted(axis)]


def _wave_frames(positions: Iterable[set[tuple[int, int]]], blanks: int = 2) -> tuple[Frame, ...]:
    frames = [Frame(Pattern.from_pins(cells)) for cells in positions]
    frames.extend(Frame(Pattern.blank(GRID, GRID)) for _ in range(blanks))
    return tuple(frames)


def _radial_sweep(direction: Direction) -> list[set[tuple[int, int]]]:
    # 4 full-width line positions moving from the opposite edge to the
    # target edge.
    return _sweep_positions(direction)


def _diagonal_sweep_full(direction: Direction) -> list[set[tuple[int, int]]]:
    # 7 diagonal line positions across the whole array.
    return _sweep_positions(direction)


def _diagonal_sweep_short(direction: Direction) -> list[set[tuple[int, int]]]:
    # The 4 leading positions, ending exactly at the target corner.
    return _sweep_positions(direction)[-4:]


def _growing_radial(direction: Direction) -> list[set[tuple[int, int]]]:
    # A centered segment that widens from 1 to 4 pins while moving toward
    # the target edge.
    positions = _sweep_positions(direction)
    out = []
    for i, cells in enumerate(positions):
        width = i + 1
        ordered = sorted(cells)
        start = (len(ordered) - width) // 2
        out.append(set(ordered[start : start + width]))
    return out


def _growing_diagonal(direction: Direction) -> list[set[tuple[int, int]]]:
    # A corner angle that grows from the corner pin to the full-length angle.
    return [_corner_angle(direction, arm) for arm in range(1, 5)]


def wave(set_id: str, direction: Direction) -> DynamicTacton:
    """Wave tacton of one of the three wave families.

    set3: line sweep, same frame count (6) for every direction.
    set8: set3 radials, growing-shape diagonals.
    set9: set3 radials; diagonals sweep the whole array (9 frames).
    """
    direction = Direction(direction)
    if set_id == "set3":
        positions = (
            _radial_sweep(direction)
            if direction.is_radial
            else _diagonal_sweep_short(direction)
        )
    elif set_id == "set8":
        positions = (
            _radial_sweep(direction)
            if direction.is_radial
            else _growing_diagonal(direction)
        )
    elif set_id == "set9":
        positions = (
            _radial_sweep(direction)
            if direction.is_radial
            else _diagonal_sweep_full(direction)
        )
    else:
        raise ValueError(f"unknown wave set {set_id!r}")
    return DynamicTacton(_wave_frames(positions), SET_TEMPO_MS)


def superimpose(
    direction_pattern: Pattern, reference: Pattern, blinking: str
) -> DynamicTacton:
    """Two-frame tacton with one part blinking over the other, static part.

    `blinking` selects which part alternates: "direction" or "reference".
    The two patterns must not overlap on any pin.
    """
    if direction_pattern.overlaps(reference):
        raise ValueError("direction and reference patterns overlap")
    both = direction_pattern.union(reference)
    if blinking == "direction":
        rest = reference
    elif blinking == "reference":
        rest = direction_pattern
    else:
        raise ValueError(f"unknown blinking part {blinking!r}")
    return DynamicTacton((Frame(both), Frame(rest)), SET_TEMPO_MS)


def mixed(set_id: str, direction: Direction) -> DynamicTacton:
    """Mixed tacton: a directional pattern plus a reference point, one of
    the two blinking at rhythm 1/1.

    set10/set10p use a 2x2 centre square as the reference; set11/set11p use
    the two-pin marker of the opposite direction. In set10/set11 the
    direction blinks; in the primed variants the reference blinks.
    """
    direction = Direction(direction)
    if set_id not in ("set10", "set10p", "set11", "set11p"):
        raise ValueError(f"unknown mixed set {set_id!r}")
    dir_pattern = static_directional(direction, "large")
    if set_id.startswith("set10"):
        reference = CENTER_SQUARE
    else:
        reference = marker_pattern(direction.opposite)
    blinking = "reference" if set_id.endswith("p") else "direction"
    return superimpose(dir_pattern, reference, blinking)


# Speed dimension: tempo per label, overridable by configuration.
DEFAULT_SPEED_TEMPOS: Mapping[str, int] = {"slow": 40, "medium": 200, "fast": 500}


def speed_tempo(speed: str, tempos: Mapping[str, int] | None = None) -> int:
    table = DEFAULT_SPEED_TEMPOS if tempos is None else tempos
    if speed not in table:
        raise ValueError(f"unknown speed {speed!r}")
    return table[speed]


class CircuitComponentKind(str, Enum):
    BATTERY = "battery"
    CAPACITOR = "capacitor"
    LAMP = "lamp"
    RESISTOR = "resistor"
    JUNCTION = "junction"
    WIRE = "wire"


# Shapes follow the usual schematic symbols where a 4x4 grid allows:
# battery = long line over a short one, capacitor = two equal plates,
# lamp = crossed diagonals, resistor = zigzag, junction = centre dot,
# wire = single straight line.
_COMPONENT_PINS: dict[CircuitComponentKind, set[tuple[int, int]]] = {
    CircuitComponentKind.BATTERY: {(1, 0), (1, 1), (1, 2), (1, 3), (2, 1), (2, 2)},
    CircuitComponentKind.CAPACITOR: {(1, c) for c in range(4)} | {(2, c) for c in range(4)},
    CircuitComponentKind.LAMP: {(0, 0), (1, 1), (2, 2), (3, 3), (0, 3), (1, 2), (2, 1), (3, 0)},
    CircuitComponentKind.RESISTOR: {(2, 0), (1, 1), (2, 2), (1, 3)},
    CircuitComponentKind.JUNCTION: {(1, 1), (1, 2), (2, 1), (2, 2)},
    CircuitComponentKind.WIRE: {(2, 0), (2, 1), (2, 2), (2, 3)},
}


def circuit_component(kind: CircuitComponentKind) -> StaticTacton:
    return StaticTacton(Pattern.from_pins(_COMPONENT_PINS[CircuitComponentKind(kind)]))


def _blinking_space_encoder(tempos: Mapping[str, int]):
    def encode(values: tuple[str, ...]) -> Tacton:
        direction, size, speed = values
        return make_blinking(
            static_directional(Direction(direction), size),
            BlinkRhythm(1, 1),
            speed_tempo(speed, tempos),
        )

    return encode


def blinking_direction_space(
    speeds: tuple[str, ...], tempos: Mapping[str, int] | None = None
) -> TactonSpace:
    """Direction x size x speed space of blinking tactons (rhythm fixed 1/1)."""
    table = dict(DEFAULT_SPEED_TEMPOS if tempos is None else tempos)
    for s in speeds:
        if s not in table:
            raise ValueError(f"speed {s!r} has no tempo")
    return TactonSpace(
        dimensions=(
            DimensionDef("dir", tuple(d.value for d in ALL_DIRECTIONS)),
            DimensionDef("size", ("small", "large")),
            DimensionDef("speed", speeds),
        ),
        encoder=_blinking_space_encoder(table),
    )


def direction_space(family: Mapping[Direction, Tacton] | str, name: str = "dir") -> TactonSpace:
    """Single-dimension space over the 8 directions of one set family.

    Accepts either a direction -> tacton mapping or a built-in set id.
    """
    if isinstance(family, str):
        families = _builtin_families()
        if family not in families:
            raise KeyError(f"unknown set {family!r}")
        fam = dict(families[family])
    else:
        fam = dict(family)

    def encode(values: tuple[str, ...]) -> Tacton:
        return fam[Direction(values[0])]

    return TactonSpace(
        dimensions=(DimensionDef(name, tuple(d.value for d in ALL_DIRECTIONS)),),
        encoder=encode,
    )


@functools.lru_cache(maxsize=1)
def _builtin_families() -> dict[str, dict[Direction, Tacton]]:
    return _build_families()


def _build_families() -> dict[str, dict[Direction, Tacton]]:
    families: dict[str, dict[Direction, Tacton]] = {}
    families["set1"] = {
        d: make_blinking(marker_pattern(d), BlinkRhythm(1, 1), SET_TEMPO_MS)
        for d in ALL_DIRECTIONS
    }
    families["set2"] = {d: StaticTacton(marker_pattern(d)) for d in ALL_DIRECTIONS}
    for set_id in ("set3", "set8", "set9"):
        families[set_id] = {d: wave(set_id, d) for d in ALL_DIRECTIONS}
    families["set4"] = {
        d: StaticTacton(
            static_directional(d, "large" if d.is_radial else "small")
        )
        for d in ALL_DIRECTIONS
    }
    # Growing moving shapes: the set8 diagonals plus grown radials.
    families["set5"] = {
        d: DynamicTacton(
            _wave_frames(
                _growing_radial(d) if d.is_radial else _growing_diagonal(d)
            ),
            SET_TEMPO_MS,
        )
        for d in ALL_DIRECTIONS
    }
    # Heavy central blocks: half-array slabs and 3x3 corner blocks.
    families["set6"] = {}
    for d in RADIALS:
        dr, dc = DIRECTION_DELTAS[d]
        if dr:
            rows = (0, 1) if dr < 0 else (2, 3)
            cells = {(r, c) for r in rows for c in range(GRID)}
        else:
            cols = (0, 1) if dc < 0 else (2, 3)
            cells = {(r, c) for r in range(GRID) for c in cols}
        families["set6"][d] = StaticTacton(Pattern.from_pins(cells))
    for d in DIAGONALS:
        cr, cc = _CORNER[d]
        rows = range(0, 3) if cr == 0 else range(1, 4)
        cols = range(0, 3) if cc == 0 else range(1, 4)
        families["set6"][d] = StaticTacton(
            Pattern.from_pins({(r, c) for r in rows for c in cols})
        )
    # Like set4 but with full-length diagonals.
    families["set7"] = {
        d: StaticTacton(static_directional(d, "large")) for d in ALL_DIRECTIONS
    }
    for set_id in ("set10", "set10p", "set11", "set11p"):
        families[set_id] = {d: mixed(set_id, d) for d in ALL_DIRECTIONS}
    return families


# Families whose exact layouts are inferred rather than pinned down by the
# construction rules; experiments default to the well-specified ones.
RECONSTRUCTED_SETS = frozenset({"set1", "set2", "set5", "set6", "set7"})
DEFAULT_EXPERIMENT_SETS = ("set4", "set3", "set9", "set11p")


@dataclass
class Catalog:
    """Registry of every named tacton: directional families, the s2/s3
    spaces, and the circuit component tactons.

    Individual entries address as "family/direction" (e. g. "set4/N") or
    "circuit/<kind>". Built once at startup and treated as immutable.
    """

    families: dict[str, dict[Direction, Tacton]] = field(default_factory=_build_families)
    components: dict[CircuitComponentKind, StaticTacton] = field(
        default_factory=lambda: {k: circuit_component(k) for k in CircuitComponentKind}
    )
    spaces: dict[str, TactonSpace] = field(
        default_factory=lambda: {
            "s2": blinking_direction_space(("slow", "fast")),
            "s3": blinking_direction_space(("slow", "medium", "fast")),
        }
    )

    def names(self) -> list[str]:
        out = []
        for set_id in sorted(self.families):
            out.extend(f"{set_id}/{d.value}" for d in ALL_DIRECTIONS)
        out.extend(f"circuit/{k.value}" for k in CircuitComponentKind)
        return out

    def tacton(self, name: str) -> Tacton:
        group, _, member = name.partition("/")
        if not member:
            raise KeyError(f"tacton name {name!r} is not group/member")
        if group == "circuit":
            return self.components[CircuitComponentKind(member)]
        if group in self.families:
            return self.families[group][Direction(member)]
        raise KeyError(f"unknown tacton group {group!r}")

    def space(self, space_id: str) -> TactonSpace:
        if space_id in self.spaces:
            return self.spaces[space_id]
        if space_id in self.families:
            return direction_space(self.families[space_id])
        raise KeyError(f"unknown space {space_id!r}")

    def to_dict(self) -> dict:
        entries = []
        for name in self.names():
            entry = {"name": name}
            entry.update(tacton_to_dict(self.tacton(name)))
            set_id = name.split("/")[0]
            if set_id in RECONSTRUCTED_SETS:
                entry["reconstructed"] = True
            entries.append(entry)
        return {"tactons": entries}

    def dump_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def apply_overrides(self, data: Mapping) -> None:
        """Replace catalog entries with the ones named in a catalog document."""
        for entry in data.get("tactons", []):
            name = entry["name"]
            tacton = tacton_from_dict(entry)
            group, _, member = name.partition("/")
            if group == "circuit":
                if not isinstance(tacton, StaticTacton):
                    raise ValueError(f"{name}: circuit components are static")
                self.components[CircuitComponentKind(member)] = tacton
            elif group in self.families:
                self.families[group][Direction(member)] = tacton
            else:
                raise ValueError(f"override for unknown group {group!r}")


def load_catalog(path: str | Path | None = None) -> Catalog:
    """Built-in catalog, with overrides applied from `path` if given."""
    catalog = Catalog()
    if path is not None:
        with open(path, encoding="utf-8") as f:
            catalog.apply_overrides(json.load(f))
    return catalog
