"""Formal model of pin-array tactons.

A *pattern* is the instantaneous up/down state of every pin in a
rectangular array. A *frame* pairs a pattern with a unitless duration.
A tacton is either static (one pattern, held indefinitely) or dynamic
(a cycle of frames whose per-frame display time is duration * tempo_ms).

All values here are immutable; they can be shared freely between
threads and sessions.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, Sequence, Union

PIN_UP = "o"
PIN_DOWN = "."


@dataclass(frozen=True)
class Pattern:
    """Up/down state of a rows x cols pin grid, row-major.

    Row 0 is the north (top) edge, column 0 the west edge. ``pins[r*cols + c]``
    is True when the pin at (r, c) is raised.
    """

    rows: int
    cols: int
    pins: tuple[bool, ...]

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ValueError("pattern must have positive dimensions")
        if len(self.pins) != self.rows * self.cols:
            raise ValueError(
                f"pattern has {len(self.pins)} pin states, expected "
                f"{self.rows}x{self.cols} = {self.rows * self.cols}"
            )

    @classmethod
    def blank(cls, rows: int = 4, cols: int = 4) -> "Pattern":
        return cls(rows, cols, (False,) * (rows * cols))

    @classmethod
    def from_pins(
        cls, raised: Iterable[tuple[int, int]], rows: int = 4, cols: int = 4
    ) -> "Pattern":
        """Build a pattern from (row, col) coordinates of raised pins."""
        up = set(raised)
        for r, c in up:
            if not (0 <= r < rows and 0 <= c < cols):
                raise ValueError(f"pin ({r}, {c}) outside {rows}x{cols} grid")
        return cls(
            rows, cols, tuple((r, c) in up for r in range(rows) for c in range(cols))
        )

    def pin(self, row: int, col: int) -> bool:
        return self.pins[row * self.cols + col]

    def raised(self) -> frozenset[tuple[int, int]]:
        return frozenset(
            (r, c)
            for r in range(self.rows)
            for c in range(self.cols)
            if self.pin(r, c)
        )

    @property
    def raised_count(self) -> int:
        return sum(self.pins)

    @property
    def is_blank(self) -> bool:
        return not any(self.pins)

    def rotate_180(self) -> "Pattern":
        # Reversing the row-major tuple is a 180 degree rotation.
        return Pattern(self.rows, self.cols, tuple(reversed(self.pins)))

    def union(self, other: "Pattern") -> "Pattern":
        self._check_shape(other)
        return Pattern(
            self.rows, self.cols, tuple(a or b for a, b in zip(self.pins, other.pins))
        )

    def overlaps(self, other: "Pattern") -> bool:
        self._check_shape(other)
        return any(a and b for a, b in zip(self.pins, other.pins))

    def hamming(self, other: "Pattern") -> int:
        self._check_shape(other)
        return sum(a != b for a, b in zip(self.pins, other.pins))

    def _check_shape(self, other: "Pattern") -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("patterns differ in shape")

    def to_text(self) -> str:
        lines = []
        for r in range(self.rows):
            row = self.pins[r * self.cols : (r + 1) * self.cols]
            lines.append("".join(PIN_UP if p else PIN_DOWN for p in row))
        return "\n".join(lines)

    def __str__(self) -> str:
        return self.to_text()


def pattern_from_text(text: str) -> Pattern:
    """Parse the 'o'/'.' multi-line format; line 0 is the north row.

    Raises ValueError on empty input, ragged lines, or characters other
    than 'o' and '.'.
    """
    stripped = text.rstrip("\n")
    if not stripped:
        raise ValueError("empty pattern text")
    lines = stripped.split("\n")
    width = len(lines[0])
    pins: list[bool] = []
    for i, line in enumerate(lines):
        if len(line) != width:
            raise ValueError(f"ragged pattern: line {i} has {len(line)} chars, expected {width}")
        for ch in line:
            if ch == PIN_UP:
                pins.append(True)
            elif ch == PIN_DOWN:
                pins.append(False)
            else:
                raise ValueError(f"illegal pattern character {ch!r} on line {i}")
    if width == 0:
        raise ValueError("empty pattern lines")
    return Pattern(len(lines), width, tuple(pins))


def pattern_to_text(pattern: Pattern) -> str:
    return pattern.to_text()


# 16-bit wire encoding for the 4x4 array: bit k = pin at (k // 4, k % 4),
# LSB = north-west pin.

def pattern_to_mask(pattern: Pattern) -> int:
    if (pattern.rows, pattern.cols) != (4, 4):
        raise ValueError("bitmask encoding is defined for 4x4 patterns only")
    mask = 0
    for k, up in enumerate(pattern.pins):
        if up:
            mask |= 1 << k
    return mask


def pattern_from_mask(mask: int) -> Pattern:
    if not 0 <= mask <= 0xFFFF:
        raise ValueError("mask out of 16-bit range")
    return Pattern(4, 4, tuple(bool(mask >> k & 1) for k in range(16)))


@dataclass(frozen=True)
class Frame:
    """One animation step: a pattern plus a unitless relative duration."""

    pattern: Pattern
    duration: int = 1

    def __post_init__(self) -> None:
        if self.duration < 1:
            raise ValueError("frame duration must be >= 1")


@dataclass(frozen=True)
class StaticTacton:
    """A tacton defined by a single pattern, displayed until replaced."""

    pattern: Pattern


@dataclass(frozen=True)
class DynamicTacton:
    """A cyclic animation: ordered frames plus a tempo in ms per duration unit.

    A frame is displayed for ``duration * tempo_ms`` milliseconds. The cycle
    repeats immediately by default; ``cycle_gap_ms`` inserts a blank pause
    between repetitions.
    """

    frames: tuple[Frame, ...]
    tempo_ms: int
    cycle_gap_ms: int = 0

    def __post_init__(self) -> None:
        if not self.frames:
            raise ValueError("dynamic tacton needs at least one frame")
        if self.tempo_ms < 1:
            raise ValueError("tempo must be a positive number of milliseconds")
        if self.cycle_gap_ms < 0:
            raise ValueError("cycle gap cannot be negative")
        shape = (self.frames[0].pattern.rows, self.frames[0].pattern.cols)
        for f in self.frames:
            if (f.pattern.rows, f.pattern.cols) != shape:
                raise ValueError("all frames in a tacton must share one grid shape")

    @property
    def shape(self) -> tuple[int, int]:
        return self.frames[0].pattern.rows, self.frames[0].pattern.cols


Tacton = Union[StaticTacton, DynamicTacton]


def cycle_length_ms(tacton: Tacton) -> int | None:
    """Full period of a dynamic tacton in ms (including any gap); None if static."""
    if isinstance(tacton, StaticTacton):
        return None
    active = tacton.tempo_ms * sum(f.duration for f in tacton.frames)
    return active + tacton.cycle_gap_ms


def frame_at(tacton: Tacton, t_ms: int) -> Pattern:
    """Pattern shown at instant t_ms, with t measured from playback start.

    Frame boundaries are half-open: the instant at which a frame ends
    belongs to the next frame, so the result is unambiguous for every t.
    """
    if t_ms < 0:
        raise ValueError("time must be non-negative")
    if isinstance(tacton, StaticTacton):
        return tacton.pattern
    active = tacton.tempo_ms * sum(f.duration for f in tacton.frames)
    t = t_ms % (active + tacton.cycle_gap_ms)
    if t >= active:
        rows, cols = tacton.shape
        return Pattern.blank(rows, cols)
    acc = 0
    for f in tacton.frames:
        acc += f.duration * tacton.tempo_ms
        if t < acc:
            return f.pattern
    raise AssertionError("unreachable: t reduced modulo the cycle")


@dataclass(frozen=True)
class BlinkRhythm:
    """Relative on/off durations of a blinking tacton (pattern shown d_up
    units, blank shown d_down units)."""

    d_up: int = 1
    d_down: int = 1

    def __post_init__(self) -> None:
        if self.d_up < 1 or self.d_down < 1:
            raise ValueError("blink durations must be >= 1")


def make_blinking(
    pattern: Pattern, rhythm: BlinkRhythm = BlinkRhythm(), tempo_ms: int = 100
) -> DynamicTacton:
    """Alternate a pattern with an all-down frame at the given rhythm."""
    if pattern.is_blank:
        raise ValueError("blinking an all-down pattern would be invisible")
    blank = Pattern.blank(pattern.rows, pattern.cols)
    return DynamicTacton(
        frames=(Frame(pattern, rhythm.d_up), Frame(blank, rhythm.d_down)),
        tempo_ms=tempo_ms,
    )


@dataclass(frozen=True)
class DimensionDef:
    """One logical information axis: a name and its ordered finite values."""

    name: str
    values: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.values:
            raise ValueError(f"dimension {self.name!r} has no values")
        if len(set(self.values)) != len(self.values):
            raise ValueError(f"dimension {self.name!r} has duplicate values")


@dataclass(frozen=True)
class TactonSpace:
    """Ordered dimensions plus a total encoder from value tuples to tactons.

    The encoder must be injective: distinct value tuples yield distinct
    tactons, so every point of the space is identifiable.
    """

    dimensions: tuple[DimensionDef, ...]
    encoder: Callable[[tuple[str, ...]], Tacton] = field(compare=False)

    @property
    def cardinality(self) -> int:
        return math.prod(len(d.values) for d in self.dimensions)

    @property
    def dimension_names(self) -> tuple[str, ...]:
        return tuple(d.name for d in self.dimensions)

    def tuples(self) -> Iterator[tuple[str, ...]]:
        """All value tuples, in dimension-major order."""
        return itertools.product(*(d.values for d in self.dimensions))

    def validate(self, values: Sequence[str]) -> tuple[str, ...]:
        if len(values) != len(self.dimensions):
            raise ValueError(
                f"expected {len(self.dimensions)} values, got {len(values)}"
            )
        for dim, v in zip(self.dimensions, values):
            if v not in dim.values:
                raise ValueError(f"unknown value {v!r} for dimension {dim.name!r}")
        return tuple(values)


def compose(space: TactonSpace, values: Sequence[str]) -> Tacton:
    """Encode one value per dimension into the space's tacton."""
    return space.encoder(space.validate(values))


# JSON-friendly serialization. Only the pattern strings are required to
# round-trip exactly; everything else is plain data.

def tacton_to_dict(tacton: Tacton) -> dict:
    if isinstance(tacton, StaticTacton):
        return {"kind": "static", "pattern": tacton.pattern.to_text()}
    out: dict = {
        "kind": "dynamic",
        "frames": [
            {"pattern": f.pattern.to_text(), "duration": f.duration}
            for f in tacton.frames
        ],
        "tempo_ms": tacton.tempo_ms,
    }
    if tacton.cycle_gap_ms:
        out["cycle_gap_ms"] = tacton.cycle_gap_ms
    return out


def tacton_from_dict(data: Mapping) -> Tacton:
    kind = data.get("kind")
    if kind == "static":
        return StaticTacton(pattern_from_text(data["pattern"]))
    if kind == "dynamic":
        frames = tuple(
            Frame(pattern_from_text(f["pattern"]), int(f.get("duration", 1)))
            for f in data["frames"]
        )
        return DynamicTacton(
            frames, int(data["tempo_ms"]), int(data.get("cycle_gap_ms", 0))
        )
    raise ValueError(f"unknown tacton kind {kind!r}")
