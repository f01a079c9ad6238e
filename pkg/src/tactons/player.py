"""Deterministic tacton playback onto an abstract pin-array device.

A session walks the exact frame schedule of a tacton: presentation
instants are computed from the schedule, never polled, so with a virtual
clock the (t, pattern) sequence is a pure function of tacton and cap.
Stimulus exposure is capped (10 s by default); on cap or stop the device
is blanked, which doubles as the unambiguous end-of-stimulus signal.
"""

from __future__ import annotations

import time
from typing import Callable, Iterator, Protocol

from .core import Pattern, StaticTacton, Tacton, cycle_length_ms, frame_at, pattern_to_mask

DEFAULT_CAP_MS = 10_000


class Clock(Protocol):
    def now_ms(self) -> int: ...


class VirtualClock:
    """Manually advanced clock; the only timing source used in tests."""

    def __init__(self, start_ms: int = 0):
        self._now = start_ms

    def now_ms(self) -> int:
        return self._now

    def advance(self, dt_ms: int) -> int:
        if dt_ms < 0:
            raise ValueError("cannot advance backwards")
        self._now += dt_ms
        return self._now

    def advance_to(self, t_ms: int) -> int:
        if t_ms < self._now:
            raise ValueError("cannot advance backwards")
        self._now = t_ms
        return self._now


class WallClock:
    """Monotonic wall time in integer milliseconds."""

    def __init__(self):
        self._t0 = time.monotonic()

    def now_ms(self) -> int:
        return int((time.monotonic() - self._t0) * 1000)


class PinArrayDevice(Protocol):
    def present(self, pattern: Pattern) -> None: ...


class RecordingDevice:
    """Virtual pin array that logs every presentation as (t_ms, bitmask)."""

    def __init__(self, clock: Clock):
        self._clock = clock
        self.log: list[tuple[int, int]] = []

    def present(self, pattern: Pattern) -> None:
        self.log.append((self._clock.now_ms(), pattern_to_mask(pattern)))

    def dump(self) -> str:
        """Golden-file format: one "t_ms<TAB>mask_hex" line per presentation."""
        return "".join(f"{t}\t{mask:04x}\n" for t, mask in self.log)


class TerminalDevice:
    """Renders each presented pattern as text, for the CLI."""

    def __init__(self, write: Callable[[str], None] = print, clock: Clock | None = None):
        self._write = write
        self._clock = clock

    def present(self, pattern: Pattern) -> None:
        if self._clock is not None:
            self._write(f"t={self._clock.now_ms()} ms")
        self._write(pattern.to_text())
        self._write("")


def change_schedule(tacton: Tacton) -> Iterator[tuple[int, Pattern]]:
    """Instants (from playback start) at which the displayed pattern changes,
    starting with (0, frame_at(0)). Infinite for any tacton that actually
    changes; consume lazily."""
    current = frame_at(tacton, 0)
    yield 0, current
    if isinstance(tacton, StaticTacton):
        return
    cycle = cycle_length_ms(tacton)
    # Candidate boundaries within one cycle: frame edges plus the gap edge.
    boundaries = []
    acc = 0
    for f in tacton.frames:
        acc += f.duration * tacton.tempo_ms
        boundaries.append(acc)
    if tacton.cycle_gap_ms:
        boundaries.append(cycle)
    base = 0
    emitted_any = True
    while emitted_any:
        emitted_any = False
        for b in boundaries:
            t = base + b
            nxt = frame_at(tacton, t)
            if nxt != current:
                current = nxt
                emitted_any = True
                yield t, nxt
        base += cycle
    # All frames identical: nothing ever changes again.


class PlaybackSession:
    """Single playback of one tacton on one device.

    States: playing -> stopped | capped. Advance with a virtual clock via
    :meth:`advance_to`; wall-clock drivers should pace themselves on
    :func:`change_schedule` instead. The blank presented on stop or cap is
    always written, even if the display already happens to be blank: it is
    the end-of-stimulus marker, not a scheduled frame.
    """

    PLAYING = "playing"
    STOPPED = "stopped"
    CAPPED = "capped"

    def __init__(
        self,
        tacton: Tacton,
        device: PinArrayDevice,
        clock,
        cap_ms: int = DEFAULT_CAP_MS,
        on_event: Callable[[str, int], None] | None = None,
    ):
        if cap_ms < 1:
            raise ValueError("cap must be positive")
        self.tacton = tacton
        self.device = device
        self.clock = clock
        self.cap_ms = cap_ms
        self.state = self.PLAYING
        self._on_event = on_event
        self._start = clock.now_ms()
        self._elapsed: int | None = None
        self._changes = change_schedule(tacton)
        self._pending: tuple[int, Pattern] | None = None
        self._blank = self._blank_pattern()
        self._emit_next()  # presents frame_at(0) immediately

    def _blank_pattern(self) -> Pattern:
        p = frame_at(self.tacton, 0)
        return Pattern.blank(p.rows, p.cols)

    def _emit_next(self) -> None:
        t_rel, pattern = self._pending or next(self._changes)
        self._pending = None
        try:
            self.device.present(pattern)
        except Exception as exc:
            self.state = self.STOPPED
            self._elapsed = min(self.clock.now_ms() - self._start, self.cap_ms)
            self._event("error", t_rel)
            raise
        self._event("present", t_rel)

    def _event(self, kind: str, t_rel: int) -> None:
        if self._on_event is not None:
            self._on_event(kind, t_rel)

    def _peek(self) -> tuple[int, Pattern] | None:
        if self._pending is None:
            self._pending = next(self._changes, None)
        return self._pending

    def advance_to(self, t_ms: int) -> None:
        """Advance a virtual clock to t_ms, presenting every scheduled change
        on the way and capping at start + cap_ms."""
        if self.state != self.PLAYING:
            self.clock.advance_to(max(t_ms, self.clock.now_ms()))
            return
        cap_at = self._start + self.cap_ms
        while True:
            nxt = self._peek()
            if nxt is None:
                break
            t_abs = self._start + nxt[0]
            if t_abs > t_ms or t_abs >= cap_at:
                break
            self.clock.advance_to(t_abs)
            self._emit_next()
        if t_ms >= cap_at:
            self.clock.advance_to(cap_at)
            self.device.present(self._blank)
            self.state = self.CAPPED
            self._elapsed = self.cap_ms
            self._event("capped", self.cap_ms)
        self.clock.advance_to(max(t_ms, self.clock.now_ms()))

    def stop(self) -> int:
        """Blank the device and return the exposure duration in ms.

        Idempotent: stopping a finished session returns the prior elapsed
        time without touching the device again.
        """
        if self.state != self.PLAYING:
            assert self._elapsed is not None
            return self._elapsed
        self._elapsed = min(self.clock.now_ms() - self._start, self.cap_ms)
        self.device.present(self._blank)
        self.state = self.STOPPED
        self._event("stopped", self._elapsed)
        return self._elapsed

    @property
    def elapsed_ms(self) -> int:
        if self._elapsed is not None:
            return self._elapsed
        return min(self.clock.now_ms() - self._start, self.cap_ms)


def play(
    tacton: Tacton,
    device: PinArrayDevice,
    clock,
    cap_ms: int = DEFAULT_CAP_MS,
    on_event: Callable[[str, int], None] | None = None,
) -> PlaybackSession:
    """Start playback; the device immediately shows the t=0 pattern."""
    return PlaybackSession(tacton, device, clock, cap_ms=cap_ms, on_event=on_event)


def record_playback(tacton: Tacton, until_ms: int, cap_ms: int = DEFAULT_CAP_MS) -> list[tuple[int, int]]:
    """Full virtual-clock presentation log of a tacton up to until_ms."""
    clock = VirtualClock()
    device = RecordingDevice(clock)
    session = play(tacton, device, clock, cap_ms=cap_ms)
    session.advance_to(until_ms)
    return device.log
