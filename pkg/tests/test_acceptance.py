"""Release gate: one test per shipping criterion, each with its stated
tolerance and, where one applies, its runtime budget. Oracles here are
written out in full rather than imported, so a defect in the package
cannot hide inside its own checker.
"""

import json
import math
import random
import time
from collections import deque
from pathlib import Path

import numpy as np
from fastapi.testclient import TestClient

import tactons
from tactons.core import (
    cycle_length_ms,
    frame_at,
    pattern_from_mask,
    pattern_to_mask,
    tacton_to_dict,
)
from tactons.experiments import ResponderModel, analyze, information_transmission, simulate_responder
from tactons.guidance import MazeWorld, guided_walk, mirror
from tactons.library import (
    ALL_DIRECTIONS,
    Catalog,
    DIAGONALS,
    RADIALS,
    blinking_direction_space,
    direction_space,
)
from tactons.player import DEFAULT_CAP_MS, record_playback
from tactons.protocol import frames_to_dump
from tactons.server import GatewayConfig, create_app

from test_core import random_dynamic

DATA = Path(tactons.__file__).parent / "data"
PINNED_SEED = 17


def _signature(tacton) -> str:
    return json.dumps(tacton_to_dict(tacton), sort_keys=True)


def test_timeline_law():
    """Any frame query repeats exactly one cycle later, for 1000 random
    animations at 100 random instants each; six-frame waves cycle in
    exactly 600 ms."""
    started = time.perf_counter()
    rng = random.Random(99)
    for _ in range(1000):
        tacton = random_dynamic(rng)
        cycle = cycle_length_ms(tacton)
        for _ in range(100):
            t = rng.randrange(0, 3 * cycle)
            assert frame_at(tacton, t) == frame_at(tacton, t + cycle)

    catalog = Catalog()
    for direction in ALL_DIRECTIONS:
        assert cycle_length_ms(catalog.families["set5"][direction]) == 600
        assert cycle_length_ms(catalog.families["set3"][direction]) == 600
    for direction in DIAGONALS:
        assert cycle_length_ms(catalog.families["set8"][direction]) == 600
    assert time.perf_counter() - started < 5.0


def test_catalog_structure():
    """Every catalog animation runs at the 100 ms tempo; sweep frame
    counts are 6 (radial) and 9 (diagonal) where the long diagonal needs
    them; both stimulus spaces have their full cardinality and collision-
    free encoders."""
    started = time.perf_counter()
    catalog = Catalog()
    assert len(catalog.families) == 13
    for set_id, family in catalog.families.items():
        for direction, tacton in family.items():
            if hasattr(tacton, "tempo_ms"):
                assert tacton.tempo_ms == 100, (set_id, direction)
    for direction in RADIALS:
        assert len(catalog.families["set9"][direction].frames) == 6
    for direction in DIAGONALS:
        assert len(catalog.families["set9"][direction].frames) == 9

    for space_id, cardinality in (("s2", 32), ("s3", 48)):
        space = catalog.space(space_id)
        assert space.cardinality == cardinality
        encoded = {_signature(space.encoder(point)) for point in space.tuples()}
        assert len(encoded) == cardinality, f"{space_id} encoder collides"
    assert time.perf_counter() - started < 1.0


def test_information_transmission_exactness():
    """Transmitted information: 3.000000 bits for a perfect 8-way
    channel, zero for an independent one, never above either marginal
    entropy, and equal to the textbook double summation."""

    def brute_force(counts) -> float:
        n = float(sum(sum(row) for row in counts))
        row_sums = [sum(row) for row in counts]
        col_sums = [sum(col) for col in zip(*counts)]
        total = 0.0
        for i, row in enumerate(counts):
            for j, nij in enumerate(row):
                if nij:
                    total += (nij / n) * math.log2(
                        (nij / n) / ((row_sums[i] / n) * (col_sums[j] / n))
                    )
        return total

    def entropy(marginal) -> float:
        n = marginal.sum()
        p = marginal[marginal > 0] / n
        return float(-(p * np.log2(p)).sum())

    assert abs(information_transmission(np.eye(8) * 25) - 3.0) < 1e-9
    assert abs(information_transmission(np.outer([1, 2, 3], [4, 1, 5]))) < 1e-12

    known = [[3, 1], [1, 3]]
    assert abs(information_transmission(np.array(known)) - brute_force(known)) < 1e-12

    rng = np.random.default_rng(20260816)
    for _ in range(10_000):
        counts = rng.integers(0, 21, (rng.integers(2, 7), rng.integers(2, 7)))
        if counts.sum() == 0:
            continue
        t = information_transmission(counts)
        assert -1e-12 <= t
        assert t <= min(entropy(counts.sum(axis=1)), entropy(counts.sum(axis=0))) + 1e-9


def test_plausibility_bands():
    """Synthetic responders land where the published experiments did:
    a 2% adjacent-direction slip keeps the median around 2.9 bits, and
    the three-dimension model keeps the median error near 28%."""
    started = time.perf_counter()
    directions = direction_space("set4")
    model = ResponderModel(space=directions, confusion={"dir": 0.02})
    records = simulate_responder(
        directions, model, n_participants=9, n_trials=100, seed=PINNED_SEED, mode="uniform"
    )
    median_bits = analyze(directions, records).median_bits
    assert 2.6 <= median_bits <= 3.0

    s3 = blinking_direction_space(("slow", "medium", "fast"))
    model = ResponderModel(space=s3, confusion={"dir": 0.15, "size": 0.07, "speed": 0.10})
    records = simulate_responder(
        s3, model, n_participants=12, n_trials=96, seed=PINNED_SEED, mode="balanced"
    )
    median_error = analyze(s3, records).median_error_rate
    assert 0.20 <= median_error <= 0.36
    assert time.perf_counter() - started < 10.0


def test_maze_guidance():
    """From every floor cell of every bundled maze the guided walk takes
    exactly the shortest-path step count, and mirroring is a distance-
    preserving involution."""

    def bfs_distances(text: str) -> dict[tuple[int, int], int]:
        grid = text.rstrip("\n").split("\n")
        floor = {
            (r, c)
            for r, line in enumerate(grid)
            for c, ch in enumerate(line)
            if ch != "#"
        }
        exit_ = next(
            (r, c) for r, line in enumerate(grid) for c, ch in enumerate(line) if ch == "E"
        )
        dist = {exit_: 0}
        queue = deque([exit_])
        while queue:
            r, c = queue.popleft()
            for cell in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)):
                if cell in floor and cell not in dist:
                    dist[cell] = dist[(r, c)] + 1
                    queue.append(cell)
        return dist

    started = time.perf_counter()
    files = sorted((DATA / "mazes").glob("*.txt"))
    assert len(files) >= 20

    for path in files:
        maze = MazeWorld.from_file(path)
        oracle = bfs_distances(path.read_text())
        assert set(oracle) == maze.floor, f"{path.name}: disconnected floor"
        for cell in sorted(maze.floor):
            maze.current = cell
            assert guided_walk(maze) == oracle[cell], (path.name, cell)

        fresh = MazeWorld.from_file(path)
        twin = mirror(fresh)
        assert mirror(twin).to_text() == fresh.to_text()
        for r, c in fresh.floor:
            assert fresh.distance((r, c)) == twin.distance((r, fresh.cols - 1 - c))
    assert time.perf_counter() - started < 5.0


def test_playback_determinism():
    """Re-rendering any catalog entry yields a byte-identical schedule
    that blanks at exactly the 10 000 ms cap and never emits past it."""
    assert DEFAULT_CAP_MS == 10_000
    first, second = Catalog(), Catalog()
    for name in first.names():
        log = record_playback(first.tacton(name), until_ms=DEFAULT_CAP_MS, cap_ms=DEFAULT_CAP_MS)
        again = record_playback(second.tacton(name), until_ms=DEFAULT_CAP_MS, cap_ms=DEFAULT_CAP_MS)
        assert log == again, name
        assert log[-1] == (10_000, 0), name
        assert all(t <= 10_000 for t, _ in log), name
        assert all(a[0] < b[0] for a, b in zip(log, log[1:])), name


def test_protocol_fidelity():
    """The virtual-time wire stream carries the recorder dump bit for
    bit, and the 16-bit mask encoding round-trips every value."""
    for mask in range(65_536):
        assert pattern_to_mask(pattern_from_mask(mask)) == mask

    catalog = Catalog()
    app = create_app(GatewayConfig(virtual_time=True))
    client = TestClient(app)
    with client.websocket_connect("/ws") as ws:
        hello = json.loads(ws.receive_text())
        assert hello["payload"]["action"] == "hello"
        for name in ("set1/N", "set4/S", "set9/NE", "set11p/W", "circuit/junction"):
            ws.send_text(
                json.dumps(
                    {
                        "v": 1,
                        "type": "control",
                        "session_id": "",
                        "seq": 1,
                        "payload": {"action": "play", "name": name},
                    }
                )
            )
            frames = []
            while True:
                msg = json.loads(ws.receive_text())
                if msg["type"] == "frame":
                    frames.append(msg["payload"])
                elif msg["type"] == "control" and msg["payload"]["action"] == "stream_end":
                    break
            log = record_playback(
                catalog.tacton(name), until_ms=DEFAULT_CAP_MS, cap_ms=DEFAULT_CAP_MS
            )
            expected = "".join(f"{t}\t{mask:04x}\n" for t, mask in log)
            assert frames_to_dump(frames) == expected, name
