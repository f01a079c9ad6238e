"""WebSocket session gateway.

One logical session per connection: the client drives trials, free
playback, maze navigation and circuit exploration with control/answer
envelopes; the server streams frame messages at pattern-change instants
plus typed state snapshots. With virtual_time enabled, every stimulus is
rendered through the same virtual recorder the tests use and its whole
capped schedule is sent at once, so wire content is independent of wall
timing by construction.
"""

from __future__ import annotations

import asyncio
import importlib.resources
import json
import os
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from . import protocol
from .core import Pattern, Tacton, TactonSpace, frame_at, pattern_to_mask
from .experiments import TrialRecord, analyze, format_stimulus, generate_trials
from .guidance import (
    MAZE_CUE_FAMILIES,
    CircuitGraph,
    MazeWorld,
    available_directions_tacton,
    guidance_direction,
    local_tacton,
    maze_cue,
    move,
)
from .library import Catalog, load_catalog
from .player import DEFAULT_CAP_MS, RecordingDevice, VirtualClock, change_schedule, play

ENV_PORT = "TACTONS_PORT"


def _data_dir() -> Path:
    return Path(str(importlib.resources.files("tactons").joinpath("data")))


@dataclass
class GatewayConfig:
    host: str = "127.0.0.1"
    port: int = 8765
    catalog_path: str | None = None
    world_dir: str | None = None
    virtual_time: bool = False
    cap_ms: int = DEFAULT_CAP_MS

    @classmethod
    def from_file(cls, path: str | Path) -> "GatewayConfig":
        data = json.loads(Path(path).read_text())
        unknown = set(data) - {"host", "port", "catalog", "worlds", "virtual_time", "cap_ms"}
        if unknown:
            raise ValueError(f"unknown config keys {sorted(unknown)}")
        return cls(
            host=data.get("host", cls.host),
            port=int(data.get("port", cls.port)),
            catalog_path=data.get("catalog"),
            world_dir=data.get("worlds"),
            virtual_time=bool(data.get("virtual_time", False)),
            cap_ms=int(data.get("cap_ms", DEFAULT_CAP_MS)),
        )

    def resolved_port(self) -> int:
        return int(os.environ.get(ENV_PORT, self.port))

    def worlds(self) -> Path:
        return Path(self.world_dir) if self.world_dir else _data_dir()


@dataclass
class _TrialRun:
    space_id: str
    space: TactonSpace
    stimuli: list[tuple[str, ...]]
    records: list[TrialRecord] = field(default_factory=list)
    index: int = 0
    exposure_ms: int = 0
    started_at: float = 0.0

    @property
    def current(self) -> tuple[str, ...]:
        return self.stimuli[self.index]

    @property
    def done(self) -> bool:
        return self.index >= len(self.stimuli)


class Session:
    """Server half of one connection; owns all per-client state."""

    def __init__(self, ws: WebSocket, catalog: Catalog, config: GatewayConfig):
        self.ws = ws
        self.catalog = catalog
        self.config = config
        self.session_id = uuid.uuid4().hex
        self.seq = 0
        self.trials: _TrialRun | None = None
        self.maze: MazeWorld | None = None
        self.maze_steps = 0
        self.cue_family = "set4"
        self.circuit: CircuitGraph | None = None
        self.circuit_level = "local"
        self._stream_task: asyncio.Task | None = None

    async def send(self, msg_type: str, payload: dict[str, Any]) -> None:
        self.seq += 1
        env = protocol.Envelope(
            type=msg_type, session_id=self.session_id, seq=self.seq, payload=payload
        )
        await self.ws.send_text(env.to_json())

    async def error(self, reason: str) -> None:
        await self.send(protocol.CONTROL, {"action": "error", "reason": reason})

    # --- stimulus streaming ------------------------------------------------

    async def stream_tacton(self, tacton: Tacton, until_ms: int | None = None) -> int:
        """Send the frame schedule of a tacton; returns exposure in ms.

        Virtual time sends the complete capped schedule immediately; wall
        time paces change instants with the event loop clock until the cap
        or cancellation.
        """
        await self.cancel_stream()
        cap = self.config.cap_ms
        if self.config.virtual_time:
            clock = VirtualClock()
            device = RecordingDevice(clock)
            session = play(tacton, device, clock, cap_ms=cap)
            session.advance_to(cap if until_ms is None else min(until_ms, cap))
            if until_ms is None or until_ms >= cap:
                exposure = cap
            else:
                exposure = session.stop()
            for t_ms, mask in device.log:
                await self.send(protocol.FRAME, protocol.frame_payload(t_ms, mask))
            await self.send(protocol.CONTROL, {"action": "stream_end", "t_ms": exposure})
            return exposure
        self._stream_task = asyncio.create_task(self._wall_stream(tacton, cap))
        return 0

    async def _wall_stream(self, tacton: Tacton, cap: int) -> None:
        start = time.monotonic()
        blank = Pattern.blank(frame_at(tacton, 0).rows, frame_at(tacton, 0).cols)
        try:
            for t_ms, pattern in change_schedule(tacton):
                if t_ms >= cap:
                    break
                delay = t_ms / 1000 - (time.monotonic() - start)
                if delay > 0:
                    await asyncio.sleep(delay)
                await self.send(protocol.FRAME, protocol.frame_payload(t_ms, pattern_to_mask(pattern)))
            delay = cap / 1000 - (time.monotonic() - start)
            if delay > 0:
                await asyncio.sleep(delay)
            await self.send(protocol.FRAME, protocol.frame_payload(cap, pattern_to_mask(blank)))
            await self.send(protocol.CONTROL, {"action": "capped", "t_ms": cap})
        except asyncio.CancelledError:
            raise

    async def cancel_stream(self) -> int:
        """Stop wall-time streaming; returns elapsed wall ms (0 if idle)."""
        task = self._stream_task
        self._stream_task = None
        if task is None or task.done():
            return 0
        task.cancel()
        try:
            await task
        except asyncio.CancelledError:
            pass
        return 0

    async def stop_stimulus(self, exposure_ms: int) -> None:
        if not self.config.virtual_time:
            await self.cancel_stream()
            blank = Pattern.blank(4, 4)
            await self.send(
                protocol.FRAME, protocol.frame_payload(exposure_ms, pattern_to_mask(blank))
            )

    # --- message handling ----------------------------------------------------

    async def handle(self, env: protocol.Envelope) -> None:
        if env.type == protocol.ANSWER:
            await self.on_answer(env.payload)
            return
        action = env.payload["action"]
        handler = getattr(self, f"on_{action}")
        await handler(env.payload)

    async def on_start_trials(self, payload: dict) -> None:
        import random

        space_id = payload.get("space", "s3")
        try:
            space = self.catalog.space(space_id)
        except KeyError:
            await self.error(f"unknown space {space_id!r}")
            return
        n_trials = int(payload.get("n_trials", 96))
        mode = payload.get("mode", "uniform")
        seed = int(payload.get("seed", 0))
        try:
            stimuli = generate_trials(space, n_trials, random.Random(seed), mode=mode)
        except ValueError as exc:
            await self.error(str(exc))
            return
        self.trials = _TrialRun(space_id=space_id, space=space, stimuli=stimuli)
        await self.send(
            protocol.CONTROL,
            {
                "action": "trials_started",
                "space": space_id,
                "n_trials": n_trials,
                "dimensions": [
                    {"name": d.name, "values": list(d.values)} for d in space.dimensions
                ],
            },
        )
        await self._next_trial()

    async def _next_trial(self) -> None:
        run = self.trials
        assert run is not None
        run.exposure_ms = 0
        run.started_at = time.monotonic()
        await self.send(
            protocol.TRIAL_START,
            {"trial": run.index + 1, "n_trials": len(run.stimuli)},
        )

    async def on_feel_start(self, payload: dict) -> None:
        run = self.trials
        if run is None or run.done:
            await self.error("no active trial")
            return
        tacton = run.space.encoder(run.current)
        exposure = await self.stream_tacton(tacton)
        run.exposure_ms += exposure
        if self.config.virtual_time:
            await self.send(protocol.CONTROL, {"action": "felt", "exposure_ms": run.exposure_ms})

    async def on_feel_stop(self, payload: dict) -> None:
        run = self.trials
        if run is None or run.done:
            await self.error("no active trial")
            return
        if not self.config.virtual_time:
            await self.cancel_stream()
        await self.send(protocol.CONTROL, {"action": "felt", "exposure_ms": run.exposure_ms})

    async def on_answer(self, payload: dict) -> None:
        run = self.trials
        if run is None or run.done:
            await self.error("no active trial; answer rejected")
            return
        values = payload.get("values")
        names = run.space.dimension_names
        try:
            if isinstance(values, dict):
                response = tuple(values[n] for n in names)
            else:
                response = tuple(values)
            run.space.validate(response)
        except (KeyError, TypeError, ValueError):
            await self.error(f"answer does not match dimensions {list(names)}")
            return
        await self.cancel_stream()
        rt = payload.get("response_time_ms")
        if not isinstance(rt, int):
            rt = int((time.monotonic() - run.started_at) * 1000)
        record = TrialRecord(
            participant=int(payload.get("participant", 1)),
            block=1,
            trial=run.index + 1,
            stimulus=run.current,
            response=response,
            response_time_ms=rt,
            exposure_ms=run.exposure_ms,
        )
        run.records.append(record)
        await self.send(
            protocol.TRIAL_RESULT,
            {
                "trial": run.index + 1,
                "accepted": True,
                "response": format_stimulus(run.space, response),
            },
        )
        run.index += 1
        if run.done:
            report = analyze(run.space, run.records)
            await self.send(
                protocol.CONTROL, {"action": "report", "report": report.to_dict()}
            )
        else:
            await self._next_trial()

    async def on_play(self, payload: dict) -> None:
        name = payload.get("name")
        try:
            tacton = self.catalog.tacton(str(name))
        except (KeyError, ValueError):
            await self.error(f"unknown tacton {name!r}")
            return
        until = payload.get("until_ms")
        await self.send(protocol.CONTROL, {"action": "playing", "name": name})
        await self.stream_tacton(tacton, until_ms=until if isinstance(until, int) else None)

    async def on_stop(self, payload: dict) -> None:
        await self.stop_stimulus(0)
        await self.send(protocol.CONTROL, {"action": "stopped"})

    # --- maze ---------------------------------------------------------------

    async def on_load_maze(self, payload: dict) -> None:
        try:
            if "text" in payload:
                maze = MazeWorld.from_text(payload["text"])
            else:
                name = payload["name"]
                path = self.config.worlds() / "mazes" / f"{name}.txt"
                maze = MazeWorld.from_file(path)
        except (KeyError, OSError, ValueError) as exc:
            await self.error(f"cannot load maze: {exc}")
            return
        self.maze = maze
        self.maze_steps = 0
        await self._maze_update("loaded")

    async def _maze_update(self, outcome: str) -> None:
        maze = self.maze
        assert maze is not None
        cue = None if maze.at_exit() else guidance_direction(maze).value
        await self.send(
            protocol.MAZE_STATE,
            {
                "rows": maze.rows,
                "cols": maze.cols,
                "start": list(maze.start),
                "exit": list(maze.exit),
                "current": list(maze.current),
                "at_exit": maze.at_exit(),
                "distance": maze.distance(),
                "steps": self.maze_steps,
                "cue": cue,
                "family": self.cue_family,
                "outcome": outcome,
                "text": maze.to_text(),
            },
        )
        if cue is not None:
            await self.stream_tacton(maze_cue(cue, self.cue_family))
        else:
            await self.cancel_stream()
            await self.send(protocol.FRAME, protocol.frame_payload(0, 0))
            if self.config.virtual_time:
                await self.send(protocol.CONTROL, {"action": "stream_end", "t_ms": 0})

    async def on_move(self, payload: dict) -> None:
        if self.maze is None:
            await self.error("no maze loaded")
            return
        direction = payload.get("direction")
        if direction not in ("N", "E", "S", "W"):
            await self.error(f"bad direction {direction!r}")
            return
        outcome = move(self.maze, direction)
        if outcome != "blocked":
            self.maze_steps += 1
        await self._maze_update(outcome)

    async def on_set_cue_family(self, payload: dict) -> None:
        family = payload.get("family")
        if family not in MAZE_CUE_FAMILIES:
            await self.error(f"unknown cue family {family!r}")
            return
        self.cue_family = family
        if self.maze is not None:
            await self._maze_update("cue_family")
        else:
            await self.send(protocol.CONTROL, {"action": "cue_family", "family": family})

    # --- circuit --------------------------------------------------------------

    async def on_load_circuit(self, payload: dict) -> None:
        try:
            if "data" in payload:
                circuit = CircuitGraph.from_dict(payload["data"])
            else:
                name = payload["name"]
                path = self.config.worlds() / "circuits" / f"{name}.json"
                circuit = CircuitGraph.from_file(path)
        except (KeyError, OSError, ValueError) as exc:
            await self.error(f"cannot load circuit: {exc}")
            return
        self.circuit = circuit
        self.circuit_level = "local"
        await self._circuit_update("loaded")

    async def _circuit_update(self, outcome: str) -> None:
        circuit = self.circuit
        assert circuit is not None
        await self.send(
            protocol.CIRCUIT_STATE,
            {
                "nodes": [{"x": n.x, "y": n.y, "kind": n.kind.value} for n in circuit.nodes],
                "edges": [list(e) for e in circuit.edges],
                "cursor": circuit.cursor,
                "kind": circuit.kind.value,
                "available": [d.value for d in circuit.available_directions()],
                "level": self.circuit_level,
                "outcome": outcome,
            },
        )
        if self.circuit_level == "local":
            await self.stream_tacton(local_tacton(circuit))
        else:
            await self.stream_tacton(available_directions_tacton(circuit))

    async def on_circuit_move(self, payload: dict) -> None:
        if self.circuit is None:
            await self.error("no circuit loaded")
            return
        direction = payload.get("direction")
        if direction not in ("N", "E", "S", "W"):
            await self.error(f"bad direction {direction!r}")
            return
        outcome = self.circuit.move_cursor(direction)
        await self._circuit_update(outcome)

    async def on_toggle_level(self, payload: dict) -> None:
        if self.circuit is None:
            await self.error("no circuit loaded")
            return
        self.circuit_level = "global" if self.circuit_level == "local" else "local"
        await self._circuit_update("level")


def list_worlds(config: GatewayConfig) -> dict[str, list[str]]:
    worlds = config.worlds()
    mazes = sorted(p.stem for p in (worlds / "mazes").glob("*.txt"))
    circuits = sorted(p.stem for p in (worlds / "circuits").glob("*.json"))
    return {"mazes": mazes, "circuits": circuits}


def create_app(config: GatewayConfig | None = None) -> FastAPI:
    config = config or GatewayConfig()
    catalog = load_catalog(config.catalog_path)
    app = FastAPI(title="tactons gateway")
    app.state.config = config
    app.state.catalog = catalog

    @app.get("/health")
    async def health() -> dict:
        return {"ok": True, "virtual_time": config.virtual_time}

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket) -> None:
        await ws.accept()
        session = Session(ws, catalog, config)
        hello = {
            "action": "hello",
            "virtual_time": config.virtual_time,
            "cap_ms": config.cap_ms,
            "tactons": catalog.names(),
            "spaces": sorted(catalog.spaces),
            **list_worlds(config),
        }
        await session.send(protocol.CONTROL, hello)
        try:
            while True:
                raw = await ws.receive_text()
                try:
                    env = protocol.parse_client_message(raw)
                except protocol.ProtocolError as exc:
                    await session.error(str(exc))
                    continue
                await session.handle(env)
        except WebSocketDisconnect:
            pass
        finally:
            await session.cancel_stream()

    return app


def run(config: GatewayConfig) -> None:
    import uvicorn

    uvicorn.run(create_app(config), host=config.host, port=config.resolved_port())
