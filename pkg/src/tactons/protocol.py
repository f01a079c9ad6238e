"""Wire protocol for the session gateway.

Every message is one JSON envelope: {v, type, session_id, seq, payload}.
Server-to-client seq is strictly increasing per session. Frame payloads
carry (t_ms, mask) with the mask in the core 16-bit encoding, so a
client can reconstruct the recorder dump bit-exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

PROTOCOL_VERSION = 1

# server -> client
FRAME = "frame"
TRIAL_START = "trial_start"
TRIAL_RESULT = "trial_result"
MAZE_STATE = "maze_state"
CIRCUIT_STATE = "circuit_state"
CONTROL = "control"
# client -> server
ANSWER = "answer"

SERVER_TYPES = frozenset({FRAME, TRIAL_START, TRIAL_RESULT, MAZE_STATE, CIRCUIT_STATE, CONTROL})
CLIENT_TYPES = frozenset({ANSWER, CONTROL})

CLIENT_ACTIONS = frozenset(
    {
        "start_trials",
        "feel_start",
        "feel_stop",
        "play",
        "stop",
        "load_maze",
        "move",
        "load_circuit",
        "circuit_move",
        "toggle_level",
        "set_cue_family",
    }
)


@dataclass(frozen=True)
class Envelope:
    type: str
    session_id: str
    seq: int
    payload: dict[str, Any]
    v: int = PROTOCOL_VERSION

    def to_json(self) -> str:
        return json.dumps(
            {
                "v": self.v,
                "type": self.type,
                "session_id": self.session_id,
                "seq": self.seq,
                "payload": self.payload,
            },
            separators=(",", ":"),
        )


class ProtocolError(Exception):
    """Client message violated the envelope or action schema."""


def parse_client_message(raw: str) -> Envelope:
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ProtocolError(f"not JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ProtocolError("envelope must be an object")
    if data.get("v") != PROTOCOL_VERSION:
        raise ProtocolError(f"unsupported protocol version {data.get('v')!r}")
    msg_type = data.get("type")
    if msg_type not in CLIENT_TYPES:
        raise ProtocolError(f"unknown client message type {msg_type!r}")
    payload = data.get("payload")
    if not isinstance(payload, dict):
        raise ProtocolError("payload must be an object")
    if msg_type == CONTROL:
        action = payload.get("action")
        if action not in CLIENT_ACTIONS:
            raise ProtocolError(f"unknown action {action!r}")
    seq = data.get("seq")
    if not isinstance(seq, int):
        raise ProtocolError("seq must be an integer")
    return Envelope(
        type=msg_type,
        session_id=str(data.get("session_id", "")),
        seq=seq,
        payload=payload,
    )


def frame_payload(t_ms: int, mask: int) -> dict[str, Any]:
    return {"t_ms": t_ms, "mask": mask}


def frames_to_dump(frames: list[dict[str, Any]]) -> str:
    """Recorder dump text reassembled from frame payloads."""
    return "".join(f"{f['t_ms']}\t{f['mask']:04x}\n" for f in frames)
