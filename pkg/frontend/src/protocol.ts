// Wire protocol: one JSON envelope per message, {v, type, session_id, seq, payload}.
// Server seq is strictly increasing per session; we check it on receive.

export const PROTOCOL_VERSION = 1;

export type ServerType =
  | "frame"
  | "trial_start"
  | "trial_result"
  | "maze_state"
  | "circuit_state"
  | "control";

export interface Envelope {
  v: number;
  type: string;
  session_id: string;
  seq: number;
  payload: Record<string, any>;
}

export interface FramePayload {
  t_ms: number;
  mask: number;
}

export function makeEnvelope(type: "control" | "answer", seq: number, payload: object): string {
  return JSON.stringify({ v: PROTOCOL_VERSION, type, session_id: "", seq, payload });
}

export function parseServerMessage(raw: string): Envelope {
  const data = JSON.parse(raw);
  if (typeof data !== "object" || data === null || Array.isArray(data)) {
    throw new Error("envelope must be an object");
  }
  if (data.v !== PROTOCOL_VERSION) {
    throw new Error(`unsupported protocol version ${data.v}`);
  }
  if (typeof data.type !== "string" || typeof data.seq !== "number") {
    throw new Error("envelope missing type/seq");
  }
  return data as Envelope;
}

// bit k of the mask = pin at row floor(k/4), col k%4; LSB is the north-west pin
export function maskToCells(mask: number): boolean[] {
  const cells: boolean[] = [];
  for (let k = 0; k < 16; k++) {
    cells.push((mask & (1 << k)) !== 0);
  }
  return cells;
}

export function cellsToMask(cells: boolean[]): number {
  let mask = 0;
  for (let k = 0; k < 16; k++) {
    if (cells[k]) mask |= 1 << k;
  }
  return mask;
}

export const DIRECTIONS = ["N", "NE", "E", "SE", "S", "SW", "W", "NW"] as const;
export type CompassDirection = (typeof DIRECTIONS)[number];
