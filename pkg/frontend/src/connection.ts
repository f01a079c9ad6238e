import { Envelope, makeEnvelope, parseServerMessage } from "./protocol";

// Minimal socket surface so tests can drive the client without a network.
export interface SocketLike {
  send(data: string): void;
  close(): void;
  onmessage: ((event: { data: string }) => void) | null;
  onclose: (() => void) | null;
  onopen: (() => void) | null;
}

export type MessageHandler = (msg: Envelope) => void;

// One gateway session. Dispatches incoming envelopes by type, numbers
// outgoing ones, and enforces the strictly-increasing server seq.
export class Connection {
  private socket: SocketLike;
  private handlers = new Map<string, MessageHandler[]>();
  private clientSeq = 0;
  private serverSeq = 0;
  onStatus: ((status: "open" | "paused") => void) | null = null;

  constructor(socket: SocketLike) {
    this.socket = socket;
    socket.onopen = () => this.onStatus?.("open");
    socket.onclose = () => this.onStatus?.("paused");
    socket.onmessage = (event) => this.receive(event.data);
  }

  on(type: string, handler: MessageHandler): void {
    const list = this.handlers.get(type) ?? [];
    list.push(handler);
    this.handlers.set(type, list);
  }

  private receive(raw: string): void {
    const msg = parseServerMessage(raw);
    if (msg.seq <= this.serverSeq) {
      throw new Error(`server seq went backwards: ${this.serverSeq} then ${msg.seq}`);
    }
    this.serverSeq = msg.seq;
    for (const handler of this.handlers.get(msg.type) ?? []) {
      handler(msg);
    }
  }

  control(action: string, extra: object = {}): void {
    this.socket.send(makeEnvelope("control", ++this.clientSeq, { action, ...extra }));
  }

  answer(values: string[], responseTimeMs?: number): void {
    const payload: Record<string, unknown> = { values };
    if (responseTimeMs !== undefined) payload.response_time_ms = Math.round(responseTimeMs);
    this.socket.send(makeEnvelope("answer", ++this.clientSeq, payload));
  }

  close(): void {
    this.socket.close();
  }
}
