import { Connection, SocketLike } from "./connection";
import { PinGrid } from "./pinGrid";
import { TrialRunner } from "./trialRunner";
import { MazeView } from "./mazeView";
import { CircuitView } from "./circuitView";

const params = new URLSearchParams(location.search);
const port = params.get("port") ?? "8765";
const host = location.hostname || "localhost";

const socket = new WebSocket(`ws://${host}:${port}/ws`);
// a browser WebSocket satisfies SocketLike at runtime; its lib.dom handler
// slots are declared against the full event types, hence the cast
const conn = new Connection(socket as unknown as SocketLike);

const banner = document.getElementById("banner")!;
conn.onStatus = (status) => {
  banner.hidden = status === "open";
};

const grid = new PinGrid(document.getElementById("grid")!);
conn.on("frame", (msg) => grid.apply(msg.payload.mask));

const runner = new TrialRunner(conn, document.getElementById("trials")!, {
  space: params.get("space") ?? "s3",
  nTrials: Number(params.get("trials") ?? 48),
  mode: "balanced",
  seed: Number(params.get("seed") ?? Date.now() % 100000),
});
const maze = new MazeView(conn, document.getElementById("maze")!, grid);
const circuit = new CircuitView(conn, document.getElementById("circuit")!, grid);

conn.on("control", (msg) => {
  if (msg.payload.action === "hello") {
    runner.setTactons(msg.payload.tactons);
    maze.setMazes(msg.payload.mazes);
    circuit.setCircuits(msg.payload.circuits);
  }
});

let active = "trials";
const sections: Record<string, HTMLElement> = {
  trials: document.getElementById("trials")!,
  maze: document.getElementById("maze")!,
  circuit: document.getElementById("circuit")!,
};
for (const button of document.querySelectorAll<HTMLButtonElement>("#tabs button")) {
  button.addEventListener("click", () => {
    active = button.dataset.tab!;
    for (const [name, section] of Object.entries(sections)) {
      section.hidden = name !== active;
    }
  });
}
sections.maze.hidden = true;
sections.circuit.hidden = true;

document.addEventListener("keydown", (event) => {
  const handled =
    active === "maze" ? maze.handleKey(event.key)
    : active === "circuit" ? circuit.handleKey(event.key)
    : false;
  if (handled) event.preventDefault();
});
