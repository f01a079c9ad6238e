import { Connection } from "./connection";
import { Envelope } from "./protocol";
import { PinGrid } from "./pinGrid";

const KEY_TO_DIRECTION: Record<string, string> = {
  ArrowUp: "N",
  ArrowRight: "E",
  ArrowDown: "S",
  ArrowLeft: "W",
};

// Maze navigation driven by the directional cue on the pin grid. In hidden
// mode the map stays blank so the grid is the only way to find the exit.
export class MazeView {
  steps = 0;
  atExit = false;
  private conn: Connection;
  private root: HTMLElement;
  private grid: PinGrid;
  private hidden = false;
  private startedAt = 0;

  private map: HTMLPreElement;
  private statusLine: HTMLElement;
  private doneLine: HTMLElement;

  constructor(conn: Connection, root: HTMLElement, grid: PinGrid) {
    this.conn = conn;
    this.root = root;
    this.grid = grid;

    root.innerHTML = `
      <div class="maze-controls">
        <select class="maze-select"></select>
        <button class="load">load maze</button>
        <label><input type="checkbox" class="hidden-mode"> hidden maze</label>
        <select class="family-select">
          <option value="set4">static cue</option>
          <option value="set3">wave cue</option>
        </select>
      </div>
      <pre class="maze-map"></pre>
      <p class="maze-status"></p>
      <p class="maze-done" hidden></p>
    `;
    this.map = root.querySelector(".maze-map")!;
    this.statusLine = root.querySelector(".maze-status")!;
    this.doneLine = root.querySelector(".maze-done")!;

    root.querySelector(".load")!.addEventListener("click", () => {
      const name = (root.querySelector(".maze-select") as HTMLSelectElement).value;
      this.load(name);
    });
    root.querySelector(".hidden-mode")!.addEventListener("change", (event) => {
      this.hidden = (event.target as HTMLInputElement).checked;
      this.map.hidden = this.hidden;
    });
    root.querySelector(".family-select")!.addEventListener("change", (event) => {
      this.conn.control("set_cue_family", { family: (event.target as HTMLSelectElement).value });
    });

    conn.on("maze_state", (msg) => this.onState(msg));
  }

  setMazes(names: string[]): void {
    const select = this.root.querySelector(".maze-select") as HTMLSelectElement;
    select.innerHTML = "";
    for (const name of names) {
      const option = document.createElement("option");
      option.value = name;
      option.textContent = name;
      select.appendChild(option);
    }
  }

  load(name: string): void {
    this.startedAt = Date.now();
    this.doneLine.hidden = true;
    this.conn.control("load_maze", { name });
  }

  handleKey(key: string): boolean {
    const direction = KEY_TO_DIRECTION[key];
    if (!direction || this.atExit) return false;
    this.conn.control("move", { direction });
    return true;
  }

  private onState(msg: Envelope): void {
    const p = msg.payload;
    this.steps = p.steps;
    this.atExit = p.at_exit;
    if (p.outcome === "blocked") this.grid.flashBorder();

    this.map.hidden = this.hidden;
    this.map.textContent = this.hidden ? "" : this.markCurrent(p.text, p.current);
    // Distance to the exit would give the position away, so it only shows
    // on the open map.
    this.statusLine.textContent = this.hidden
      ? `steps: ${p.steps}`
      : `steps: ${p.steps}, distance: ${p.distance}`;

    if (p.at_exit) {
      const elapsed = ((Date.now() - this.startedAt) / 1000).toFixed(1);
      this.doneLine.hidden = false;
      this.doneLine.textContent = `Exit reached in ${p.steps} steps (${elapsed} s).`;
    }
  }

  private markCurrent(text: string, current: [number, number]): string {
    const rows = text.split("\n");
    const [r, c] = current;
    const row = rows[r];
    if (row && row[c] !== "E") {
      rows[r] = row.slice(0, c) + "@" + row.slice(c + 1);
    }
    return rows.join("\n");
  }
}
