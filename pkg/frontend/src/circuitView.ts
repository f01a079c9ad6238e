import { Connection } from "./connection";
import { Envelope } from "./protocol";
import { PinGrid } from "./pinGrid";

const KEY_TO_DIRECTION: Record<string, string> = {
  ArrowUp: "N",
  ArrowRight: "E",
  ArrowDown: "S",
  ArrowLeft: "W",
};

const STEP = 60;
const MARGIN = 30;

// Circuit exploration: walk the schematic node by node, reading either the
// local component or the junction's open directions off the pin grid.
export class CircuitView {
  level = "local";
  private conn: Connection;
  private root: HTMLElement;
  private grid: PinGrid;

  private canvas: SVGSVGElement;
  private statusLine: HTMLElement;

  constructor(conn: Connection, root: HTMLElement, grid: PinGrid) {
    this.conn = conn;
    this.root = root;
    this.grid = grid;

    root.innerHTML = `
      <div class="circuit-controls">
        <select class="circuit-select"></select>
        <button class="load">load circuit</button>
        <button class="toggle">toggle local/global</button>
      </div>
      <svg class="circuit-map" xmlns="http://www.w3.org/2000/svg"></svg>
      <p class="circuit-status"></p>
    `;
    this.canvas = root.querySelector(".circuit-map")!;
    this.statusLine = root.querySelector(".circuit-status")!;

    root.querySelector(".load")!.addEventListener("click", () => {
      const name = (root.querySelector(".circuit-select") as HTMLSelectElement).value;
      this.conn.control("load_circuit", { name });
    });
    root.querySelector(".toggle")!.addEventListener("click", () => {
      this.conn.control("toggle_level");
    });

    conn.on("circuit_state", (msg) => this.onState(msg));
  }

  setCircuits(names: string[]): void {
    const select = this.root.querySelector(".circuit-select") as HTMLSelectElement;
    select.innerHTML = "";
    for (const name of names) {
      const option = document.createElement("option");
      option.value = name;
      option.textContent = name;
      select.appendChild(option);
    }
  }

  handleKey(key: string): boolean {
    const direction = KEY_TO_DIRECTION[key];
    if (!direction) return false;
    this.conn.control("circuit_move", { direction });
    return true;
  }

  private onState(msg: Envelope): void {
    const p = msg.payload;
    this.level = p.level;
    if (p.outcome === "blocked") this.grid.flashBorder();
    this.draw(p);
    this.statusLine.textContent =
      `${p.kind} circuit, ${p.level} reading, open: ${p.available.join(" ") || "none"}`;
  }

  private draw(p: any): void {
    const nodes = p.nodes as { x: number; y: number; kind: string }[];
    const maxX = Math.max(...nodes.map((n) => n.x));
    const maxY = Math.max(...nodes.map((n) => n.y));
    this.canvas.setAttribute("width", String(maxX * STEP + 2 * MARGIN));
    this.canvas.setAttribute("height", String(maxY * STEP + 2 * MARGIN));
    this.canvas.innerHTML = "";

    const px = (n: { x: number; y: number }) => MARGIN + n.x * STEP;
    const py = (n: { x: number; y: number }) => MARGIN + n.y * STEP;

    for (const [a, b] of p.edges as [number, number][]) {
      const line = document.createElementNS("http://www.w3.org/2000/svg", "line");
      line.setAttribute("x1", String(px(nodes[a])));
      line.setAttribute("y1", String(py(nodes[a])));
      line.setAttribute("x2", String(px(nodes[b])));
      line.setAttribute("y2", String(py(nodes[b])));
      line.setAttribute("class", "wire");
      this.canvas.appendChild(line);
    }
    nodes.forEach((node, i) => {
      const dot = document.createElementNS("http://www.w3.org/2000/svg", "circle");
      dot.setAttribute("cx", String(px(node)));
      dot.setAttribute("cy", String(py(node)));
      dot.setAttribute("r", i === p.cursor ? "10" : "6");
      dot.setAttribute("class", i === p.cursor ? "node cursor" : "node");
      dot.setAttribute("data-kind", node.kind);
      this.canvas.appendChild(dot);
      const label = document.createElementNS("http://www.w3.org/2000/svg", "text");
      label.setAttribute("x", String(px(node) + 12));
      label.setAttribute("y", String(py(node) - 8));
      label.textContent = node.kind === "wire" ? "" : node.kind;
      this.canvas.appendChild(label);
    });
  }
}
