import { Connection } from "./connection";
import { Envelope } from "./protocol";

export interface TrialOptions {
  space: string;
  nTrials: number;
  mode: "balanced" | "uniform";
  seed: number;
}

interface Dimension {
  name: string;
  values: string[];
}

// Experiment flow: free training on the catalog, then the trial loop.
// Hold the feel button to start/stop the stimulus, answer on the pad.
// No accuracy feedback until the final report screen.
export class TrialRunner {
  phase: "training" | "running" | "done" = "training";
  private conn: Connection;
  private root: HTMLElement;
  private opts: TrialOptions;
  private dimensions: Dimension[] = [];
  private selected = new Map<string, string>();
  private trialStartedAt = 0;

  private trainingPanel: HTMLElement;
  private trialPanel: HTMLElement;
  private reportPanel: HTMLElement;
  private statusLine: HTMLElement;
  private feelButton: HTMLButtonElement;
  private padHost: HTMLElement;
  private submitButton: HTMLButtonElement;

  constructor(conn: Connection, root: HTMLElement, opts: TrialOptions) {
    this.conn = conn;
    this.root = root;
    this.opts = opts;

    root.innerHTML = `
      <div class="training">
        <p>Training: pick a tacton and feel it as often as you like.</p>
        <select class="tacton-select"></select>
        <button class="play">play</button>
        <button class="stop">stop</button>
        <button class="begin">Begin trials</button>
      </div>
      <div class="trial" hidden>
        <p class="status"></p>
        <button class="feel">hold to feel</button>
        <div class="pad"></div>
        <button class="submit" disabled>submit answer</button>
      </div>
      <div class="report" hidden></div>
    `;
    this.trainingPanel = root.querySelector(".training")!;
    this.trialPanel = root.querySelector(".trial")!;
    this.reportPanel = root.querySelector(".report")!;
    this.statusLine = root.querySelector(".status")!;
    this.feelButton = root.querySelector(".feel")!;
    this.padHost = root.querySelector(".pad")!;
    this.submitButton = root.querySelector(".submit")!;

    root.querySelector(".play")!.addEventListener("click", () => {
      const name = (root.querySelector(".tacton-select") as HTMLSelectElement).value;
      this.conn.control("play", { name });
    });
    root.querySelector(".stop")!.addEventListener("click", () => this.conn.control("stop"));
    root.querySelector(".begin")!.addEventListener("click", () => this.begin());

    this.feelButton.addEventListener("pointerdown", () => this.conn.control("feel_start"));
    this.feelButton.addEventListener("pointerup", () => this.conn.control("feel_stop"));
    this.submitButton.addEventListener("click", () => this.submit());

    conn.on("control", (msg) => this.onControl(msg));
    conn.on("trial_start", (msg) => this.onTrialStart(msg));
    conn.on("trial_result", () => {
      // intentionally no correctness feedback here
    });
  }

  setTactons(names: string[]): void {
    const select = this.root.querySelector(".tacton-select") as HTMLSelectElement;
    select.innerHTML = "";
    for (const name of names) {
      const option = document.createElement("option");
      option.value = name;
      option.textContent = name;
      select.appendChild(option);
    }
  }

  begin(): void {
    this.conn.control("start_trials", {
      space: this.opts.space,
      n_trials: this.opts.nTrials,
      mode: this.opts.mode,
      seed: this.opts.seed,
    });
  }

  private onControl(msg: Envelope): void {
    const p = msg.payload;
    switch (p.action) {
      case "trials_started":
        this.dimensions = p.dimensions as Dimension[];
        this.buildPad();
        this.phase = "running";
        this.trainingPanel.hidden = true;
        this.trialPanel.hidden = false;
        break;
      case "felt":
        this.statusLine.dataset.exposure = String(p.exposure_ms);
        break;
      case "report":
        this.showReport(p.report);
        break;
      case "error":
        this.statusLine.textContent = `error: ${p.reason}`;
        break;
    }
  }

  private onTrialStart(msg: Envelope): void {
    this.statusLine.textContent = `Trial ${msg.payload.trial} / ${msg.payload.n_trials}`;
    this.selected.clear();
    this.trialStartedAt = performance.now();
    for (const button of this.padHost.querySelectorAll("button")) {
      button.classList.remove("picked");
    }
    this.submitButton.disabled = true;
  }

  private buildPad(): void {
    this.padHost.innerHTML = "";
    for (const dim of this.dimensions) {
      const row = document.createElement("div");
      row.className = `dim dim-${dim.name}`;
      for (const value of dim.values) {
        const button = document.createElement("button");
        button.textContent = value;
        button.dataset.dim = dim.name;
        button.dataset.value = value;
        button.addEventListener("click", () => this.pick(dim.name, value, button));
        row.appendChild(button);
      }
      this.padHost.appendChild(row);
    }
  }

  private pick(dim: string, value: string, button: HTMLElement): void {
    this.selected.set(dim, value);
    for (const sibling of this.padHost.querySelectorAll(`button[data-dim="${dim}"]`)) {
      sibling.classList.toggle("picked", sibling === button);
    }
    this.submitButton.disabled = this.selected.size !== this.dimensions.length;
  }

  private submit(): void {
    if (this.selected.size !== this.dimensions.length) return;
    const values = this.dimensions.map((d) => this.selected.get(d.name)!);
    this.conn.answer(values);
    this.submitButton.disabled = true;
    void this.trialStartedAt; // response time is measured server-side
  }

  private showReport(report: any): void {
    this.phase = "done";
    this.trialPanel.hidden = true;
    this.reportPanel.hidden = false;
    this.reportPanel.innerHTML = `
      <h2>Session report</h2>
      <p>trials: <span class="report-trials">${report.n_trials}</span></p>
      <p>error rate: <span class="report-error">${(report.overall_error_rate * 100).toFixed(2)}%</span></p>
      <p>information transmission: <span class="report-bits">${report.overall_bits.toFixed(3)}</span> bits</p>
    `;
    const dims = document.createElement("ul");
    for (const dim of report.dimensions ?? []) {
      const li = document.createElement("li");
      li.textContent = `${dim.name}: ${(dim.error_rate * 100).toFixed(1)}% errors, ${dim.transmitted_bits.toFixed(3)} bits`;
      dims.appendChild(li);
    }
    this.reportPanel.appendChild(dims);
  }
}
