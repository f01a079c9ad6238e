import { maskToCells } from "./protocol";

// 4x4 dot grid standing in for the pin array. Raised pins render filled,
// lowered pins hollow. The displayed state is always the last mask passed
// to apply(); there is no animation state of its own.

export class PinGrid {
  readonly root: HTMLElement;
  private cells: HTMLElement[] = [];
  private lastMask = 0;

  constructor(root: HTMLElement) {
    this.root = root;
    root.classList.add("pin-grid");
    for (let k = 0; k < 16; k++) {
      const cell = document.createElement("div");
      cell.className = "pin";
      cell.dataset.index = String(k);
      root.appendChild(cell);
      this.cells.push(cell);
    }
    this.apply(0);
  }

  apply(mask: number): void {
    this.lastMask = mask;
    const raised = maskToCells(mask);
    for (let k = 0; k < 16; k++) {
      this.cells[k].classList.toggle("raised", raised[k]);
    }
  }

  mask(): number {
    return this.lastMask;
  }

  // what the DOM actually shows, independent of lastMask bookkeeping
  displayedMask(): number {
    let mask = 0;
    for (let k = 0; k < 16; k++) {
      if (this.cells[k].classList.contains("raised")) mask |= 1 << k;
    }
    return mask;
  }

  flashBorder(): void {
    this.root.classList.remove("flash");
    // restart the CSS animation even on back-to-back blocked moves
    void this.root.offsetWidth;
    this.root.classList.add("flash");
  }
}
