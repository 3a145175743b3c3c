// DOM widgets for the synchronized panel.
//
// Three modes per node: a continuous slider, a discrete slider whose display
// snaps to the nearest semantic step (without touching the stored value),
// and a dropdown of preset jumps. Slider drags update the local display
// only; the value is committed to the service on release. Locked nodes show
// an indicator and refuse drag input.

import { PanelStore } from "./panelStore.js";
import type { WidgetMode } from "./types.js";

export interface ControlCallbacks {
  commitValue(nodeId: string, raw: number): void;
  applyPreset(nodeId: string, label: string): void;
  toggleLock(nodeId: string, locked: boolean): void;
}

const MODES: WidgetMode[] = ["continuous", "discrete", "dropdown"];

export class PanelView {
  private nodeElements = new Map<string, HTMLElement>();

  constructor(
    private root: HTMLElement,
    private store: PanelStore,
    private callbacks: ControlCallbacks,
  ) {
    store.onChange((ids) => this.refresh(ids));
  }

  mount(): void {
    this.root.innerHTML = "";
    this.nodeElements.clear();
    const title = document.createElement("h2");
    title.textContent = this.store.panelName;
    this.root.appendChild(title);
    const walk = (id: string, depth: number) => {
      this.root.appendChild(this.buildNode(id, depth));
      for (const child of this.store.node(id).children) walk(child, depth + 1);
    };
    for (const rootId of this.store.roots) walk(rootId, 0);
    this.refresh([...this.store.nodes.keys()]);
  }

  element(id: string): HTMLElement {
    const el = this.nodeElements.get(id);
    if (!el) throw new Error(`no element for node ${id}`);
    return el;
  }

  displayedValue(id: string): string {
    return (this.element(id).querySelector(".value-display") as HTMLElement).textContent ?? "";
  }

  private buildNode(id: string, depth: number): HTMLElement {
    const node = this.store.node(id);
    const wrap = document.createElement("div");
    wrap.className = `control-node level-${node.level}`;
    wrap.dataset.nodeId = id;
    wrap.style.marginLeft = `${depth * 16}px`;

    const header = document.createElement("div");
    header.className = "node-header";
    const label = document.createElement("span");
    label.className = "node-name";
    label.textContent = node.name;
    label.title = node.description;
    header.appendChild(label);

    const lockButton = document.createElement("button");
    lockButton.className = "lock-toggle";
    lockButton.addEventListener("click", () => {
      this.callbacks.toggleLock(id, !this.store.node(id).locked);
    });
    header.appendChild(lockButton);

    const modeSwitch = document.createElement("span");
    modeSwitch.className = "mode-switch";
    for (const mode of MODES) {
      if (mode === "dropdown" && Object.keys(node.dropdown_presets).length === 0) continue;
      const button = document.createElement("button");
      button.className = `mode-${mode}`;
      button.textContent = mode;
      button.addEventListener("click", () => this.store.setMode(id, mode));
      modeSwitch.appendChild(button);
    }
    header.appendChild(modeSwitch);
    wrap.appendChild(header);

    const body = document.createElement("div");
    body.className = "widget-body";
    wrap.appendChild(body);

    const display = document.createElement("span");
    display.className = "value-display";
    wrap.appendChild(display);

    this.nodeElements.set(id, wrap);
    return wrap;
  }

  private refresh(ids: string[]): void {
    for (const id of ids) {
      const el = this.nodeElements.get(id);
      if (el) this.renderWidget(id, el);
    }
  }

  private renderWidget(id: string, el: HTMLElement): void {
    const node = this.store.node(id);
    el.classList.toggle("locked", node.locked);
    (el.querySelector(".lock-toggle") as HTMLElement).textContent = node.locked ? "🔒" : "🔓";
    const body = el.querySelector(".widget-body") as HTMLElement;
    body.innerHTML = "";
    if (node.mode === "continuous") {
      body.appendChild(this.continuousSlider(id));
    } else if (node.mode === "discrete") {
      body.appendChild(this.discreteSlider(id));
    } else {
      body.appendChild(this.dropdown(id));
    }
    this.updateDisplay(id, el);
  }

  private updateDisplay(id: string, el: HTMLElement): void {
    const node = this.store.node(id);
    const display = el.querySelector(".value-display") as HTMLElement;
    if (node.mode === "discrete" && node.step_labels.length > 0) {
      display.textContent = node.step_labels[this.store.nearestStepIndex(id)];
    } else {
      display.textContent = this.store.rawValue(id).toFixed(2);
    }
  }

  private continuousSlider(id: string): HTMLElement {
    const node = this.store.node(id);
    const slider = document.createElement("input");
    slider.type = "range";
    slider.min = "0";
    slider.max = "1";
    slider.step = "0.001";
    slider.className = "slider-continuous";
    slider.value = String(node.value);
    slider.disabled = node.locked;
    slider.addEventListener("pointerdown", () => {
      if (!this.store.beginDrag(id)) return;
    });
    slider.addEventListener("input", () => {
      if (this.store.node(id).locked) return;
      // live display while dragging; nothing committed yet
      const el = this.element(id);
      const display = el.querySelector(".value-display") as HTMLElement;
      display.textContent = this.store.denormalize(id, Number(slider.value)).toFixed(2);
    });
    slider.addEventListener("change", () => {
      this.store.endDrag();
      if (this.store.node(id).locked) return;
      this.callbacks.commitValue(id, this.store.denormalize(id, Number(slider.value)));
    });
    return slider;
  }

  private discreteSlider(id: string): HTMLElement {
    const node = this.store.node(id);
    const steps = Math.max(node.step_labels.length, 2);
    const slider = document.createElement("input");
    slider.type = "range";
    slider.min = "0";
    slider.max = String(steps - 1);
    slider.step = "1";
    slider.className = "slider-discrete";
    slider.value = String(this.store.nearestStepIndex(id));
    slider.disabled = node.locked;
    slider.addEventListener("pointerdown", () => {
      if (!this.store.beginDrag(id)) return;
    });
    slider.addEventListener("change", () => {
      this.store.endDrag();
      if (this.store.node(id).locked) return;
      const normalized = steps > 1 ? Number(slider.value) / (steps - 1) : 0;
      this.callbacks.commitValue(id, this.store.denormalize(id, normalized));
    });
    return slider;
  }

  private dropdown(id: string): HTMLElement {
    const node = this.store.node(id);
    const select = document.createElement("select");
    select.className = "preset-dropdown";
    select.disabled = node.locked;
    const placeholder = document.createElement("option");
    placeholder.value = "";
    placeholder.textContent = "jump to preset…";
    select.appendChild(placeholder);
    for (const label of Object.keys(node.dropdown_presets)) {
      const option = document.createElement("option");
      option.value = label;
      option.textContent = label;
      select.appendChild(option);
    }
    select.addEventListener("change", () => {
      if (select.value) this.callbacks.applyPreset(id, select.value);
    });
    return select;
  }
}
