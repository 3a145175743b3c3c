import { readFileSync } from "node:fs";
import { join } from "node:path";

import { PanelStore } from "../src/panelStore.js";
import { PanelView, type ControlCallbacks } from "../src/widgets.js";
import type { ControlUpdateResponse, PanelDoc } from "../src/types.js";

const FIXTURES = join(__dirname, "fixtures");

export function fixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(FIXTURES, name), "utf-8")) as T;
}

export interface InteractionStep {
  kind: string;
  node: string;
  body: { value?: number; preset?: string; locked?: boolean };
  status: number;
  response: ControlUpdateResponse | { stage: string; reason: string };
  values_after?: Record<string, number>;
}

/** Store + mounted widget view over the recorded playful panel, plus a log
 * of what the UI tried to send to the service. */
export function mountPanel(): {
  store: PanelStore;
  view: PanelView;
  container: HTMLElement;
  sent: { node: string; body: object }[];
} {
  const panel = fixture<PanelDoc>("panel_playful.json");
  const store = new PanelStore();
  const sent: { node: string; body: object }[] = [];
  const callbacks: ControlCallbacks = {
    commitValue: (node, raw) => sent.push({ node, body: { value: raw } }),
    applyPreset: (node, label) => sent.push({ node, body: { preset: label } }),
    toggleLock: (node, locked) => sent.push({ node, body: { locked } }),
  };
  const container = document.createElement("div");
  document.body.appendChild(container);
  store.load(panel);
  const view = new PanelView(container, store, callbacks);
  view.mount();
  return { store, view, container, sent };
}

/** Simulate a full slider drag-and-release on a node's continuous slider. */
export function dragSlider(
  view: PanelView,
  store: PanelStore,
  nodeId: string,
  normalized: number,
): void {
  const slider = view.element(nodeId).querySelector("input[type=range]") as HTMLInputElement;
  slider.dispatchEvent(new Event("pointerdown"));
  slider.value = String(normalized);
  slider.dispatchEvent(new Event("input"));
  slider.dispatchEvent(new Event("change"));
}
