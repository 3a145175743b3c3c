// Client-side mirror of the service's control panel.
//
// The store never runs propagation math: node values change only when a
// service SyncEvent says so (or when a panel document is loaded). The one
// node the user is actively dragging is shielded from incoming events so
// their input is never overwritten mid-gesture.

import type { PanelDoc, PanelNodeDoc, SyncEventDoc, WidgetMode } from "./types.js";

export interface MirrorNode extends PanelNodeDoc {
  mode: WidgetMode;
}

export type StoreListener = (changedIds: string[]) => void;

export class PanelStore {
  panelName = "";
  roots: string[] = [];
  nodes = new Map<string, MirrorNode>();
  draggingNode: string | null = null;
  private listeners: StoreListener[] = [];

  load(panel: PanelDoc): void {
    this.panelName = panel.panel_name;
    this.roots = [...panel.roots];
    this.nodes.clear();
    for (const [id, doc] of Object.entries(panel.nodes)) {
      const mode: WidgetMode = "continuous";
      this.nodes.set(id, { ...doc, mode });
    }
    this.emit([...this.nodes.keys()]);
  }

  node(id: string): MirrorNode {
    const node = this.nodes.get(id);
    if (!node) throw new Error(`unknown node ${id}`);
    return node;
  }

  has(id: string): boolean {
    return this.nodes.has(id);
  }

  /** Apply a service SyncEvent verbatim. Returns the ids actually updated. */
  applySyncEvent(event: SyncEventDoc): string[] {
    const applied: string[] = [];
    for (const change of event.changes) {
      const node = this.nodes.get(change.node_id);
      if (!node) {
        console.warn(`sync event for unknown node ${change.node_id}; ignored`);
        continue;
      }
      if (this.draggingNode === change.node_id) {
        continue; // never move the widget under the user's pointer
      }
      node.value = change.new;
      applied.push(change.node_id);
    }
    this.emit(applied);
    return applied;
  }

  setLocked(id: string, locked: boolean): void {
    this.node(id).locked = locked;
    this.emit([id]);
  }

  setMode(id: string, mode: WidgetMode): void {
    this.node(id).mode = mode;
    this.emit([id]);
  }

  beginDrag(id: string): boolean {
    if (this.node(id).locked) return false;
    this.draggingNode = id;
    return true;
  }

  endDrag(): void {
    this.draggingNode = null;
  }

  /** Display-space value (affine mapping of the mirrored normalized value). */
  rawValue(id: string): number {
    const node = this.node(id);
    return node.range.min + node.value * (node.range.max - node.range.min);
  }

  normalize(id: string, raw: number): number {
    const node = this.node(id);
    const v = (raw - node.range.min) / (node.range.max - node.range.min);
    return Math.min(1, Math.max(0, v));
  }

  denormalize(id: string, value: number): number {
    const node = this.node(id);
    return node.range.min + value * (node.range.max - node.range.min);
  }

  /** Index of the step label nearest the current value (display-only snap). */
  nearestStepIndex(id: string): number {
    const node = this.node(id);
    const n = node.step_labels.length;
    if (n === 0) return 0;
    if (n === 1) return 0;
    return Math.min(n - 1, Math.max(0, Math.round(node.value * (n - 1))));
  }

  values(): Record<string, number> {
    const out: Record<string, number> = {};
    for (const [id, node] of this.nodes) out[id] = node.value;
    return out;
  }

  onChange(listener: StoreListener): void {
    this.listeners.push(listener);
  }

  private emit(changed: string[]): void {
    if (changed.length === 0) return;
    for (const listener of this.listeners) listener(changed);
  }
}
