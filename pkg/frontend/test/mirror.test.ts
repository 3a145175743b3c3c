// The panel is a pure mirror of the service: after replaying the recorded
// interaction script (drag a concept slider, jump to a preset, switch widget
// modes, lock a node), every mirrored value equals the service's
// authoritative post-update value at every step, and the client never runs
// propagation math of its own.

import { beforeEach, describe, expect, it, vi } from "vitest";

import type { ControlUpdateResponse } from "../src/types.js";
import { dragSlider, fixture, mountPanel, type InteractionStep } from "./helpers.js";

const steps = fixture<InteractionStep[]>("interactions_playful.json");

beforeEach(() => {
  document.body.innerHTML = "";
});

function okResponse(step: InteractionStep): ControlUpdateResponse {
  return step.response as ControlUpdateResponse;
}

describe("panel mirror", () => {
  it("replays the scripted session with values identical to the service at every step", () => {
    const { store, view, sent } = mountPanel();
    for (const step of steps) {
      if (step.kind === "set") {
        const normalized = store.normalize(step.node, step.body.value!);
        dragSlider(view, store, step.node, normalized);
        const last = sent.at(-1)!;
        expect(last.node).toBe(step.node);
        expect((last.body as { value: number }).value).toBeCloseTo(step.body.value!, 9);
        store.applySyncEvent(okResponse(step).event);
      } else if (step.kind === "preset") {
        store.setMode(step.node, "dropdown");
        const select = view
          .element(step.node)
          .querySelector("select.preset-dropdown") as HTMLSelectElement;
        select.value = step.body.preset!;
        select.dispatchEvent(new Event("change"));
        expect(sent.at(-1)).toEqual({ node: step.node, body: { preset: step.body.preset } });
        store.applySyncEvent(okResponse(step).event);
      } else if (step.kind === "lock") {
        const lockButton = view.element(step.node).querySelector(".lock-toggle") as HTMLElement;
        lockButton.click();
        expect(sent.at(-1)).toEqual({ node: step.node, body: { locked: true } });
        store.setLocked(step.node, true);
      } else if (step.kind === "set_rejected_locked") {
        // locked widgets reject drag input client-side: nothing is sent
        const sentBefore = sent.length;
        dragSlider(view, store, step.node, 0.9);
        expect(sent.length).toBe(sentBefore);
        // the recorded service response confirms the server agrees
        expect(step.status).toBe(409);
        continue;
      }
      if (step.values_after) {
        for (const [nodeId, value] of Object.entries(step.values_after)) {
          expect(store.node(nodeId).value, `node ${nodeId} after ${step.kind} ${step.node}`).toBe(
            value,
          );
        }
      }
    }
  });

  it("keeps widget mode across sync events and shows the same value in each mode", () => {
    const { store, view } = mountPanel();
    const nodeId = "velocity_theta";
    const before = store.node(nodeId).value;
    store.setMode(nodeId, "discrete");
    expect(view.element(nodeId).querySelector(".slider-discrete")).toBeTruthy();
    // a sync event arriving must not flip the widget back
    const setStep = steps.find((s) => s.kind === "set" && s.node === "vibrancy")!;
    store.applySyncEvent(okResponse(setStep).event);
    expect(store.node(nodeId).mode).toBe("discrete");
    expect(view.element(nodeId).querySelector(".slider-discrete")).toBeTruthy();
    // switching modes never changes the stored value
    store.setMode(nodeId, "dropdown");
    store.setMode(nodeId, "continuous");
    if (!okResponse(setStep).event.changes.some((c) => c.node_id === nodeId)) {
      expect(store.node(nodeId).value).toBe(before);
    }
  });

  it("discrete mode snaps the display to the nearest step label without changing the value", () => {
    const { store, view } = mountPanel();
    const nodeId = "vibrancy"; // labels: Muted Glow .. Radiant Burst
    const labels = store.node(nodeId).step_labels;
    store.node(nodeId).value = 0.52;
    store.setMode(nodeId, "discrete");
    const shown = view.displayedValue(nodeId);
    const expected = labels[Math.round(0.52 * (labels.length - 1))];
    expect(shown).toBe(expected);
    expect(store.node(nodeId).value).toBe(0.52); // display-only snap
  });

  it("never moves the widget the user is dragging", () => {
    const { store, view } = mountPanel();
    const slider = view.element("vibrancy").querySelector("input[type=range]") as HTMLInputElement;
    slider.dispatchEvent(new Event("pointerdown")); // drag in progress
    const held = store.node("vibrancy").value;
    const setStep = steps.find((s) => s.kind === "set" && s.node === "vibrancy")!;
    const applied = store.applySyncEvent(okResponse(setStep).event);
    expect(applied).not.toContain("vibrancy");
    expect(store.node("vibrancy").value).toBe(held);
    store.endDrag();
  });

  it("ignores events for unknown nodes with a console warning", () => {
    const { store } = mountPanel();
    const warn = vi.spyOn(console, "warn").mockImplementation(() => {});
    const applied = store.applySyncEvent({
      origin: "ghost",
      iterations: 0,
      residual: 0,
      changes: [{ node_id: "ghost", old: 0, new: 1, old_raw: 0, new_raw: 1 }],
      technical_writes: [],
    });
    expect(applied).toEqual([]);
    expect(warn).toHaveBeenCalledOnce();
    warn.mockRestore();
  });

  it("renders locked nodes with a lock indicator and disabled input", () => {
    const { store, view } = mountPanel();
    store.setLocked("alpha_end", true);
    const el = view.element("alpha_end");
    expect(el.classList.contains("locked")).toBe(true);
    expect((el.querySelector(".lock-toggle") as HTMLElement).textContent).toBe("🔒");
    const slider = el.querySelector("input[type=range]") as HTMLInputElement;
    expect(slider.disabled).toBe(true);
  });
});
