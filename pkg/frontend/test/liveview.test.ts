// Live view: a parameter change made mid-stream shows up in the rendered
// frames within two stream frames. The fixture is a recorded service run:
// two frames, then force_x is pushed to its goal, then four more frames.

import { describe, expect, it } from "vitest";

import { FrameRenderer, type Context2DLike } from "../src/renderer.js";
import type { FrameDoc, SceneObject } from "../src/types.js";
import { fixture } from "./helpers.js";

class MeanXContext implements Context2DLike {
  globalAlpha = 1;
  fillStyle = "";
  xs: number[] = [];
  clearRect(): void {
    this.xs = [];
  }
  fillRect(): void {}
  beginPath(): void {}
  arc(x: number): void {
    this.xs.push(x);
  }
  fill(): void {}
  fillText(): void {}
  meanX(): number {
    return this.xs.reduce((a, b) => a + b, 0) / this.xs.length;
  }
}

const scene = fixture<{ objects: SceneObject[] }>("scene.json").objects;
const recording = fixture<{ change_after_frame: number; frames: FrameDoc[] }>(
  "frames_force_change.json",
);

describe("live view", () => {
  it("reflects a parameter change within two stream frames", () => {
    const ctx = new MeanXContext();
    const renderer = new FrameRenderer(ctx, 640, 720, scene);
    const meanXs = recording.frames.map((frame) => {
      renderer.render(frame);
      return ctx.meanX();
    });
    const changeAt = recording.change_after_frame; // change applied after this index
    // sideways drift per frame before the change vs. within two frames after
    const driftBefore = meanXs[changeAt] - meanXs[changeAt - 1];
    const driftAfter = meanXs[changeAt + 2] - meanXs[changeAt + 1];
    expect(driftAfter).toBeGreaterThan(driftBefore + 0.05);
  });

  it("renders every streamed frame with its own particle population", () => {
    const ctx = new MeanXContext();
    const renderer = new FrameRenderer(ctx, 640, 720, scene);
    for (const frame of recording.frames) {
      expect(renderer.render(frame)).toBe(frame.particle_count);
    }
  });
});
