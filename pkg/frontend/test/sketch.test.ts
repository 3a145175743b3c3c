// Sketch capture: brush tagging, used-brush descriptors, annotations, clearing.

import { describe, expect, it } from "vitest";

import { SketchCapture } from "../src/sketch.js";
import type { Brush } from "../src/types.js";
import { fixture } from "./helpers.js";

const palette = fixture<{ brushes: Brush[] }>("palette.json").brushes;

function draw(capture: SketchCapture, points: [number, number][]): void {
  capture.beginStroke(...points[0]);
  for (const p of points.slice(1)) capture.extendStroke(...p);
  capture.endStroke();
}

describe("sketch capture", () => {
  it("tags strokes with the active brush and lists its descriptor", () => {
    const capture = new SketchCapture(palette);
    capture.selectBrush(1); // the wind brush
    draw(capture, [[0.2, 0.4], [0.7, 0.45]]);
    const submission = capture.buildSubmission()!;
    expect(submission.strokes).toHaveLength(1);
    expect(submission.strokes[0].brush_id).toBe(1);
    expect(submission.used_brushes).toEqual([
      { color: palette[0].color, functionality: palette[0].functionality },
    ]);
  });

  it("lists each used brush once, in first-use order", () => {
    const capture = new SketchCapture(palette);
    capture.selectBrush(3);
    draw(capture, [[0, 0], [1, 1]]);
    capture.selectBrush(1);
    draw(capture, [[1, 0], [0, 1]]);
    capture.selectBrush(3);
    draw(capture, [[2, 2], [3, 3]]);
    const submission = capture.buildSubmission()!;
    expect(submission.strokes).toHaveLength(3);
    expect(submission.used_brushes.map((b) => b.functionality)).toEqual([
      palette[2].functionality,
      palette[0].functionality,
    ]);
  });

  it("records untagged annotation strokes when no brush is active", () => {
    const capture = new SketchCapture(palette);
    draw(capture, [[0, 0], [2, 2]]);
    const submission = capture.buildSubmission()!;
    expect(submission.strokes[0].brush_id).toBeNull();
    expect(submission.used_brushes).toEqual([]);
  });

  it("clearing the canvas empties the submission", () => {
    const capture = new SketchCapture(palette);
    capture.selectBrush(2);
    draw(capture, [[0, 0], [1, 1]]);
    capture.clear();
    expect(capture.buildSubmission()).toBeNull();
  });

  it("rejects selecting a brush outside the palette", () => {
    const capture = new SketchCapture(palette);
    expect(() => capture.selectBrush(99)).toThrow(/not in the palette/);
  });

  it("drops degenerate single-point strokes", () => {
    const capture = new SketchCapture(palette);
    capture.beginStroke(0.5, 0.5);
    capture.endStroke();
    expect(capture.buildSubmission()).toBeNull();
  });
});
