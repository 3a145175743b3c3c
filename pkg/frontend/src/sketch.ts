// Sketch capture over the scene canvas.
//
// Strokes drawn with an active brush carry that brush's id; strokes drawn
// with no brush selected are untagged annotations. The submission lists the
// descriptors (color + functionality) of every brush actually used, in
// first-use order, so intent decomposition can read the user's tool choices.

import type { Brush, SketchSubmission, StrokeDoc } from "./types.js";

export class SketchCapture {
  activeBrush: number | null = null;
  private strokes: StrokeDoc[] = [];
  private current: StrokeDoc | null = null;

  constructor(private palette: Brush[]) {}

  setPalette(palette: Brush[]): void {
    this.palette = palette;
    this.activeBrush = null;
  }

  selectBrush(brushid: number | null): void {
    if (brushid !== null && !this.palette.some((b) => b.brushid === brushid)) {
      throw new Error(`brush ${brushid} is not in the palette`);
    }
    this.activeBrush = brushid;
  }

  beginStroke(x: number, y: number): void {
    this.current = { points: [[x, y]], brush_id: this.activeBrush };
  }

  extendStroke(x: number, y: number): void {
    this.current?.points.push([x, y]);
  }

  endStroke(): void {
    if (this.current && this.current.points.length >= 2) {
      this.strokes.push(this.current);
    }
    this.current = null;
  }

  clear(): void {
    this.strokes = [];
    this.current = null;
  }

  get strokeCount(): number {
    return this.strokes.length;
  }

  /** Submission for the next intent; null when nothing was drawn. */
  buildSubmission(): SketchSubmission | null {
    if (this.strokes.length === 0) return null;
    const usedIds: number[] = [];
    for (const stroke of this.strokes) {
      if (stroke.brush_id !== null && !usedIds.includes(stroke.brush_id)) {
        usedIds.push(stroke.brush_id);
      }
    }
    const used_brushes = usedIds.map((id) => {
      const brush = this.palette.find((b) => b.brushid === id)!;
      return { color: brush.color, functionality: brush.functionality };
    });
    return {
      strokes: this.strokes.map((s) => ({ points: [...s.points], brush_id: s.brush_id })),
      used_brushes,
    };
  }
}
