// Canvas rendering of streamed simulation frames over the scene.
//
// Fixed orthographic camera: world x maps to screen x around the canvas
// center, world y maps upward from a ground line, z is ignored. Particles
// draw as filled circles with the frame's interpolated alpha/color/scale.

import type { FrameDoc, SceneObject } from "./types.js";

// The subset of CanvasRenderingContext2D the renderer touches; tests supply
// a recording fake since jsdom has no real 2D context.
export interface Context2DLike {
  globalAlpha: number;
  fillStyle: string;
  clearRect(x: number, y: number, w: number, h: number): void;
  fillRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  fill(): void;
  fillText(text: string, x: number, y: number): void;
}

export interface Camera {
  scale: number;
  groundOffset: number;
}

export const DEFAULT_CAMERA: Camera = { scale: 8, groundOffset: 40 };

export class FrameRenderer {
  constructor(
    private ctx: Context2DLike,
    private width: number,
    private height: number,
    private scene: SceneObject[],
    private camera: Camera = DEFAULT_CAMERA,
  ) {}

  projectX(x: number): number {
    return this.width / 2 + x * this.camera.scale;
  }

  projectY(y: number): number {
    return this.height - this.camera.groundOffset - y * this.camera.scale;
  }

  /** Draw one frame; returns the number of particle glyphs drawn. */
  render(frame: FrameDoc): number {
    const ctx = this.ctx;
    ctx.globalAlpha = 1;
    ctx.fillStyle = "#10141c";
    ctx.clearRect(0, 0, this.width, this.height);
    ctx.fillRect(0, 0, this.width, this.height);

    for (const object of this.scene) {
      ctx.globalAlpha = 1;
      ctx.fillStyle = "#3a4154";
      const sx = this.projectX(object.position[0]);
      const sy = this.projectY(object.position[1]);
      ctx.fillRect(sx - 6, sy - 6, 12, 12);
      ctx.fillText(object.name, sx + 8, sy);
    }

    let glyphs = 0;
    for (const particle of frame.particles) {
      const [r, g, b] = particle.color;
      ctx.globalAlpha = Math.min(1, Math.max(0, particle.alpha));
      ctx.fillStyle = `rgb(${Math.round(r)}, ${Math.round(g)}, ${Math.round(b)})`;
      ctx.beginPath();
      ctx.arc(
        this.projectX(particle.position[0]),
        this.projectY(particle.position[1]),
        Math.max(0.5, particle.scale * 3),
        0,
        Math.PI * 2,
      );
      ctx.fill();
      glyphs += 1;
    }
    return glyphs;
  }
}
