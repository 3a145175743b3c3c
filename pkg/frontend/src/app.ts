// Browser entry point: wires the service client, the particle view, the
// brush palette + sketch canvas, the prompt box, and the synchronized panel.

import { HttpServiceClient } from "./client.js";
import { PanelStore } from "./panelStore.js";
import { FrameRenderer } from "./renderer.js";
import { SketchCapture } from "./sketch.js";
import type { Brush, FrameDoc, SceneObject } from "./types.js";
import { PanelView } from "./widgets.js";

const SERVICE_URL = (window as any).VFXCONTROL_SERVICE ?? "http://127.0.0.1:8000";

const DEFAULT_SCENE = {
  template: "fountain",
  seed: 7,
  objects: [
    { name: "fountain_basin", position: [0, 0, 0] },
    { name: "garden_lamp", position: [4, 0, 2] },
  ],
};

async function boot(): Promise<void> {
  const client = new HttpServiceClient(SERVICE_URL);
  const store = new PanelStore();
  const sketch = new SketchCapture([]);

  const view = document.getElementById("view") as HTMLCanvasElement;
  const overlay = document.getElementById("sketch") as HTMLCanvasElement;
  const paletteBox = document.getElementById("palette")!;
  const panelBox = document.getElementById("panel")!;
  const promptInput = document.getElementById("prompt") as HTMLInputElement;
  const sendButton = document.getElementById("send")!;
  const statusLine = document.getElementById("status")!;

  const sessionId = await client.createSession(DEFAULT_SCENE);
  statusLine.textContent = `session ${sessionId.slice(0, 8)} - fountain scene`;

  // sound cast: the renderer only ever writes string fillStyles
  const viewCtx = view.getContext("2d")! as unknown as import("./renderer.js").Context2DLike;
  const renderer = new FrameRenderer(
    viewCtx,
    view.width,
    view.height,
    DEFAULT_SCENE.objects as SceneObject[],
  );

  const panelView = new PanelView(panelBox, store, {
    commitValue: async (nodeId, raw) => {
      const response = await client.updateControl(sessionId, nodeId, { value: raw });
      store.applySyncEvent(response.event);
    },
    applyPreset: async (nodeId, label) => {
      const response = await client.updateControl(sessionId, nodeId, { preset: label });
      store.applySyncEvent(response.event);
    },
    toggleLock: async (nodeId, locked) => {
      await client.updateControl(sessionId, nodeId, { locked });
      store.setLocked(nodeId, locked);
    },
  });

  const renderPalette = (brushes: Brush[]) => {
    sketch.setPalette(brushes);
    paletteBox.innerHTML = "";
    for (const brush of brushes) {
      const button = document.createElement("button");
      button.className = "brush";
      button.style.borderColor = brush.color;
      button.textContent = `${brush.icon} ${brush.functionality}`;
      button.addEventListener("click", () => {
        sketch.selectBrush(sketch.activeBrush === brush.brushid ? null : brush.brushid);
        for (const el of paletteBox.querySelectorAll(".brush")) el.classList.remove("active");
        if (sketch.activeBrush !== null) button.classList.add("active");
      });
      paletteBox.appendChild(button);
    }
  };
  renderPalette(await client.getPalette(sessionId));

  // sketch capture on the overlay canvas
  const overlayCtx = overlay.getContext("2d")!;
  let drawing = false;
  const canvasPoint = (e: PointerEvent): [number, number] => {
    const rect = overlay.getBoundingClientRect();
    return [e.clientX - rect.left, e.clientY - rect.top];
  };
  overlay.addEventListener("pointerdown", (e) => {
    drawing = true;
    const [x, y] = canvasPoint(e);
    sketch.beginStroke(x, y);
    overlayCtx.beginPath();
    overlayCtx.moveTo(x, y);
  });
  overlay.addEventListener("pointermove", (e) => {
    if (!drawing) return;
    const [x, y] = canvasPoint(e);
    sketch.extendStroke(x, y);
    const active = sketch.activeBrush;
    overlayCtx.strokeStyle = active
      ? (sketch as any).palette?.find?.((b: Brush) => b.brushid === active)?.color ?? "#ffffff"
      : "#ffffff";
    overlayCtx.lineTo(x, y);
    overlayCtx.stroke();
  });
  overlay.addEventListener("pointerup", () => {
    drawing = false;
    sketch.endStroke();
  });

  sendButton.addEventListener("click", async () => {
    const prompt = promptInput.value.trim();
    if (!prompt) return;
    statusLine.textContent = "generating…";
    try {
      const result = await client.submitIntent(sessionId, prompt, sketch.buildSubmission());
      if (result.action === "edit" && result.panel) {
        store.load(result.panel);
        panelView.mount();
        statusLine.textContent = `panel: ${result.panel.panel_name}`;
      } else {
        statusLine.textContent = `new system: ${result.template}`;
        renderPalette(await client.getPalette(sessionId));
      }
      sketch.clear();
      overlayCtx.clearRect(0, 0, overlay.width, overlay.height);
    } catch (error) {
      statusLine.textContent = String(error);
    }
  });

  // advance the simulation and mirror frames as they land in the journal
  let lastFrame = -1;
  client.streamFrames(sessionId, lastFrame, (frame: FrameDoc) => {
    lastFrame = frame.frame ?? lastFrame;
    renderer.render(frame);
  });
  setInterval(() => {
    void client.step(sessionId, 1, 1 / 30);
  }, 1000 / 30);
}

void boot();
