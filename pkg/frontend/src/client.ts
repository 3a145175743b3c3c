// HTTP + SSE transport to the session service. The UI talks to the service
// through this interface only; tests substitute a recorded-fixture fake.

import type {
  Brush,
  ControlUpdateResponse,
  FrameDoc,
  PanelDoc,
  SketchSubmission,
} from "./types.js";

export interface ServiceTransport {
  createSession(manifest: unknown): Promise<string>;
  getPalette(sessionId: string): Promise<Brush[]>;
  refreshPalette(sessionId: string): Promise<Brush[]>;
  submitIntent(
    sessionId: string,
    prompt: string,
    sketch: SketchSubmission | null,
  ): Promise<{ action: string; panel?: PanelDoc; template?: string }>;
  updateControl(
    sessionId: string,
    nodeId: string,
    body: { value?: number; preset?: string; locked?: boolean },
  ): Promise<ControlUpdateResponse>;
  step(sessionId: string, steps: number, dt: number): Promise<FrameDoc[]>;
  streamFrames(
    sessionId: string,
    after: number,
    onFrame: (frame: FrameDoc) => void,
  ): () => void;
}

export class HttpServiceClient implements ServiceTransport {
  constructor(private baseUrl: string) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(`${this.baseUrl}${path}`, {
      method,
      headers: body === undefined ? undefined : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const doc = await response.json();
    if (!response.ok) {
      throw new Error(`[${doc.stage ?? response.status}] ${doc.reason ?? "request failed"}`);
    }
    return doc as T;
  }

  async createSession(manifest: unknown): Promise<string> {
    const doc = await this.request<{ session_id: string }>("POST", "/sessions", manifest);
    return doc.session_id;
  }

  async getPalette(sessionId: string): Promise<Brush[]> {
    const doc = await this.request<{ brushes: Brush[] }>("GET", `/sessions/${sessionId}/palette`);
    return doc.brushes;
  }

  async refreshPalette(sessionId: string): Promise<Brush[]> {
    const doc = await this.request<{ brushes: Brush[] }>(
      "POST",
      `/sessions/${sessionId}/palette/refresh`,
    );
    return doc.brushes;
  }

  submitIntent(sessionId: string, prompt: string, sketch: SketchSubmission | null) {
    return this.request<{ action: string; panel?: PanelDoc; template?: string }>(
      "POST",
      `/sessions/${sessionId}/intent`,
      sketch ? { prompt, sketch } : { prompt },
    );
  }

  updateControl(
    sessionId: string,
    nodeId: string,
    body: { value?: number; preset?: string; locked?: boolean },
  ) {
    return this.request<ControlUpdateResponse>(
      "POST",
      `/sessions/${sessionId}/controls/${nodeId}`,
      body,
    );
  }

  async step(sessionId: string, steps: number, dt: number): Promise<FrameDoc[]> {
    const doc = await this.request<{ frames: FrameDoc[] }>(
      "POST",
      `/sessions/${sessionId}/step`,
      { steps, dt },
    );
    return doc.frames;
  }

  streamFrames(sessionId: string, after: number, onFrame: (frame: FrameDoc) => void): () => void {
    const source = new EventSource(
      `${this.baseUrl}/sessions/${sessionId}/stream?after=${after}&timeout=3600`,
    );
    source.onmessage = (message) => onFrame(JSON.parse(message.data) as FrameDoc);
    return () => source.close();
  }
}
