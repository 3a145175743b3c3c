// Wire types mirroring the service's JSON documents.

export interface Brush {
  brushid: number;
  functionality: string;
  color: string;
  icon: string;
}

export interface ControlRangeDoc {
  min: number;
  max: number;
}

export interface PanelNodeDoc {
  id: string;
  name: string;
  level: "concept" | "attribute" | "technical";
  description: string;
  range: ControlRangeDoc;
  value: number; // normalized [0,1]
  children: string[];
  child_weights: Record<string, number>;
  step_labels: string[];
  dropdown_presets: Record<string, Record<string, number>>;
  locked: boolean;
}

export interface PanelDoc {
  version: string;
  panel_name: string;
  roots: string[];
  bindings: Record<string, string>;
  nodes: Record<string, PanelNodeDoc>;
}

export interface NodeChange {
  node_id: string;
  old: number;
  new: number;
  old_raw: number;
  new_raw: number;
}

export interface SyncEventDoc {
  origin: string;
  iterations: number;
  residual: number;
  changes: NodeChange[];
  technical_writes: [string, number][];
}

export interface ControlUpdateResponse {
  seq: number;
  event: SyncEventDoc;
}

export interface ParticleView {
  position: [number, number, number];
  velocity: [number, number, number];
  alpha: number;
  color: [number, number, number];
  scale: number;
}

export interface FrameDoc {
  frame?: number;
  sim_time: number;
  particle_count: number;
  particles: ParticleView[];
  metrics: {
    mean_position: [number, number, number];
    mean_speed: number;
    mean_alpha: number;
  };
}

export interface SceneObject {
  name: string;
  position: [number, number, number];
}

export interface StrokeDoc {
  points: [number, number][];
  brush_id: number | null;
}

export interface SketchSubmission {
  strokes: StrokeDoc[];
  used_brushes: { color: string; functionality: string }[];
}

export type WidgetMode = "continuous" | "discrete" | "dropdown";
