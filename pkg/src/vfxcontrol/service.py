"""Session-oriented service tying engine, control tree, and pipeline together.

Each session owns one particle system, an optional generated panel, and an
optional brush palette. Every mutation goes through the session's lock in
arrival order; snapshots and stream frames are plain dict copies, so readers
never observe a half-applied update. The FastAPI app at the bottom exposes
the same Session/SessionManager core the CLI drives in-process.
"""

from __future__ import annotations

import json
import math
import threading
import time
import uuid
from dataclasses import dataclass, field
from typing import Any, Iterator, Mapping

from .catalog import Catalog, load_catalog, validate_assignment
from .engine import (
    TEMPLATE_KINDS,
    SystemState,
    apply_parameter,
    instantiate_template,
    snapshot,
    step,
)
from .errors import (
    LockedNodeError,
    PipelineError,
    ProviderError,
    RangeViolationError,
    TreeError,
    UnknownNodeError,
    VfxControlError,
)
from .pipeline import (
    GenerationContext,
    SketchData,
    SketchStroke,
    decide_add_or_edit,
    generate_brushes,
    load_icon_vocabulary,
    run_edit_pipeline,
)
from .provider import FixtureProvider, LiveProvider, Provider, ProviderConfig, bundled_fixture_dir
from .schemas import BrushSpec
from .tree import ControlTree, PanelConfig, SyncEvent, panel_from_dict, panel_to_dict

PANEL_FORMAT = "vfxcontrol-panel/1"
FRAME_JOURNAL_LIMIT = 512


class ServiceError(VfxControlError):
    """Error with an HTTP-ish status and a stage label for the response body."""

    def __init__(self, status: int, stage: str, reason: str):
        super().__init__(f"[{stage}] {reason}")
        self.status = status
        self.stage = stage
        self.reason = reason


@dataclass
class SceneManifest:
    template: str
    seed: int = 0
    objects: list[dict] = field(default_factory=list)

    @classmethod
    def from_dict(cls, doc: Mapping[str, Any]) -> "SceneManifest":
        try:
            template = doc["template"]
        except KeyError:
            raise ServiceError(400, "scene", "manifest needs a 'template' field") from None
        if template not in TEMPLATE_KINDS:
            raise ServiceError(
                400, "scene", f"unknown template {template!r}; available: {', '.join(TEMPLATE_KINDS)}"
            )
        objects = []
        for i, obj in enumerate(doc.get("objects", [])):
            name = obj.get("name")
            position = obj.get("position")
            if not name or not isinstance(position, (list, tuple)) or len(position) != 3:
                raise ServiceError(400, "scene", f"object {i} needs a name and a 3-vector position")
            coords = [float(c) for c in position]
            if not all(math.isfinite(c) for c in coords):
                raise ServiceError(400, "scene", f"object {name!r} has a non-finite position")
            objects.append({"name": str(name), "position": coords})
        return cls(template=template, seed=int(doc.get("seed", 0)), objects=objects)

    def to_dict(self) -> dict:
        return {"template": self.template, "seed": self.seed, "objects": list(self.objects)}


def parse_sketch(doc: Mapping[str, Any] | None, palette: list[BrushSpec] | None) -> SketchData | None:
    """Validate a sketch submission against the session palette and derive
    the used-brush descriptors from the palette entries themselves."""
    if doc is None:
        return None
    by_id = {b.brushid: b for b in palette} if palette else {}
    strokes: list[SketchStroke] = []
    used_ids: list[int] = []
    for i, stroke in enumerate(doc.get("strokes", [])):
        brush_id = stroke.get("brush_id")
        if brush_id is not None:
            if brush_id not in by_id:
                raise ServiceError(400, "sketch", f"stroke {i} references unknown brush id {brush_id}")
            if brush_id not in used_ids:
                used_ids.append(brush_id)
        points = [(float(p[0]), float(p[1])) for p in stroke.get("points", [])]
        strokes.append(SketchStroke(points=points, brush_id=brush_id))
    if not strokes:
        return None
    used = [
        {"color": by_id[i].color, "functionality": by_id[i].functionality} for i in used_ids
    ]
    return SketchData(strokes=strokes, used_brushes=used)


class Session:
    """One scene + one particle system + at most one active panel."""

    def __init__(
        self,
        session_id: str,
        manifest: SceneManifest,
        catalog: Catalog,
        provider: Provider,
        icon_vocabulary: list[str],
    ):
        self.id = session_id
        self.catalog = catalog
        self.provider = provider
        self.icon_vocabulary = icon_vocabulary
        self.lock = threading.Lock()
        self.seq = 0
        self.manifest = manifest
        self.state: SystemState = instantiate_template(manifest.template, catalog, manifest.seed)
        self.tree: ControlTree | None = None
        self.palette: list[BrushSpec] | None = None
        self.frames: list[dict] = []
        self.frame_counter = 0
        self.closed = False

    # -- context -----------------------------------------------------------

    def generation_context(self, prompt: str, sketch: SketchData | None = None) -> GenerationContext:
        emitter = self.state.emitters[0]
        return GenerationContext(
            particle_type=self.state.template_kind,
            user_prompt=prompt,
            scene_objects=list(self.manifest.objects),
            emitter_position=(emitter.position_x, emitter.position_y, emitter.position_z),
            sketch=sketch,
            current_values=emitter.as_dict(),
        )

    # -- palette -----------------------------------------------------------

    def get_palette(self) -> list[BrushSpec]:
        with self.lock:
            if self.palette is None:
                self.palette = self._generate_palette()
            return self.palette

    def refresh_palette(self) -> list[BrushSpec]:
        with self.lock:
            self.palette = self._generate_palette()
            return self.palette

    def _generate_palette(self) -> list[BrushSpec]:
        context = self.generation_context(prompt="")
        return generate_brushes(self.provider, context, self.catalog, self.icon_vocabulary)

    # -- intent ------------------------------------------------------------

    def submit_intent(self, prompt: str, sketch_doc: Mapping | None = None) -> dict:
        with self.lock:
            sketch = None
            if sketch_doc is not None:
                palette = self.palette or self._generate_palette()
                self.palette = palette
                sketch = parse_sketch(sketch_doc, palette)
            context = self.generation_context(prompt, sketch)
            decision = decide_add_or_edit(self.provider, context, TEMPLATE_KINDS)
            if decision.should_add_particle:
                self.state = instantiate_template(
                    decision.particle_type, self.catalog, self.manifest.seed
                )
                self.tree = None
                self.palette = None  # regenerated on next request for the new system
                return {
                    "action": "add",
                    "template": decision.particle_type,
                    "reason": decision.reason,
                }
            hierarchy, panel = run_edit_pipeline(self.provider, context, self.catalog)
            self._install_panel(panel)
            return {
                "action": "edit",
                "reason": decision.reason,
                "panel": panel_to_dict(panel),
            }

    def _install_panel(self, panel: PanelConfig) -> None:
        self.tree = ControlTree(panel, write_through=self._write_through)
        # generated defaults reach the engine immediately
        for node_id, parameter in panel.bindings.items():
            self._write_through(parameter, panel.nodes[node_id].raw_value)

    def _write_through(self, parameter: str, raw_value: float) -> None:
        # panel subranges sit inside catalog ranges, but denormalization can
        # land one ulp outside at the ends; clamp the write, never the panel
        clamped = self.catalog.get(parameter).clamp(raw_value)
        apply_parameter(self.state, parameter, clamped, self.catalog)

    # -- controls ------------------------------------------------------------

    def update_control(
        self,
        node_id: str,
        value: float | None = None,
        preset: str | None = None,
        locked: bool | None = None,
    ) -> dict:
        with self.lock:
            if self.tree is None:
                raise ServiceError(409, "update_control", "session has no active panel")
            given = [x is not None for x in (value, preset, locked)]
            if sum(given) != 1:
                raise ServiceError(
                    400, "update_control", "provide exactly one of value, preset, locked"
                )
            try:
                if value is not None:
                    binding = self.tree.panel.bindings.get(node_id)
                    if binding is not None:
                        # technical writes must respect the catalog range even
                        # though the panel subrange would clamp them silently
                        violation = validate_assignment(self.catalog, binding, float(value))
                        if violation is not None:
                            raise ServiceError(
                                400, "update_control", f"range violation: {violation.reason}"
                            )
                    event = self.tree.set_node_value(node_id, float(value))
                elif preset is not None:
                    event = self.tree.apply_preset(node_id, preset)
                else:
                    self.tree.lock_node(node_id, bool(locked))
                    event = SyncEvent(origin=node_id)
            except UnknownNodeError as exc:
                raise ServiceError(404, "update_control", str(exc)) from exc
            except LockedNodeError as exc:
                raise ServiceError(409, "update_control", str(exc)) from exc
            except (TreeError, RangeViolationError) as exc:
                raise ServiceError(400, "update_control", str(exc)) from exc
            self.seq += 1
            return {"seq": self.seq, "event": event_to_dict(event)}

    # -- simulation ------------------------------------------------------------

    def run_steps(self, steps: int, dt: float) -> list[dict]:
        if steps < 0 or dt <= 0:
            raise ServiceError(400, "step", "need steps >= 0 and dt > 0")
        with self.lock:
            produced = []
            for _ in range(steps):
                step(self.state, dt)
                frame = snapshot(self.state).to_dict()
                frame["frame"] = self.frame_counter
                self.frame_counter += 1
                self.frames.append(frame)
                produced.append(frame)
            if len(self.frames) > FRAME_JOURNAL_LIMIT:
                del self.frames[: len(self.frames) - FRAME_JOURNAL_LIMIT]
            return produced

    def latest_frame(self) -> dict:
        with self.lock:
            if self.frames:
                return self.frames[-1]
            frame = snapshot(self.state).to_dict()
            frame["frame"] = -1
            return frame

    def frames_after(self, after: int) -> list[dict]:
        with self.lock:
            return [f for f in self.frames if f["frame"] > after]

    # -- panel persistence --------------------------------------------------------

    def save_panel(self) -> dict:
        with self.lock:
            if self.tree is None:
                raise ServiceError(409, "save_panel", "session has no active panel")
            return {
                "format": PANEL_FORMAT,
                "template_kind": self.state.template_kind,
                "panel": panel_to_dict(self.tree.panel),
            }

    def load_panel(self, doc: Mapping[str, Any]) -> None:
        with self.lock:
            if doc.get("format") != PANEL_FORMAT:
                raise ServiceError(400, "load_panel", f"unsupported panel format {doc.get('format')!r}")
            if doc.get("template_kind") != self.state.template_kind:
                raise ServiceError(
                    409,
                    "load_panel",
                    f"binding mismatch: panel was saved for {doc.get('template_kind')!r}, "
                    f"session runs {self.state.template_kind!r}",
                )
            try:
                panel = panel_from_dict(doc["panel"])
            except (KeyError, TreeError) as exc:
                raise ServiceError(400, "load_panel", f"malformed panel document: {exc}") from exc
            for parameter in panel.bindings.values():
                if parameter not in self.catalog:
                    raise ServiceError(
                        409, "load_panel", f"binding mismatch: unknown parameter {parameter!r}"
                    )
            self._install_panel(panel)

    def panel_dict(self) -> dict:
        with self.lock:
            if self.tree is None:
                raise ServiceError(404, "panel", "session has no active panel")
            return panel_to_dict(self.tree.panel)


def event_to_dict(event: SyncEvent) -> dict:
    return {
        "origin": event.origin,
        "iterations": event.iterations,
        "residual": event.residual,
        "changes": [
            {
                "node_id": c.node_id,
                "old": c.old,
                "new": c.new,
                "old_raw": c.old_raw,
                "new_raw": c.new_raw,
            }
            for c in event.changes
        ],
        "technical_writes": [[name, value] for name, value in event.technical_writes],
    }


@dataclass
class ServiceConfig:
    provider_mode: str = "fixture"  # fixture | live
    fixture_dir: str | None = None  # None -> bundled transcripts
    catalog_path: str | None = None
    icon_path: str | None = None
    provider_config: ProviderConfig | None = None


def build_provider(config: ServiceConfig) -> Provider:
    if config.provider_mode == "fixture":
        directory = config.fixture_dir or bundled_fixture_dir()
        return FixtureProvider(directory)
    if config.provider_mode == "live":
        return LiveProvider(config.provider_config)
    raise ServiceError(400, "config", f"unknown provider mode {config.provider_mode!r}")


class SessionManager:
    def __init__(self, config: ServiceConfig | None = None):
        self.config = config or ServiceConfig()
        self.catalog = load_catalog(self.config.catalog_path)
        self.provider = build_provider(self.config)
        self.icon_vocabulary = load_icon_vocabulary(self.config.icon_path)
        self.sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def create_session(self, manifest_doc: Mapping[str, Any]) -> Session:
        manifest = SceneManifest.from_dict(manifest_doc)
        session = Session(
            session_id=uuid.uuid4().hex,
            manifest=manifest,
            catalog=self.catalog,
            provider=self.provider,
            icon_vocabulary=self.icon_vocabulary,
        )
        with self._lock:
            self.sessions[session.id] = session
        return session

    def get(self, session_id: str) -> Session:
        try:
            return self.sessions[session_id]
        except KeyError:
            raise ServiceError(404, "session", f"unknown session {session_id!r}") from None

    def replace_scene(self, session_id: str, manifest_doc: Mapping[str, Any]) -> Session:
        session = self.get(session_id)
        manifest = SceneManifest.from_dict(manifest_doc)
        with session.lock:
            session.manifest = manifest
            session.state = instantiate_template(manifest.template, self.catalog, manifest.seed)
            session.tree = None
            session.palette = None
            session.frames.clear()
        return session

    def close(self, session_id: str) -> None:
        session = self.get(session_id)
        session.closed = True
        with self._lock:
            self.sessions.pop(session_id, None)


# -- HTTP layer -----------------------------------------------------------------


def create_app(manager: SessionManager | None = None, config: ServiceConfig | None = None):
    from fastapi import Body, FastAPI, Request
    from fastapi.middleware.cors import CORSMiddleware
    from fastapi.responses import JSONResponse, StreamingResponse

    manager = manager or SessionManager(config)
    app = FastAPI(title="vfxcontrol", version="0.1.0")
    app.state.manager = manager
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(ServiceError)
    async def service_error_handler(_request: Request, exc: ServiceError):
        return JSONResponse(
            status_code=exc.status, content={"stage": exc.stage, "reason": exc.reason}
        )

    @app.exception_handler(VfxControlError)
    async def domain_error_handler(_request: Request, exc: VfxControlError):
        stage = getattr(exc, "stage", None) or exc.__class__.__name__
        status = 502 if isinstance(exc, (PipelineError, ProviderError)) else 400
        return JSONResponse(status_code=status, content={"stage": stage, "reason": str(exc)})

    @app.get("/health")
    def health():
        return {"status": "ok", "sessions": len(manager.sessions)}

    @app.post("/sessions", status_code=201)
    def create_session(manifest: dict = Body(...)):
        session = manager.create_session(manifest)
        return {"session_id": session.id, "template": session.state.template_kind}

    @app.delete("/sessions/{session_id}")
    def close_session(session_id: str):
        manager.close(session_id)
        return {"closed": session_id}

    @app.put("/sessions/{session_id}/scene")
    def replace_scene(session_id: str, manifest: dict = Body(...)):
        session = manager.replace_scene(session_id, manifest)
        return {"session_id": session.id, "template": session.state.template_kind}

    @app.get("/sessions/{session_id}/palette")
    def get_palette(session_id: str):
        session = manager.get(session_id)
        return {"brushes": [b.model_dump() for b in session.get_palette()]}

    @app.post("/sessions/{session_id}/palette/refresh")
    def refresh_palette(session_id: str):
        session = manager.get(session_id)
        return {"brushes": [b.model_dump() for b in session.refresh_palette()]}

    @app.post("/sessions/{session_id}/intent")
    def submit_intent(session_id: str, body: dict = Body(...)):
        session = manager.get(session_id)
        prompt = body.get("prompt", "")
        if not prompt:
            raise ServiceError(400, "intent", "prompt must be non-empty")
        return session.submit_intent(prompt, body.get("sketch"))

    @app.get("/sessions/{session_id}/panel")
    def get_panel(session_id: str):
        return manager.get(session_id).panel_dict()

    @app.post("/sessions/{session_id}/controls/{node_id}")
    def update_control(session_id: str, node_id: str, body: dict = Body(...)):
        session = manager.get(session_id)
        return session.update_control(
            node_id,
            value=body.get("value"),
            preset=body.get("preset"),
            locked=body.get("locked"),
        )

    @app.post("/sessions/{session_id}/step")
    def run_steps(session_id: str, body: dict = Body(...)):
        session = manager.get(session_id)
        frames = session.run_steps(int(body.get("steps", 1)), float(body.get("dt", 0.05)))
        return {"frames": frames}

    @app.get("/sessions/{session_id}/frame")
    def latest_frame(session_id: str):
        return manager.get(session_id).latest_frame()

    @app.post("/sessions/{session_id}/panel/save")
    def save_panel(session_id: str):
        return manager.get(session_id).save_panel()

    @app.post("/sessions/{session_id}/panel/load")
    def load_panel(session_id: str, body: dict = Body(...)):
        manager.get(session_id).load_panel(body)
        return {"loaded": True}

    @app.get("/sessions/{session_id}/stream")
    def stream(session_id: str, after: int = -1, max_frames: int = 0, timeout: float = 5.0):
        session = manager.get(session_id)

        def event_stream() -> Iterator[str]:
            cursor = after
            delivered = 0
            deadline = time.monotonic() + timeout
            while True:
                if session.closed:
                    return
                batch = session.frames_after(cursor)
                for frame in batch:
                    cursor = frame["frame"]
                    delivered += 1
                    yield f"data: {json.dumps(frame, sort_keys=True)}\n\n"
                    if max_frames and delivered >= max_frames:
                        return
                if batch:
                    deadline = time.monotonic() + timeout
                elif time.monotonic() > deadline:
                    return
                else:
                    time.sleep(0.01)

        return StreamingResponse(event_stream(), media_type="text/event-stream")

    return app
