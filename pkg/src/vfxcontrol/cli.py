"""Headless command-line driver for the full workflow.

`vfxctl run` loads a scene, optionally submits a prompt through the fixture
or live provider, applies control writes, steps the simulation, and dumps
frames plus a run manifest; identical configuration, seed, and transcripts
produce byte-identical artifacts. `vfxctl serve` starts the HTTP service.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import VfxControlError
from .provider import ProviderConfig
from .service import ServiceConfig, ServiceError, SessionManager

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PIPELINE = 3
EXIT_RANGE = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vfxctl", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a headless scenario")
    run.add_argument("--scene", required=True, help="scene manifest JSON file")
    run.add_argument("--catalog", help="parameter catalog JSON (default: bundled)")
    run.add_argument("--provider", choices=("fixture", "live"), default="fixture")
    run.add_argument("--fixtures", help="transcript directory (default: bundled)")
    run.add_argument("--provider-config", help="endpoint/model config JSON for live mode")
    run.add_argument("--prompt", help="intent to submit before stepping")
    run.add_argument(
        "--sketch", help="sketch submission JSON file to send with the prompt"
    )
    run.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="NODE=VALUE",
        help="set a control node after the panel exists (repeatable)",
    )
    run.add_argument("--steps", type=int, default=0, help="simulation steps to run")
    run.add_argument("--dt", type=float, default=0.05, help="timestep seconds")
    run.add_argument("--seed", type=int, help="override the scene manifest seed")
    run.add_argument("--dump-frames", help="directory for per-step frame JSON files")
    run.add_argument("--save-panel", help="write the active panel document here")
    run.add_argument("--load-panel", help="load a saved panel document before --set")

    serve = sub.add_parser("serve", help="start the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--catalog")
    serve.add_argument("--provider", choices=("fixture", "live"), default="fixture")
    serve.add_argument("--fixtures")
    serve.add_argument("--provider-config")
    return parser


def _fail(stage: str, reason: str, code: int) -> int:
    print(f"error [{stage}]: {reason}", file=sys.stderr)
    return code


def _service_config(args) -> ServiceConfig:
    provider_config = None
    if args.provider_config:
        provider_config = ProviderConfig.from_file(args.provider_config)
    return ServiceConfig(
        provider_mode=args.provider,
        fixture_dir=args.fixtures,
        catalog_path=args.catalog,
        provider_config=provider_config,
    )


def _parse_assignment(text: str) -> tuple[str, float]:
    node, sep, value = text.partition("=")
    if not sep or not node:
        raise ValueError(f"expected NODE=VALUE, got {text!r}")
    return node, float(value)


def run_command(args) -> int:
    try:
        manifest = json.loads(Path(args.scene).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        return _fail("scene", f"cannot read scene manifest: {exc}", EXIT_USAGE)
    if args.seed is not None:
        manifest["seed"] = args.seed

    try:
        manager = SessionManager(_service_config(args))
        session = manager.create_session(manifest)
    except ServiceError as exc:
        return _fail(exc.stage, exc.reason, EXIT_USAGE)

    result = {"template": session.state.template_kind}
    if args.prompt:
        sketch_doc = None
        if args.sketch:
            try:
                sketch_doc = json.loads(Path(args.sketch).read_text())
            except (OSError, json.JSONDecodeError) as exc:
                return _fail("sketch", f"cannot read sketch file: {exc}", EXIT_USAGE)
        try:
            result = session.submit_intent(args.prompt, sketch_doc)
        except ServiceError as exc:
            return _fail(exc.stage, exc.reason, EXIT_PIPELINE)
        except VfxControlError as exc:
            stage = getattr(exc, "stage", "pipeline")
            return _fail(stage, str(exc), EXIT_PIPELINE)
        print(f"intent -> {result['action']} ({result.get('template') or 'panel'})")

    if args.load_panel:
        try:
            session.load_panel(json.loads(Path(args.load_panel).read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            return _fail("load_panel", str(exc), EXIT_USAGE)
        except ServiceError as exc:
            return _fail(exc.stage, exc.reason, EXIT_USAGE)

    for assignment in args.set:
        try:
            node, value = _parse_assignment(assignment)
        except ValueError as exc:
            return _fail("set", str(exc), EXIT_USAGE)
        try:
            response = session.update_control(node, value=value)
        except ServiceError as exc:
            code = EXIT_RANGE if "range" in exc.reason or "max" in exc.reason or "min" in exc.reason else EXIT_USAGE
            return _fail(exc.stage, exc.reason, code)
        changed = len(response["event"]["changes"])
        print(f"set {node}={value} -> {changed} node(s) changed")

    frames = session.run_steps(args.steps, args.dt) if args.steps else []

    if args.dump_frames:
        out = Path(args.dump_frames)
        out.mkdir(parents=True, exist_ok=True)
        for frame in frames:
            path = out / f"frame_{frame['frame']:05d}.json"
            path.write_text(json.dumps(frame, indent=2, sort_keys=True) + "\n")
        run_manifest = {
            "template": session.state.template_kind,
            "seed": session.manifest.seed,
            "prompt": args.prompt,
            "steps": args.steps,
            "dt": args.dt,
            "frame_count": len(frames),
            "final_particle_count": frames[-1]["particle_count"] if frames else 0,
        }
        (out / "run.json").write_text(json.dumps(run_manifest, indent=2, sort_keys=True) + "\n")
        print(f"dumped {len(frames)} frame(s) to {out}")

    if args.save_panel:
        try:
            doc = session.save_panel()
        except ServiceError as exc:
            return _fail(exc.stage, exc.reason, EXIT_USAGE)
        panel_path = Path(args.save_panel)
        panel_path.parent.mkdir(parents=True, exist_ok=True)
        panel_path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        print(f"panel saved to {args.save_panel}")

    return EXIT_OK


def serve_command(args) -> int:
    try:
        import uvicorn
    except ImportError:
        return _fail("serve", "uvicorn is not installed (pip install vfxcontrol[serve])", EXIT_USAGE)
    from .service import create_app

    app = create_app(config=_service_config(args))
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return run_command(args)
    return serve_command(args)


if __name__ == "__main__":
    sys.exit(main())
