"""Export frontend test fixtures from the real service.

Runs the fixture-backed service in process and records panel documents,
control-update responses with the authoritative post-update values, brush
palettes, and frame sequences. The web UI's tests replay these to prove the
panel mirror shows exactly what the service said, with no client-side math.

Usage: python3 scripts/export_ui_fixtures.py
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from fastapi.testclient import TestClient

from vfxcontrol.service import SessionManager, ServiceConfig, create_app

ROOT = Path(__file__).resolve().parents[1]
OUT = ROOT / "frontend" / "test" / "fixtures"

FOUNTAIN_SCENE = json.loads((ROOT / "tests" / "data" / "scene_fountain.json").read_text())


def panel_values(client, session_id):
    panel = client.get(f"/sessions/{session_id}/panel").json()
    return {nid: node["value"] for nid, node in panel["nodes"].items()}


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    manager = SessionManager(ServiceConfig(provider_mode="fixture"))
    client = TestClient(create_app(manager))

    # --- playful panel + scripted interaction sequence -----------------------
    session_id = client.post("/sessions", json=FOUNTAIN_SCENE).json()["session_id"]
    palette = client.get(f"/sessions/{session_id}/palette").json()
    (OUT / "palette.json").write_text(json.dumps(palette, indent=2, sort_keys=True))

    intent = client.post(
        f"/sessions/{session_id}/intent", json={"prompt": "make it more playful"}
    ).json()
    assert intent["action"] == "edit"
    (OUT / "panel_playful.json").write_text(json.dumps(intent["panel"], indent=2, sort_keys=True))

    steps = []

    def record_step(kind, node, body, expect_error=False):
        response = client.post(f"/sessions/{session_id}/controls/{node}", json=body)
        entry = {
            "kind": kind,
            "node": node,
            "body": body,
            "status": response.status_code,
            "response": response.json(),
        }
        if not expect_error:
            assert response.status_code == 200, response.text
            entry["values_after"] = panel_values(client, session_id)
        steps.append(entry)

    record_step("set", "vibrancy", {"value": 80})
    record_step("preset", "dynamic_movement", {"preset": "Whirling Jets"})
    record_step("lock", "alpha_end", {"locked": True})
    record_step("set_rejected_locked", "alpha_end", {"value": 0.3}, expect_error=True)
    record_step("set", "velocity_theta", {"value": 70})
    record_step("set", "opacity_variation", {"value": 65})
    (OUT / "interactions_playful.json").write_text(json.dumps(steps, indent=2, sort_keys=True))

    # --- frame sequence with a mid-stream force change (spray scenario) ------
    session_id = client.post("/sessions", json=FOUNTAIN_SCENE).json()["session_id"]
    client.get(f"/sessions/{session_id}/palette")
    intent = client.post(
        f"/sessions/{session_id}/intent",
        json={
            "prompt": "push the spray to the right",
            "sketch": {"strokes": [{"points": [[0.2, 0.4], [0.7, 0.45]], "brush_id": 1}]},
        },
    ).json()
    assert intent["action"] == "edit", intent
    frames = []
    frames += client.post(f"/sessions/{session_id}/step", json={"steps": 2, "dt": 0.05}).json()["frames"]
    update = client.post(f"/sessions/{session_id}/controls/force_x", json={"value": 35})
    assert update.status_code == 200
    frames += client.post(f"/sessions/{session_id}/step", json={"steps": 4, "dt": 0.05}).json()["frames"]
    (OUT / "frames_force_change.json").write_text(
        json.dumps({"change_after_frame": 1, "frames": frames}, indent=2, sort_keys=True)
    )

    scene = {"objects": FOUNTAIN_SCENE["objects"]}
    (OUT / "scene.json").write_text(json.dumps(scene, indent=2, sort_keys=True))
    print(f"exported UI fixtures to {OUT}")


if __name__ == "__main__":
    main()
