"""Interactive session service.

One WebSocket connection is one learner session: the client streams pose
updates, the server answers every pose with the sensor reading and the
feedback frame/cues. All feedback policy lives server-side; the UI only
renders what it is told.

Messages are the session protocol's JSON documents, one per WebSocket
text frame (the WS transport supplies the length framing); the same
documents travel length-prefixed on raw sockets, see session_protocol.
"""

from __future__ import annotations

from dataclasses import replace
from pathlib import Path

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import HTMLResponse
from fastapi.staticfiles import StaticFiles

from .geometry import LinePath, ScissorsPose
from .pipeline import CuttingSession, EngineConfig
from .sensing import ConfigError
from .session_protocol import (
    MessageKind,
    ProtocolError,
    SessionFlow,
    SessionMessage,
)

_FALLBACK_PAGE = """<!doctype html>
<html><head><title>cutcoach session service</title></head>
<body>
<h1>cutcoach session service</h1>
<p>No UI bundle is configured. The WebSocket endpoint is at
<code>/session</code>; build the frontend and pass
<code>--frontend &lt;dist dir&gt;</code> to serve it here.</p>
</body></html>
"""


def _feedback_body(result) -> dict:
    return {
        "t_ms": result.pose.timestamp,
        "frame": {
            "color": result.frame.chameleon_color.value,
            "heading": result.frame.chameleon_heading,
            "tint": result.frame.side_tint.value,
            "dashed": result.frame.dashed_line_visible,
            "end_screen": result.frame.end_screen,
        },
        "cues": [{"kind": c.kind.value, "text": c.text} for c in result.cues],
        "severity": {
            "level": result.severity.level.name.lower(),
            "side": result.severity.side.value,
        },
        "phase": result.state.phase.value,
        "progress": result.progress,
        "completed": result.completed,
    }


def _sensor_body(result) -> dict:
    r = result.reading
    return {
        "t_ms": r.timestamp,
        "left_on_ink": r.left_on_ink,
        "right_on_ink": r.right_on_ink,
        "left_fault": r.left_fault,
        "right_fault": r.right_fault,
    }


def create_app(
    path: LinePath,
    engine: EngineConfig,
    frontend_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="cutcoach session service")

    @app.get("/healthz")
    async def healthz():
        return {"status": "ok"}

    @app.websocket("/session")
    async def session_ws(ws: WebSocket) -> None:
        await ws.accept()
        flow = SessionFlow()
        session: CuttingSession | None = None
        last_health: tuple[bool, bool] | None = None

        async def send(kind: MessageKind, body: dict) -> None:
            await ws.send_text(SessionMessage(kind=kind, body=body).to_json())

        try:
            while True:
                message = flow.check(SessionMessage.from_json(await ws.receive_text()))

                if message.kind is MessageKind.START_SESSION:
                    cfg = engine
                    mode = message.body.get("mode")
                    if mode is not None:
                        cfg = replace(engine, mode=mode)
                    seed = int(message.body.get("seed", 0))
                    session = CuttingSession(path, cfg, seed=seed)
                    await send(
                        MessageKind.START_SESSION,
                        {
                            "path": path.to_dict(),
                            "mode": cfg.mode,
                            "feedback": {
                                "min_display_moderate": cfg.feedback.min_display_moderate,
                                "min_display_severe": cfg.feedback.min_display_severe,
                                "positive_cue_interval": cfg.feedback.positive_cue_interval,
                            },
                        },
                    )

                elif message.kind is MessageKind.POSE_UPDATE:
                    if session is None or session.completed:
                        continue
                    body = message.body
                    try:
                        pose = ScissorsPose(
                            position=(float(body["x_mm"]), float(body["y_mm"])),
                            heading=float(body.get("heading_deg", 0.0)),
                            timestamp=int(body["t_ms"]),
                        )
                    except (KeyError, TypeError, ValueError) as exc:
                        raise ProtocolError(f"bad pose_update body: {exc}") from exc
                    try:
                        result = session.tick(pose)
                    except ValueError:
                        continue  # stale/duplicate timestamp: drop quietly
                    await send(MessageKind.SENSOR_UPDATE, _sensor_body(result))
                    await send(MessageKind.FEEDBACK_UPDATE, _feedback_body(result))
                    health = (result.reading.left_fault, result.reading.right_fault)
                    if health != last_health:
                        last_health = health
                        await send(
                            MessageKind.DEVICE_HEALTH,
                            {"left_fault": health[0], "right_fault": health[1]},
                        )
                    if result.completed:
                        await send(MessageKind.END_SESSION, {"reason": "completed"})

                elif message.kind is MessageKind.END_SESSION:
                    await send(MessageKind.END_SESSION, {"reason": "client"})
                    break

        except WebSocketDisconnect:
            return
        except (ProtocolError, ConfigError) as exc:
            await ws.close(code=1002, reason=str(exc)[:120])
            return
        await ws.close()

    bundle = Path(frontend_dir) if frontend_dir else None
    if bundle and bundle.is_dir():
        app.mount("/", StaticFiles(directory=bundle, html=True), name="ui")
    else:

        @app.get("/")
        async def index() -> HTMLResponse:
            return HTMLResponse(_FALLBACK_PAGE)

    return app
