"""WebSocket service exposing the session protocol.

One connection owns one protocol handler (and therefore one session); the
underlying graph/trace/concept data is immutable, so concurrent sessions
never observe each other's cursor or log.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, WebSocket, WebSocketDisconnect


def create_app(
    algos_dir: str | Path | None = None,
    concepts_dir: str | Path | None = None,
    log_dir: str | Path | None = None,
) -> FastAPI:
    from .protocol import ProtocolHandler

    app = FastAPI(title="xalgo session service")

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.websocket("/ws")
    async def ws_endpoint(websocket: WebSocket):
        await websocket.accept()
        handler = ProtocolHandler(
            algos_dir=algos_dir, concepts_dir=concepts_dir, log_dir=log_dir
        )
        try:
            while True:
                raw = await websocket.receive_text()
                for reply in handler.handle_line(raw):
                    await websocket.send_text(reply)
        except WebSocketDisconnect:
            pass
        finally:
            handler.close()

    return app


def serve(
    port: int = 8765,
    host: str = "127.0.0.1",
    algos_dir: str | Path | None = None,
    concepts_dir: str | Path | None = None,
    log_dir: str | Path | None = None,
):
    import uvicorn

    app = create_app(algos_dir=algos_dir, concepts_dir=concepts_dir, log_dir=log_dir)
    uvicorn.run(app, host=host, port=port)
