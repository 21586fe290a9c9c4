"""Live session server speaking the newline-delimited frame protocol.

Accepts WebSocket connections (plus an optional raw TCP listener with one
JSON message per line), runs one engine + keyboard per session token, logs
every session to disk, and streams feedback events back to connected
clients. Frame ingestion never blocks on slow event consumers: per-client
event queues are bounded and drop the oldest event on overflow.
"""

from __future__ import annotations

import asyncio
import json
import logging
import mimetypes
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from websockets.asyncio.server import serve as ws_serve
from websockets.datastructures import Headers
from websockets.exceptions import ConnectionClosed
from websockets.http11 import Response

from gazeboard.core import (
    DEFAULT_TASK_SENTENCE,
    ClassificationFrame,
    EngineConfig,
    GazePointFrame,
    LayoutSpec,
    default_layout,
    layout_to_json,
)
from gazeboard.engine import ONE_HOT, make_selector, nearest_target
from gazeboard.gateway import (
    FrameStreamValidator,
    WireError,
    decode_message,
    encode_event,
)
from gazeboard.keyboard import KeyboardState, apply_command
from gazeboard.metrics import SessionLog

log = logging.getLogger("gazeboard.server")

EVENT_QUEUE_SIZE = 256


@dataclass
class ServerConfig:
    host: str = "127.0.0.1"
    port: int = 8765
    tcp_port: Optional[int] = None
    engine: EngineConfig = field(default_factory=EngineConfig)
    layout: Optional[LayoutSpec] = None
    sentence: str = DEFAULT_TASK_SENTENCE
    log_dir: Path = Path("logs")
    ui_dir: Optional[Path] = None

    def __post_init__(self):
        if self.layout is None:
            self.layout = default_layout()
        self.log_dir = Path(self.log_dir)
        if self.ui_dir is not None:
            self.ui_dir = Path(self.ui_dir)


class Subscriber:
    """Bounded per-connection event queue with drop-oldest overflow."""

    def __init__(self, name: str):
        self.name = name
        self.queue: asyncio.Queue[bytes] = asyncio.Queue(maxsize=EVENT_QUEUE_SIZE)
        self.dropped = 0

    def push(self, data: bytes) -> None:
        try:
            self.queue.put_nowait(data)
        except asyncio.QueueFull:
            try:
                self.queue.get_nowait()
            except asyncio.QueueEmpty:
                pass
            self.dropped += 1
            if self.dropped == 1 or self.dropped % 100 == 0:
                log.warning(
                    "subscriber %s overflow: dropped %d event(s)", self.name, self.dropped
                )
            self.queue.put_nowait(data)


class Session:
    """One engine + keyboard + log, driven by exactly one frame stream."""

    def __init__(self, token: str, config: ServerConfig, mode: Optional[str] = None):
        engine = config.engine
        if mode is not None and mode != engine.mode:
            from dataclasses import replace

            engine = replace(engine, mode=mode)
        self.token = token
        self.config = config
        self.engine_config = engine
        self.layout = config.layout
        self.selector = make_selector(engine)
        self.state = KeyboardState(layout=self.layout, target_text=config.sentence)
        self.log = SessionLog(
            config=engine,
            layout=self.layout,
            target_text=config.sentence,
            modality="wire",
        )
        self.log.append(0, "session_start")
        self.validator = FrameStreamValidator()
        self.subscribers: set[Subscriber] = set()
        self.connections = 0
        self.finalized = False
        self.last_t_ms = 0
        self.is_sync = engine.mode == "sync"
        self._last_highlight: Optional[int] = None

    # -- event fan-out ---------------------------------------------------

    def broadcast(self, t_ms: int, kind: str, payload) -> None:
        data = encode_event(t_ms, kind, payload)
        for sub in self.subscribers:
            sub.push(data)

    def snapshot(self) -> dict:
        return {
            "session": self.token,
            "mode": self.engine_config.mode,
            "engine": self.engine_config.to_dict(),
            "layout": json.loads(layout_to_json(self.layout)),
            "target_text": self.state.target_text,
            "typed": self.state.typed,
            "level": self.state.level,
            "active_group": self.state.active_group,
            "last_five": self.state.last_five,
            "done": self.state.done,
        }

    # -- inbound ----------------------------------------------------------

    def handle_frame(self, frame: ClassificationFrame) -> None:
        if self.finalized:
            return
        self.validator.check(frame.t_ms)
        self.last_t_ms = frame.t_ms
        if self.is_sync and self.selector.trial_frame == 0:
            self.log.append(frame.t_ms, "trial_start")
        self.log.append(frame.t_ms, "frame", (frame.left, frame.right))
        self.selector.center_selectable = self.state.level == 2
        event = self.selector.step(frame)
        self._emit_progress(frame.t_ms)
        if event is not None:
            self._apply_selection(event.command, event.mode, event.score, frame.t_ms)

    def handle_point(self, point: GazePointFrame) -> None:
        c = nearest_target(point, self.layout)
        vec = ONE_HOT[c - 1]
        self.handle_frame(ClassificationFrame(point.t_ms, vec, vec))

    def handle_click(self, t_ms: int, command: int) -> None:
        """Direct selection (mouse baseline): bypasses the engine."""
        if self.finalized:
            return
        self.validator.check(t_ms)
        self.last_t_ms = t_ms
        self._apply_selection(command, "click", 0.0, t_ms)

    def _apply_selection(self, command: int, mode: str, score: float, t_ms: int) -> None:
        self.log.append(t_ms, "selection", (command, mode, score))
        self.broadcast(t_ms, "selection", {"command": command, "mode": mode, "score": score})
        self.state, feedback = apply_command(self.state, command, t_ms)
        for fb in feedback:
            if fb.kind in ("letter_added", "letter_deleted"):
                self.log.append(t_ms, fb.kind, fb.payload)
            self.broadcast(t_ms, fb.kind, fb.payload)
        if self.state.done:
            self.finalize("complete")

    def _emit_progress(self, t_ms: int) -> None:
        if self.is_sync:
            leader = self.selector.leader()
            candidate = None if leader is None else int(leader) + 1
            payload = {
                "command": candidate,
                "progress": self.selector.progress,
                "trial_frame": self.selector.trial_frame,
            }
        else:
            d = self.selector.last_selected
            candidate = None if d is None else int(d) + 1
            payload = {"command": candidate, "progress": self.selector.progress}
        if candidate != self._last_highlight or candidate is not None:
            self.broadcast(t_ms, "highlight", payload)
        self._last_highlight = candidate

    # -- lifecycle ----------------------------------------------------------

    def finalize(self, status: str) -> None:
        if self.finalized:
            return
        self.finalized = True
        self.log.append(self.last_t_ms, "session_end", status)
        self.broadcast(self.last_t_ms, "session_end", status)
        path = self.config.log_dir / f"{self.token}.jsonl"
        try:
            self.config.log_dir.mkdir(parents=True, exist_ok=True)
            self.log.write(path)
            log.info("session %s finalized (%s) -> %s", self.token, status, path)
        except OSError as e:
            log.error("failed to write session log %s: %s", path, e)


class KeyboardServer:
    def __init__(self, config: ServerConfig):
        self.config = config
        self.sessions: dict[str, Session] = {}
        self._ws_server = None
        self._tcp_server = None

    # -- session registry --------------------------------------------------

    def session_for(self, token: str, mode: Optional[str] = None) -> Session:
        if token not in self.sessions:
            self.sessions[token] = Session(token, self.config, mode=mode)
        return self.sessions[token]

    def handle_message(self, session: Optional[Session], msg) -> tuple[Optional[Session], Optional[bytes]]:
        """Route one decoded message; returns (session, immediate_reply)."""
        if isinstance(msg, dict):
            mtype = msg.get("type")
            if mtype == "hello":
                token = str(msg.get("session", "default"))
                mode = msg.get("mode")
                session = self.session_for(token, mode=mode)
                return session, encode_event(session.last_t_ms, "hello", session.snapshot())
            if session is None:
                raise WireError("first message must be a hello handshake")
            if mtype == "select":
                session.handle_click(int(msg.get("t_ms", session.last_t_ms + 1)), int(msg["command"]))
                return session, None
            if mtype == "end":
                session.finalize("complete" if session.state.done else "incomplete")
                return session, None
            raise WireError(f"unknown message type: {mtype!r}")
        if session is None:
            raise WireError("first message must be a hello handshake")
        if isinstance(msg, ClassificationFrame):
            session.handle_frame(msg)
        else:
            session.handle_point(msg)
        return session, None

    # -- websocket transport -------------------------------------------------

    async def _ws_handler(self, websocket) -> None:
        session: Optional[Session] = None
        sub = Subscriber(str(websocket.remote_address))
        sender = asyncio.create_task(self._pump(websocket, sub))
        try:
            async for raw in websocket:
                session = self._dispatch(session, sub, raw)
        except ConnectionClosed:
            pass
        finally:
            sender.cancel()
            self._detach(session, sub)

    async def _pump(self, websocket, sub: Subscriber) -> None:
        while True:
            data = await sub.queue.get()
            await websocket.send(data.decode("utf-8").rstrip("\n"))

    def _dispatch(self, session: Optional[Session], sub: Subscriber, raw) -> Optional[Session]:
        """Decode + route; per-message errors answer without teardown."""
        try:
            msg = decode_message(raw)
            new_session, reply = self.handle_message(session, msg)
        except WireError as e:
            sub.push(encode_event(0, "error", str(e)))
            return session
        if new_session is not None and new_session is not session:
            new_session.subscribers.add(sub)
            new_session.connections += 1
        if reply is not None:
            sub.push(reply)
        return new_session if new_session is not None else session

    def _detach(self, session: Optional[Session], sub: Subscriber) -> None:
        if session is None:
            return
        session.subscribers.discard(sub)
        session.connections -= 1
        if session.connections <= 0 and not session.finalized:
            session.finalize("incomplete")

    # -- raw TCP transport ----------------------------------------------------

    async def _tcp_handler(self, reader: asyncio.StreamReader, writer: asyncio.StreamWriter) -> None:
        session: Optional[Session] = None
        sub = Subscriber(str(writer.get_extra_info("peername")))

        async def pump():
            while True:
                data = await sub.queue.get()
                writer.write(data)
                await writer.drain()

        sender = asyncio.create_task(pump())
        try:
            while True:
                line = await reader.readline()
                if not line:
                    break
                line = line.strip()
                if not line:
                    continue
                session = self._dispatch(session, sub, line)
        except ConnectionResetError:
            pass
        finally:
            sender.cancel()
            self._detach(session, sub)
            writer.close()

    # -- static UI files -------------------------------------------------------

    def _process_request(self, connection, request):
        if "Upgrade" in request.headers.get("Connection", "") or request.headers.get("Upgrade"):
            return None  # continue with the websocket handshake
        if self.config.ui_dir is None:
            return connection.respond(404, "no UI bundle configured\n")
        rel = request.path.split("?", 1)[0].lstrip("/") or "index.html"
        path = (self.config.ui_dir / rel).resolve()
        try:
            path.relative_to(self.config.ui_dir.resolve())
        except ValueError:
            return connection.respond(403, "forbidden\n")
        if not path.is_file():
            return connection.respond(404, "not found\n")
        ctype = mimetypes.guess_type(str(path))[0] or "application/octet-stream"
        body = path.read_bytes()
        headers = Headers(
            [("Content-Type", ctype), ("Content-Length", str(len(body)))]
        )
        return Response(200, "OK", headers, body)

    # -- lifecycle ---------------------------------------------------------------

    async def start(self) -> None:
        self.config.log_dir.mkdir(parents=True, exist_ok=True)
        self._ws_server = await ws_serve(
            self._ws_handler,
            self.config.host,
            self.config.port,
            process_request=self._process_request,
        )
        if self.config.tcp_port is not None:
            self._tcp_server = await asyncio.start_server(
                self._tcp_handler, self.config.host, self.config.tcp_port
            )
        log.info(
            "listening on ws://%s:%d%s",
            self.config.host,
            self.config.port,
            f" and tcp://{self.config.host}:{self.config.tcp_port}" if self.config.tcp_port else "",
        )

    async def stop(self) -> None:
        for session in self.sessions.values():
            if not session.finalized:
                session.finalize("incomplete")
        if self._ws_server is not None:
            self._ws_server.close()
            await self._ws_server.wait_closed()
        if self._tcp_server is not None:
            self._tcp_server.close()
            await self._tcp_server.wait_closed()

    async def serve_forever(self) -> None:
        await self.start()
        try:
            await asyncio.Future()
        finally:
            await self.stop()


def run_server(config: ServerConfig) -> None:
    try:
        asyncio.run(KeyboardServer(config).serve_forever())
    except KeyboardInterrupt:
        pass
