#!/usr/bin/env python3
"""Spin up the session server in-process and type the task sentence over the
wire, exactly as the browser UI does (point frames, dwell selection).

The same traffic works against `gazeboard serve` from another terminal; this
script is self-contained so it can run anywhere.
"""

import asyncio
import json
from pathlib import Path

from gazeboard.core import EngineConfig, default_layout
from gazeboard.keyboard import commands_for_text
from gazeboard.metrics import SessionLog
from gazeboard.server import KeyboardServer, ServerConfig
from gazeboard.simulate import verify_replay

SENTENCE = "Painting"
DWELL = 6  # frames; small so the demo is quick to read


async def main():
    config = ServerConfig(
        host="127.0.0.1",
        port=8970,
        tcp_port=8971,
        engine=EngineConfig(mode="async", dwell_frames=DWELL),
        sentence=SENTENCE,
        log_dir=Path("demo-logs"),
    )
    server = KeyboardServer(config)
    await server.start()
    print(f"server up on tcp://{config.host}:{config.tcp_port}\n")

    layout = default_layout()
    reader, writer = await asyncio.open_connection(config.host, config.tcp_port)

    async def send(obj):
        writer.write(json.dumps(obj).encode() + b"\n")
        await writer.drain()

    async def recv():
        return json.loads(await reader.readline())

    await send({"type": "hello", "session": "demo"})
    hello = await recv()
    print(f"handshake: mode={hello['payload']['mode']}, "
          f"target={hello['payload']['target_text']!r}\n")

    t = 0
    typed = ""
    for c in commands_for_text(layout, SENTENCE):
        x, y = layout.centers[c]
        for _ in range(DWELL):
            t += 1
            await send({"t_ms": t, "x": x, "y": y})
        # Every command ends with exactly one level_changed event; read up to
        # it, reporting the selection and any committed letter on the way.
        while True:
            msg = await recv()
            if msg["kind"] == "selection":
                print(f"t={msg['t_ms']:>4}ms  selected C{msg['payload']['command']}")
            elif msg["kind"] == "letter_added":
                typed += msg["payload"]
                print(f"           typed so far: {typed!r}")
            elif msg["kind"] == "level_changed":
                break
    writer.close()
    await server.stop()

    log_path = config.log_dir / "demo.jsonl"
    log = SessionLog.read(log_path)
    result = verify_replay(log)
    print(f"\nsession log: {log_path} ({len(log.events)} events)")
    print(f"replay check: {'byte-identical' if result.ok else result.message}")


if __name__ == "__main__":
    asyncio.run(main())
