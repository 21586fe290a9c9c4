/**
 * Scripted end-to-end session: the real UI stack (client, reducer,
 * renderer, mouse source) types the full task sentence against a live
 * gazeboard server over a real WebSocket, using dwell selection only.
 *
 * No browser binary exists in this environment, so the DOM is the test
 * stub; everything else (wire protocol, server, engine, logging) is the
 * production path. Afterwards the server's session log is read back and the
 * rendered text must match the log's buffer at every letter event.
 */

import { spawn, ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync } from "node:fs";
import { createServer } from "node:net";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import WebSocket from "ws";

import { SessionClient, WebSocketLike } from "../src/client.js";
import { MouseSource } from "../src/mouse.js";
import { commandCenter, groupChars, PERIPHERAL_COMMANDS, ServerEvent } from "../src/protocol.js";
import { KeyboardRenderer } from "../src/render.js";
import { applyEvent, initialState, UiState } from "../src/state.js";
import { StubDocument, StubElement } from "./domstub.js";

const SENTENCE = "Painting which landform";
const DWELL = 5;

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const srv = createServer();
    srv.listen(0, "127.0.0.1", () => {
      const port = (srv.address() as { port: number }).port;
      srv.close(() => resolve(port));
    });
    srv.on("error", reject);
  });
}

async function waitForServer(port: number, timeoutMs = 15000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  while (Date.now() < deadline) {
    const ok = await new Promise<boolean>((resolve) => {
      const ws = new WebSocket(`ws://127.0.0.1:${port}/`);
      ws.on("open", () => {
        ws.close();
        resolve(true);
      });
      ws.on("error", () => resolve(false));
    });
    if (ok) return;
    await new Promise((r) => setTimeout(r, 150));
  }
  throw new Error("server did not come up");
}

describe("live session", () => {
  let server: ChildProcess;
  let port: number;
  let logDir: string;

  beforeAll(async () => {
    port = await freePort();
    logDir = mkdtempSync(join(tmpdir(), "gazeboard-e2e-"));
    server = spawn(
      "python3",
      [
        "-m",
        "gazeboard.cli",
        "serve",
        "--listen",
        `127.0.0.1:${port}`,
        "--mode",
        "async",
        "--dwell-frames",
        String(DWELL),
        "--sentence",
        SENTENCE,
        "--log-dir",
        logDir,
      ],
      { stdio: "ignore" },
    );
    await waitForServer(port);
  }, 30000);

  afterAll(() => {
    server?.kill("SIGINT");
  });

  it("types the task sentence end-to-end with the mouse source", async () => {
    const doc = new StubDocument();
    const root = new StubElement("div");
    const renderer = new KeyboardRenderer(doc, root);

    let state: UiState = initialState();
    const renderedAtEvent: string[] = [];
    const uiLetterEvolution: string[] = [];
    const waiters: Array<{ pred: (ev: ServerEvent) => boolean; resolve: () => void }> = [];

    const client = new SessionClient({
      url: `ws://127.0.0.1:${port}/`,
      session: "e2e",
      wsFactory: (url) => new WebSocket(url) as unknown as WebSocketLike,
    });
    client.onEvent((event) => {
      state = applyEvent(state, event);
      renderer.render(state);
      // The rendered text must equal the reducer's buffer at every event.
      renderedAtEvent.push(renderer.typedText());
      expect(renderer.typedText()).toBe(state.typed);
      if (event.kind === "letter_added" || event.kind === "letter_deleted") {
        uiLetterEvolution.push(renderer.typedText());
      }
      for (let i = waiters.length - 1; i >= 0; i--) {
        if (waiters[i].pred(event)) {
          const [w] = waiters.splice(i, 1);
          w.resolve();
        }
      }
    });

    const nextEvent = (pred: (ev: ServerEvent) => boolean): Promise<void> =>
      new Promise((resolve) => waiters.push({ pred, resolve }));

    const hello = await client.connect();
    expect(hello.target_text).toBe(SENTENCE);
    renderer.render(state);

    const source = new MouseSource({
      frameRateHz: hello.engine.frame_rate,
      send: (raw) => client.send(raw),
    });

    // Scripted user: read the layout off the screen, hover group then slot.
    const layout = hello.layout;
    const groupOf = (ch: string): number => {
      for (const g of [1, 2, 3, 4, 6, 7, 8]) {
        if (groupChars(layout, g).includes(ch)) return g;
      }
      throw new Error(`untypeable: ${ch}`);
    };
    const slotOf = (ch: string): number =>
      PERIPHERAL_COMMANDS[groupChars(layout, groupOf(ch)).indexOf(ch)];

    const dwellOn = async (command: number, doneWhen: (ev: ServerEvent) => boolean) => {
      const [x, y] = commandCenter(layout, command);
      source.pointerMoved(x, y);
      const done = nextEvent(doneWhen);
      for (let i = 0; i < DWELL; i++) source.sample();
      await done;
    };

    for (const ch of SENTENCE) {
      await dwellOn(groupOf(ch), (ev) => ev.kind === "level_changed" && ev.payload !== 5);
      await dwellOn(slotOf(ch), (ev) => ev.kind === "letter_added");
    }
    await nextEvent((ev) => ev.kind === "session_end");
    source.stop();
    client.close();

    expect(state.typed).toBe(SENTENCE);
    expect(renderer.typedText()).toBe(SENTENCE);
    expect(renderer.remainingTextShown()).toBe("");
    expect(state.sessionDone).toBe(true);
    expect(renderedAtEvent.length).toBeGreaterThan(46 * DWELL);

    // The server's own log is the ground truth: its buffer evolution must
    // match what the UI rendered at each letter event.
    await new Promise((r) => setTimeout(r, 300)); // let the server flush
    const logText = readFileSync(join(logDir, "e2e.jsonl"), "utf-8");
    const lines = logText.trim().split("\n");
    expect(JSON.parse(lines[0]).target_text).toBe(SENTENCE);
    const serverEvolution: string[] = [];
    let buffer = "";
    for (const line of lines.slice(1)) {
      const rec = JSON.parse(line);
      if (rec.k === "letter_added") {
        buffer += rec.char;
        serverEvolution.push(buffer);
      } else if (rec.k === "letter_deleted") {
        buffer = buffer.slice(0, -1);
        serverEvolution.push(buffer);
      }
    }
    expect(buffer).toBe(SENTENCE);
    expect(uiLetterEvolution).toEqual(serverEvolution);
  }, 120000);
});
