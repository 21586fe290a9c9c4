/**
 * Browser bootstrap: read the connection settings from the URL, wire the
 * socket, reducer, renderer, audio and mouse source together.
 *
 * Query parameters:
 *   server  - websocket URL (default ws://<host>/)
 *   session - session token (default "browser")
 *   mode    - async | sync (server default if omitted)
 *   silent  - "1" disables audio cues
 *   click   - "1" sends click selections (mouse baseline shortcut)
 */

import { CuePlayer, SilentCues, ToneCues } from "./audio.js";
import { SessionClient } from "./client.js";
import { MouseSource } from "./mouse.js";
import { KeyboardRenderer } from "./render.js";
import { applyEvent, clearHighlight, initialState, setConnected, UiState } from "./state.js";

function wsUrlDefault(): string {
  const proto = location.protocol === "https:" ? "wss" : "ws";
  return `${proto}://${location.host}/`;
}

async function start(): Promise<void> {
  const params = new URLSearchParams(location.search);
  const url = params.get("server") ?? wsUrlDefault();
  const session = params.get("session") ?? "browser";
  const mode = params.get("mode") ?? undefined;
  const clickToSelect = params.get("click") === "1";

  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app element");
  const renderer = new KeyboardRenderer(document, root);

  let state: UiState = initialState();
  const rerender = () => renderer.render(state);
  rerender();

  const client = new SessionClient({ url, session, mode });
  client.onClose(() => {
    state = setConnected(state, false);
    rerender();
  });

  let cues: CuePlayer = new SilentCues();
  client.onEvent((event) => {
    state = applyEvent(state, event);
    if (event.kind === "letter_added") cues.letterCue(event.payload as string);
    rerender();
  });

  const hello = await client.connect();
  if (params.get("silent") !== "1") {
    const chars = Object.values(hello.layout.groups).flat();
    cues = new ToneCues(new AudioContext(), chars);
  }

  const source = new MouseSource({
    frameRateHz: hello.engine.frame_rate,
    send: (raw) => client.send(raw),
    onPause: () => {
      state = clearHighlight(state);
      rerender();
    },
  });

  const grid = root.querySelector(".grid") as HTMLElement;
  grid.addEventListener("pointermove", (ev: PointerEvent) => {
    const rect = grid.getBoundingClientRect();
    source.pointerMoved(
      (ev.clientX - rect.left) / rect.width,
      (ev.clientY - rect.top) / rect.height,
    );
  });
  grid.addEventListener("pointerleave", () => source.pointerLeft());
  if (clickToSelect) {
    for (const [command, tile] of renderer.tiles) {
      (tile as unknown as HTMLElement).addEventListener("click", () =>
        source.click(command),
      );
    }
  }
  source.start();
}

start().catch((e) => {
  console.error("gazeboard-ui failed to start:", e);
  const root = document.getElementById("app");
  if (root) root.textContent = `failed to start: ${e}`;
});
