/**
 * Session client: one WebSocket, a hello handshake, then a one-way event
 * stream in and frames out. The socket constructor is injectable so the
 * same client runs in the browser (global WebSocket) and under node tests
 * (the ws package).
 */

import { HelloPayload, ServerEvent, helloMessage, parseEvent } from "./protocol.js";

export interface WebSocketLike {
  send(data: string): void;
  close(): void;
  readyState: number;
  onopen: ((ev?: unknown) => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  onclose: ((ev?: unknown) => void) | null;
  onerror: ((ev?: unknown) => void) | null;
}

export type WebSocketFactory = (url: string) => WebSocketLike;

export interface SessionClientOptions {
  url: string;
  session: string;
  mode?: string;
  wsFactory?: WebSocketFactory;
}

const WS_OPEN = 1;

export class SessionClient {
  private opts: SessionClientOptions;
  private ws: WebSocketLike | null = null;
  private eventHandlers: Array<(ev: ServerEvent) => void> = [];
  private closeHandlers: Array<() => void> = [];

  constructor(opts: SessionClientOptions) {
    this.opts = opts;
  }

  onEvent(handler: (ev: ServerEvent) => void): void {
    this.eventHandlers.push(handler);
  }

  onClose(handler: () => void): void {
    this.closeHandlers.push(handler);
  }

  /** Open the socket, send hello, resolve with the state snapshot. */
  connect(): Promise<HelloPayload> {
    const factory: WebSocketFactory =
      this.opts.wsFactory ?? ((url) => new WebSocket(url) as unknown as WebSocketLike);
    const ws = factory(this.opts.url);
    this.ws = ws;
    return new Promise((resolve, reject) => {
      let helloSeen = false;
      ws.onopen = () => ws.send(helloMessage(this.opts.session, this.opts.mode));
      ws.onerror = (ev) => {
        if (!helloSeen) reject(new Error(`websocket error: ${String(ev)}`));
      };
      ws.onclose = () => {
        for (const handler of this.closeHandlers) handler();
        if (!helloSeen) reject(new Error("socket closed before hello"));
      };
      ws.onmessage = (ev) => {
        let event: ServerEvent;
        try {
          event = parseEvent(String(ev.data));
        } catch (e) {
          console.info(`gazeboard-ui: undecodable message: ${String(e)}`);
          return;
        }
        if (!helloSeen && event.kind === "hello") {
          helloSeen = true;
          resolve(event.payload as HelloPayload);
        }
        for (const handler of this.eventHandlers) handler(event);
      };
    });
  }

  /** Send a raw outbound message; false if the socket is not open. */
  send(raw: string): boolean {
    if (this.ws === null || this.ws.readyState !== WS_OPEN) return false;
    this.ws.send(raw);
    return true;
  }

  close(): void {
    this.ws?.close();
  }
}
