/**
 * Wire protocol shared with the session server.
 *
 * One JSON message per WebSocket text frame. Outbound: a hello handshake,
 * point frames, and (mouse baseline only) direct selection messages.
 * Inbound: {t_ms, kind, payload} events.
 */

export interface LayoutDoc {
  version: string;
  groups: Record<string, string[]>;
  centers: Record<string, [number, number]>;
}

export interface EngineDoc {
  mode: string;
  dwell_frames: number;
  trial_frames: number;
  alpha: number;
  frame_rate: number;
}

export interface HelloPayload {
  session: string;
  mode: string;
  engine: EngineDoc;
  layout: LayoutDoc;
  target_text: string;
  typed: string;
  level: number;
  active_group: number | null;
  last_five: string;
  done: boolean;
}

export interface ServerEvent {
  t_ms: number;
  kind: string;
  payload: unknown;
}

export interface HighlightPayload {
  command: number | null;
  progress: number;
  trial_frame?: number;
}

export function parseEvent(raw: string): ServerEvent {
  const obj = JSON.parse(raw) as Record<string, unknown>;
  if (typeof obj.kind !== "string" || typeof obj.t_ms !== "number") {
    throw new Error(`not a server event: ${raw}`);
  }
  return { t_ms: obj.t_ms, kind: obj.kind, payload: obj.payload };
}

export function helloMessage(session: string, mode?: string): string {
  const msg: Record<string, unknown> = { type: "hello", session };
  if (mode) msg.mode = mode;
  return JSON.stringify(msg);
}

export function pointFrame(tMs: number, x: number, y: number): string {
  return JSON.stringify({ t_ms: tMs, x, y });
}

export function selectMessage(tMs: number, command: number): string {
  return JSON.stringify({ type: "select", t_ms: tMs, command });
}

export function endMessage(): string {
  return JSON.stringify({ type: "end" });
}

/** Group commands in level-2 slot order (peripheral positions, no center). */
export const PERIPHERAL_COMMANDS = [1, 2, 3, 4, 6, 7, 8, 9] as const;

/** Commands that hold a character group at level 1. */
export const GROUP_COMMANDS = [1, 2, 3, 4, 6, 7, 8] as const;

export const GO_BACK = 5;
export const DELETE = 9;

export function groupChars(layout: LayoutDoc, group: number): string[] {
  const chars = layout.groups[`C${group}`];
  if (!chars) throw new Error(`layout has no group C${group}`);
  return chars;
}

export function commandCenter(layout: LayoutDoc, command: number): [number, number] {
  const c = layout.centers[`C${command}`];
  if (!c) throw new Error(`layout has no center for C${command}`);
  return c;
}
