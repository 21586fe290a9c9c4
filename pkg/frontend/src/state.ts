/**
 * UI state: a pure mirror of the server's event stream.
 *
 * The reducer holds no keyboard logic of its own — letters come only from
 * letter_added / letter_deleted events, levels only from level_changed.
 * Replaying the same events always reproduces the same state, so a burst of
 * queued events coalesces to exactly the server's state.
 */

import {
  GO_BACK,
  HelloPayload,
  HighlightPayload,
  LayoutDoc,
  ServerEvent,
} from "./protocol.js";

export interface UiState {
  connected: boolean;
  sessionDone: boolean;
  mode: string;
  layout: LayoutDoc | null;
  targetText: string;
  typed: string;
  level: number;
  activeGroup: number | null;
  highlight: number | null;
  progress: number;
  trialFrame: number | null;
  lastError: string | null;
}

export function initialState(): UiState {
  return {
    connected: false,
    sessionDone: false,
    mode: "async",
    layout: null,
    targetText: "",
    typed: "",
    level: 1,
    activeGroup: null,
    highlight: null,
    progress: 0,
    trialFrame: null,
    lastError: null,
  };
}

export function lastFive(state: UiState): string {
  return state.typed.slice(-5);
}

function commonPrefixLength(a: string, b: string): number {
  const n = Math.min(a.length, b.length);
  let i = 0;
  while (i < n && a[i] === b[i]) i++;
  return i;
}

/** Target suffix still to be typed (text for the second text box). */
export function remainingText(state: UiState): string {
  return state.targetText.slice(commonPrefixLength(state.typed, state.targetText));
}

export function applyHello(state: UiState, hello: HelloPayload): UiState {
  return {
    ...state,
    connected: true,
    sessionDone: hello.done,
    mode: hello.mode,
    layout: hello.layout,
    targetText: hello.target_text,
    typed: hello.typed,
    level: hello.level,
    activeGroup: hello.active_group,
  };
}

/** Mirror one server event onto the state; unknown kinds are ignored. */
export function applyEvent(state: UiState, event: ServerEvent): UiState {
  switch (event.kind) {
    case "hello":
      return applyHello(state, event.payload as HelloPayload);
    case "highlight": {
      const p = event.payload as HighlightPayload;
      return {
        ...state,
        highlight: p.command ?? null,
        progress: p.progress ?? 0,
        trialFrame: p.trial_frame ?? null,
      };
    }
    case "selection":
      return state;
    case "letter_added":
      return { ...state, typed: state.typed + (event.payload as string) };
    case "letter_deleted":
      return { ...state, typed: state.typed.slice(0, -1) };
    case "level_changed": {
      const command = event.payload as number;
      if (command === GO_BACK) {
        return { ...state, level: 1, activeGroup: null, highlight: null, progress: 0 };
      }
      return { ...state, level: 2, activeGroup: command, highlight: null, progress: 0 };
    }
    case "audio_cue":
      return state;
    case "session_end":
      return { ...state, sessionDone: true };
    case "error":
      return { ...state, lastError: String(event.payload) };
    default:
      console.info(`gazeboard-ui: ignoring unknown event kind ${event.kind}`);
      return state;
  }
}

export function setConnected(state: UiState, connected: boolean): UiState {
  return connected
    ? { ...state, connected: true }
    : { ...state, connected: false, highlight: null, progress: 0 };
}

export function clearHighlight(state: UiState): UiState {
  return { ...state, highlight: null, progress: 0 };
}
