/** Shared fixtures: a layout matching the server's shipped default. */

import { HelloPayload, LayoutDoc } from "../src/protocol.js";

export function defaultLayout(): LayoutDoc {
  const xs = [0.166667, 0.5, 0.833333];
  const centers: Record<string, [number, number]> = {};
  for (let i = 0; i < 9; i++) {
    centers[`C${i + 1}`] = [xs[i % 3], xs[Math.floor(i / 3)]];
  }
  return {
    version: "1",
    groups: {
      C1: [..."AaBbCcDd"],
      C2: [..."EeFfGgHh"],
      C3: [..."IiJjKkLl"],
      C4: [..."MmNnOoPp"],
      C6: [..."QqRrSsTt"],
      C7: ["Y", "y", "Z", "z", " ", ".", ",", "/"],
      C8: [..."UuVvWwXx"],
    },
    centers,
  };
}

export function helloFixture(overrides: Partial<HelloPayload> = {}): HelloPayload {
  return {
    session: "t1",
    mode: "async",
    engine: {
      mode: "async",
      dwell_frames: 30,
      trial_frames: 60,
      alpha: 6,
      frame_rate: 30,
    },
    layout: defaultLayout(),
    target_text: "Painting which landform",
    typed: "",
    level: 1,
    active_group: null,
    last_five: "",
    done: false,
    ...overrides,
  };
}
