/**
 * Mouse point-frame source (the baseline modality and a stand-in for an
 * eye tracker).
 *
 * The pointer position is sampled at the configured frame rate and sent as
 * a normalized point frame; between samples only the latest position is
 * kept (drop-to-latest backpressure). When the pointer leaves the keyboard
 * the stream pauses and the owner is told to clear the highlight. Clicking
 * short-circuits to a direct selection message.
 */

import { pointFrame, selectMessage } from "./protocol.js";

export interface MouseSourceOptions {
  frameRateHz: number;
  send: (raw: string) => boolean | void;
  onPause?: () => void;
  /** Monotonic clock in ms; defaults to performance.now. */
  clock?: () => number;
}

export class MouseSource {
  private opts: MouseSourceOptions;
  private latest: { x: number; y: number } | null = null;
  private lastT = 0;
  private timer: ReturnType<typeof setInterval> | null = null;
  sentFrames = 0;

  constructor(opts: MouseSourceOptions) {
    this.opts = opts;
  }

  /** Record the pointer at normalized coordinates; clamped to [0,1]. */
  pointerMoved(x: number, y: number): void {
    this.latest = {
      x: Math.min(1, Math.max(0, x)),
      y: Math.min(1, Math.max(0, y)),
    };
  }

  pointerLeft(): void {
    this.latest = null;
    this.opts.onPause?.();
  }

  private nextT(): number {
    const clock = this.opts.clock ?? (() => performance.now());
    const t = Math.max(this.lastT + 1, Math.round(clock()));
    this.lastT = t;
    return t;
  }

  /** Emit one frame for the latest pointer sample, if any. */
  sample(): boolean {
    if (this.latest === null) return false;
    this.opts.send(pointFrame(this.nextT(), this.latest.x, this.latest.y));
    this.sentFrames++;
    return true;
  }

  /** Direct selection (click): bypasses dwell entirely. */
  click(command: number): void {
    this.opts.send(selectMessage(this.nextT(), command));
  }

  start(): void {
    if (this.timer !== null) return;
    this.timer = setInterval(() => this.sample(), 1000 / this.opts.frameRateHz);
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }
}
