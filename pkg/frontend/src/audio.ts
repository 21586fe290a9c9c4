/**
 * Per-letter audio feedback. Cue buffers are generated once up front (one
 * short tone per typeable character, pitch derived from the character), so
 * playback is a cheap buffer start. SilentCues keeps tests and muted
 * sessions quiet.
 */

export interface CuePlayer {
  letterCue(ch: string): void;
}

export class SilentCues implements CuePlayer {
  letterCue(_ch: string): void {}
}

const CUE_SECONDS = 0.12;

export class ToneCues implements CuePlayer {
  private ctx: AudioContext;
  private buffers = new Map<string, AudioBuffer>();

  constructor(ctx: AudioContext, characters: Iterable<string>) {
    this.ctx = ctx;
    for (const ch of characters) {
      this.buffers.set(ch, this.renderTone(ch));
    }
  }

  /** Stable per-character pitch in a comfortable band (330..1100 Hz). */
  private frequencyFor(ch: string): number {
    const code = ch.codePointAt(0) ?? 63;
    return 330 + (code * 37) % 770;
  }

  private renderTone(ch: string): AudioBuffer {
    const rate = this.ctx.sampleRate;
    const length = Math.round(rate * CUE_SECONDS);
    const buffer = this.ctx.createBuffer(1, length, rate);
    const data = buffer.getChannelData(0);
    const freq = this.frequencyFor(ch);
    for (let i = 0; i < length; i++) {
      const t = i / rate;
      const envelope = Math.min(1, 10 * t) * (1 - i / length);
      data[i] = 0.4 * envelope * Math.sin(2 * Math.PI * freq * t);
    }
    return buffer;
  }

  letterCue(ch: string): void {
    const buffer = this.buffers.get(ch);
    if (!buffer) return;
    const source = this.ctx.createBufferSource();
    source.buffer = buffer;
    source.connect(this.ctx.destination);
    source.start();
  }
}
