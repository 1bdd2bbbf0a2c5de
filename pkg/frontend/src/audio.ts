// Cue playback: synthesized speech placeholders plus a little fanfare.
// Captions are handled by the scene/renderer; this module only makes
// noise, and degrades to silence where the APIs are missing.

export interface CuePlayer {
  play(cueKind: string, text: string): void;
}

export class SpeechCuePlayer implements CuePlayer {
  private ctx: AudioContext | null = null;

  play(cueKind: string, text: string): void {
    if (cueKind === "fanfare") {
      this.fanfare();
      return;
    }
    if (typeof speechSynthesis !== "undefined") {
      const utterance = new SpeechSynthesisUtterance(text);
      utterance.rate = 1.1;
      speechSynthesis.cancel();
      speechSynthesis.speak(utterance);
    }
  }

  private fanfare(): void {
    if (typeof AudioContext === "undefined") {
      return;
    }
    this.ctx = this.ctx ?? new AudioContext();
    const now = this.ctx.currentTime;
    // A triad arpeggio with a final chord; placeholder, not composition.
    const notes = [523.25, 659.25, 783.99, 1046.5];
    notes.forEach((freq, i) => {
      const osc = this.ctx!.createOscillator();
      const gain = this.ctx!.createGain();
      osc.type = "triangle";
      osc.frequency.value = freq;
      const start = now + i * 0.15;
      const stop = start + (i === notes.length - 1 ? 0.6 : 0.18);
      gain.gain.setValueAtTime(0.25, start);
      gain.gain.exponentialRampToValueAtTime(0.001, stop);
      osc.connect(gain).connect(this.ctx!.destination);
      osc.start(start);
      osc.stop(stop);
    });
  }
}

/** Collects cue playback calls instead of making noise (tests). */
export class RecordingCuePlayer implements CuePlayer {
  readonly played: { cueKind: string; text: string }[] = [];

  play(cueKind: string, text: string): void {
    this.played.push({ cueKind, text });
  }
}
