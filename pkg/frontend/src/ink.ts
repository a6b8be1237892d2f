// Stroke capture and replay. Raw device samples are uploaded unsmoothed: the
// engine owns all interpretation, so there is nothing to tune on this side.

import type { InkDocument } from './api.js';

export interface PointerSample {
  x: number;
  y: number;
  t: number; // milliseconds since the sketch began
}

export type InkPointTriple = [number, number, number];

export interface CapturedStroke {
  points: InkPointTriple[];
}

/** Accumulates pen-down..pen-up samples into strokes, one sketch at a time. */
export class StrokeRecorder {
  private strokes: CapturedStroke[] = [];
  private current: InkPointTriple[] | null = null;

  penDown(sample: PointerSample): void {
    if (this.current !== null) this.penUp();
    this.current = [[sample.x, sample.y, Math.round(sample.t)]];
  }

  penMove(sample: PointerSample): void {
    if (this.current === null) return; // hover, not drawing
    this.current.push([sample.x, sample.y, Math.round(sample.t)]);
  }

  penUp(): CapturedStroke | null {
    if (this.current === null) return null;
    const stroke = { points: this.current };
    this.current = null;
    if (stroke.points.length < 2) return null; // a tap is not a stroke
    this.strokes.push(stroke);
    return stroke;
  }

  get finished(): CapturedStroke[] {
    return this.strokes;
  }

  clear(): void {
    this.strokes = [];
    this.current = null;
  }
}

export function toInkDocument(strokes: CapturedStroke[], canvasW: number, canvasH: number): InkDocument {
  return {
    canvas: { w: canvasW, h: canvasH },
    strokes: strokes.map((s, id) => ({ id, points: s.points })),
  };
}

export interface ReplayEvent {
  kind: 'down' | 'move' | 'up';
  sample: PointerSample;
}

/**
 * Turns a recorded ink document into the synthetic pointer-event sequence
 * that would have produced it, for deterministic end-to-end tests and the
 * replayer dev page.
 */
export function replayEvents(doc: InkDocument): ReplayEvent[] {
  const events: ReplayEvent[] = [];
  for (const stroke of doc.strokes) {
    stroke.points.forEach(([x, y, t], i) => {
      events.push({ kind: i === 0 ? 'down' : 'move', sample: { x, y, t } });
    });
    const last = stroke.points[stroke.points.length - 1];
    events.push({ kind: 'up', sample: { x: last[0], y: last[1], t: last[2] } });
  }
  return events;
}

/** Drives a recorder with replayed events; returns strokes in pen order. */
export function recordReplay(recorder: StrokeRecorder, events: ReplayEvent[]): CapturedStroke[] {
  const completed: CapturedStroke[] = [];
  for (const ev of events) {
    if (ev.kind === 'down') recorder.penDown(ev.sample);
    else if (ev.kind === 'move') recorder.penMove(ev.sample);
    else {
      const stroke = recorder.penUp();
      if (stroke) completed.push(stroke);
    }
  }
  return completed;
}
