import { describe, expect, it } from 'vitest';

import type { InkDocument } from '../src/api.js';
import { recordReplay, replayEvents, StrokeRecorder, toInkDocument } from '../src/ink.js';

const DOC: InkDocument = {
  canvas: { w: 200, h: 200 },
  strokes: [
    { id: 0, points: [[40, 100, 0], [100, 100, 40], [160, 100, 80]] },
    { id: 1, points: [[100, 40, 400], [100, 160, 480]] },
  ],
};

describe('StrokeRecorder', () => {
  it('captures pen-down..pen-up runs as strokes', () => {
    const rec = new StrokeRecorder();
    rec.penDown({ x: 1, y: 2, t: 0 });
    rec.penMove({ x: 3, y: 4, t: 10 });
    const stroke = rec.penUp();
    expect(stroke?.points).toEqual([[1, 2, 0], [3, 4, 10]]);
    expect(rec.finished).toHaveLength(1);
  });

  it('drops taps with fewer than two samples', () => {
    const rec = new StrokeRecorder();
    rec.penDown({ x: 5, y: 5, t: 0 });
    expect(rec.penUp()).toBeNull();
    expect(rec.finished).toHaveLength(0);
  });

  it('ignores hover moves outside a stroke', () => {
    const rec = new StrokeRecorder();
    rec.penMove({ x: 9, y: 9, t: 0 });
    expect(rec.finished).toHaveLength(0);
    expect(rec.penUp()).toBeNull();
  });

  it('rounds timestamps to whole milliseconds', () => {
    const rec = new StrokeRecorder();
    rec.penDown({ x: 0, y: 0, t: 0.4 });
    rec.penMove({ x: 1, y: 1, t: 10.6 });
    expect(rec.penUp()?.points).toEqual([[0, 0, 0], [1, 1, 11]]);
  });
});

describe('replay round trip', () => {
  it('recording the replayed events reproduces the document exactly', () => {
    const strokes = recordReplay(new StrokeRecorder(), replayEvents(DOC));
    expect(toInkDocument(strokes, DOC.canvas.w, DOC.canvas.h)).toEqual(DOC);
  });

  it('emits one up event per stroke', () => {
    const events = replayEvents(DOC);
    expect(events.filter((e) => e.kind === 'up')).toHaveLength(2);
    expect(events.filter((e) => e.kind === 'down')).toHaveLength(2);
  });
});
