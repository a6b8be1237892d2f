// Canvas page wiring: pointer capture, live stroke recoloring, the four
// feedback regions, and the end-of-lesson report.

import { ApiClient, StrokeVerdict } from './api.js';
import { StrokeRecorder } from './ink.js';
import { feedbackView, progressLabel, reportView, strokeColor } from './render.js';
import { StrokeState, TutorSession } from './session.js';

const CANVAS_W = 400;
const CANVAS_H = 400;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function drawStrokes(ctx: CanvasRenderingContext2D, strokes: StrokeState[]): void {
  ctx.clearRect(0, 0, CANVAS_W, CANVAS_H);
  ctx.lineWidth = 3;
  ctx.lineCap = 'round';
  for (const stroke of strokes) {
    ctx.strokeStyle =
      stroke.status === 'pending' || stroke.status === 'unsent'
        ? '#999999'
        : strokeColor(stroke.status as StrokeVerdict);
    ctx.beginPath();
    stroke.points.forEach(([x, y], i) => (i === 0 ? ctx.moveTo(x, y) : ctx.lineTo(x, y)));
    ctx.stroke();
  }
}

async function run(): Promise<void> {
  const api = new ApiClient('');
  const canvas = el<HTMLCanvasElement>('pad');
  const ctx = canvas.getContext('2d');
  if (!ctx) throw new Error('canvas 2d context unavailable');

  const lessons = await api.listLessons();
  const picker = el<HTMLSelectElement>('lesson');
  for (const lesson of lessons) {
    const opt = document.createElement('option');
    opt.value = lesson.id;
    opt.textContent = `${lesson.title} (${lesson.mode})`;
    picker.appendChild(opt);
  }

  let session: TutorSession | null = null;
  let recorder = new StrokeRecorder();
  let t0 = 0;

  const refresh = () => {
    if (!session) return;
    const state = session.snapshot;
    drawStrokes(ctx, state.strokes);
    if (state.prompt) {
      el('glyph').textContent = state.prompt.glyph;
      el('meaning').textContent = state.prompt.meaning;
      el('progress').textContent = progressLabel(
        state.prompt.progress.current,
        state.prompt.progress.total,
      );
    }
    if (state.lastCritique) {
      const view = feedbackView(state.lastCritique);
      el('response').textContent = view.response;
      el('critique').innerHTML = '';
      for (const row of view.critiqueRows) {
        const li = document.createElement('li');
        li.textContent = row;
        el('critique').appendChild(li);
      }
      el('comment').textContent = view.comment;
      el('next').textContent = view.next;
    }
  };

  el<HTMLButtonElement>('start').addEventListener('click', async () => {
    session = await TutorSession.start(api, picker.value, CANVAS_W, CANVAS_H);
    recorder = new StrokeRecorder();
    t0 = performance.now();
    el('report').hidden = true;
    refresh();
  });

  canvas.addEventListener('pointerdown', (ev) => {
    if (!session) return;
    canvas.setPointerCapture(ev.pointerId);
    recorder.penDown({ x: ev.offsetX, y: ev.offsetY, t: performance.now() - t0 });
  });
  canvas.addEventListener('pointermove', (ev) => {
    recorder.penMove({ x: ev.offsetX, y: ev.offsetY, t: performance.now() - t0 });
    refresh();
  });
  canvas.addEventListener('pointerup', async () => {
    if (!session) return;
    const stroke = recorder.penUp();
    if (!stroke) return;
    try {
      await session.addStroke(stroke);
    } catch {
      el('banner').textContent = 'Could not reach the tutor; the stroke is kept locally.';
    }
    refresh();
  });

  el<HTMLButtonElement>('submit').addEventListener('click', async () => {
    if (!session) return;
    await session.submit();
    refresh();
  });

  el<HTMLButtonElement>('advance').addEventListener('click', async () => {
    if (!session) return;
    const prompt = await session.advance();
    recorder = new StrokeRecorder();
    if (prompt === null) {
      const card = await session.report();
      const view = reportView(card);
      el('report').hidden = false;
      el('report-rows').innerHTML = '';
      for (const row of view.rows) {
        const tr = document.createElement('tr');
        tr.innerHTML = `<td>${row.glyph}</td><td>${row.visual}</td><td>${row.technique}</td><td>${row.attempts}</td>`;
        el('report-rows').appendChild(tr);
      }
      el('report-visual').textContent = view.visualPercent;
      el('report-technique').textContent = view.techniquePercent;
    }
    refresh();
  });
}

run().catch((err) => {
  el('banner').textContent = String(err);
});
