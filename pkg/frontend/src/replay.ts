// Developer replay page: paste a recorded ink document, replay it through the
// same recorder the canvas uses, and grade it against a live session.

import { ApiClient, InkDocument, StrokeVerdict } from './api.js';
import { recordReplay, replayEvents, StrokeRecorder } from './ink.js';
import { feedbackView } from './render.js';
import { TutorSession } from './session.js';

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

export async function replayIntoSession(
  api: ApiClient,
  lessonId: string,
  doc: InkDocument,
): Promise<{ statuses: StrokeVerdict[]; session: TutorSession }> {
  const session = await TutorSession.start(api, lessonId, doc.canvas.w, doc.canvas.h);
  const strokes = recordReplay(new StrokeRecorder(), replayEvents(doc));
  const statuses: StrokeVerdict[] = [];
  for (const stroke of strokes) {
    statuses.push(await session.addStroke(stroke));
  }
  return { statuses, session };
}

async function run(): Promise<void> {
  const api = new ApiClient('');
  el<HTMLButtonElement>('replay').addEventListener('click', async () => {
    const doc = JSON.parse(el<HTMLTextAreaElement>('ink').value) as InkDocument;
    const lessonId = el<HTMLInputElement>('lesson-id').value;
    const { statuses, session } = await replayIntoSession(api, lessonId, doc);
    el('statuses').textContent = statuses.join(' → ');
    const view = feedbackView(await session.submit());
    el('result').textContent = [view.response, ...view.critiqueRows, view.comment].join('\n');
  });
}

if (typeof document !== 'undefined' && document.getElementById('replay')) {
  run().catch((err) => console.error(err));
}
