// Client-side session state. Mirrors the server verdicts stroke by stroke;
// at most one /strokes request is in flight, queued in pen order.

import { ApiClient, CritiqueView, Prompt, ReportCard, StrokeVerdict } from './api.js';
import { CapturedStroke, toInkDocument } from './ink.js';

export interface StrokeState {
  points: [number, number, number][];
  status: StrokeVerdict | 'pending' | 'unsent';
}

export interface UiSessionState {
  sessionId: string;
  prompt: Prompt | null;
  done: boolean;
  strokes: StrokeState[];
  lastCritique: CritiqueView | null;
  progress: number; // fraction of lesson items completed
}

export class TutorSession {
  private state: UiSessionState;
  private queue: Promise<unknown> = Promise.resolve();

  private constructor(
    private readonly api: ApiClient,
    private readonly canvasW: number,
    private readonly canvasH: number,
    sessionId: string,
    prompt: Prompt | null,
  ) {
    this.state = {
      sessionId,
      prompt,
      done: prompt === null,
      strokes: [],
      lastCritique: null,
      progress: prompt ? prompt.progress.current / prompt.progress.total : 1,
    };
  }

  static async start(
    api: ApiClient,
    lessonId: string,
    canvasW: number,
    canvasH: number,
  ): Promise<TutorSession> {
    const created = await api.createSession(lessonId);
    return new TutorSession(api, canvasW, canvasH, created.sessionId, created.prompt);
  }

  get snapshot(): UiSessionState {
    return {
      ...this.state,
      strokes: this.state.strokes.map((s) => ({ ...s })),
    };
  }

  /** Post one finished stroke; resolves with its verdict after the queue drains. */
  addStroke(stroke: CapturedStroke): Promise<StrokeVerdict> {
    const entry: StrokeState = { points: stroke.points, status: 'pending' };
    this.state.strokes.push(entry);
    const send = this.queue.then(async () => {
      try {
        const res = await this.api.postStroke(
          this.state.sessionId,
          stroke.points,
          this.canvasW,
          this.canvasH,
        );
        entry.status = res.status;
        return res.status;
      } catch (err) {
        entry.status = 'unsent'; // kept locally; caller may retry
        throw err;
      }
    });
    this.queue = send.catch(() => undefined);
    return send;
  }

  async submit(): Promise<CritiqueView> {
    const strokes: CapturedStroke[] = this.state.strokes.map((s) => ({ points: s.points }));
    const critique = await this.api.submit(
      this.state.sessionId,
      toInkDocument(strokes, this.canvasW, this.canvasH),
    );
    this.state.lastCritique = critique;
    return critique;
  }

  async advance(): Promise<Prompt | null> {
    const res = await this.api.next(this.state.sessionId);
    this.state.prompt = res.prompt;
    this.state.done = res.done;
    this.state.strokes = [];
    this.state.progress = res.prompt
      ? res.prompt.progress.current / res.prompt.progress.total
      : 1;
    return res.prompt;
  }

  report(): Promise<ReportCard> {
    return this.api.report(this.state.sessionId);
  }
}
