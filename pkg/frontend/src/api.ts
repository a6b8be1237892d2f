// Typed client for the tutor gateway. The UI performs no recognition of its
// own: every verdict rendered comes from one of these calls.

export interface LessonItemInfo {
  shapeName: string;
  glyph: string;
  meaning: string;
}

export interface LessonInfo {
  id: string;
  title: string;
  mode: 'kanji' | 'elements';
  items: LessonItemInfo[];
}

export interface Prompt {
  itemIndex: number;
  shapeName: string;
  glyph: string;
  meaning: string;
  progress: { current: number; total: number };
}

export type StrokeVerdict = 'consistent' | 'complete' | 'inconsistent';

export interface StrokeResponse {
  status: StrokeVerdict;
  strokeCount: number;
}

export interface CritiqueView {
  responsePanel: string;
  critiquePanel: string[];
  commentPanel: string;
  nextItem: { shapeName: string; glyph: string } | null;
}

export interface ReportItem {
  shapeName: string;
  glyph: string;
  visualOk: boolean;
  techniqueOk: boolean;
  attemptsUsed: number;
}

export interface ReportCard {
  perItem: ReportItem[];
  visualAccuracy: number | null;
  techniqueAmongVisual: number | null;
}

export interface InkDocument {
  canvas: { w: number; h: number };
  strokes: { id: number; points: [number, number, number][] }[];
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

async function parseError(res: Response): Promise<never> {
  let code = 'unknown';
  let message = res.statusText;
  try {
    const body = await res.json();
    if (body && body.error) {
      code = body.error.code ?? code;
      message = body.error.message ?? message;
    }
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ApiError(res.status, code, message);
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  private async get<T>(path: string): Promise<T> {
    const res = await fetch(this.baseUrl + path);
    if (!res.ok) await parseError(res);
    return (await res.json()) as T;
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    const res = await fetch(this.baseUrl + path, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(body ?? {}),
    });
    if (!res.ok) await parseError(res);
    return (await res.json()) as T;
  }

  listLessons(): Promise<LessonInfo[]> {
    return this.get('/api/lessons');
  }

  async shapeText(name: string): Promise<string> {
    const res = await fetch(`${this.baseUrl}/api/shapes/${encodeURIComponent(name)}`);
    if (!res.ok) await parseError(res);
    return res.text();
  }

  createSession(lessonId: string): Promise<{ sessionId: string; prompt: Prompt | null }> {
    return this.post('/api/sessions', { lessonId });
  }

  getPrompt(sessionId: string): Promise<{ prompt: Prompt | null; done: boolean }> {
    return this.get(`/api/sessions/${sessionId}/prompt`);
  }

  postStroke(
    sessionId: string,
    points: [number, number, number][],
    canvasW: number,
    canvasH: number,
  ): Promise<StrokeResponse> {
    return this.post(`/api/sessions/${sessionId}/strokes`, { points, canvasW, canvasH });
  }

  submit(sessionId: string, ink: InkDocument): Promise<CritiqueView> {
    return this.post(`/api/sessions/${sessionId}/submit`, ink);
  }

  next(sessionId: string): Promise<{ prompt: Prompt | null; done: boolean }> {
    return this.post(`/api/sessions/${sessionId}/next`, {});
  }

  report(sessionId: string): Promise<ReportCard> {
    return this.get(`/api/sessions/${sessionId}/report`);
  }
}
