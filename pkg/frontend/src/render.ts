// Pure view models for the feedback window and the report view. Keeping these
// free of DOM code lets the test suite pin their contents exactly.

import type { CritiqueView, ReportCard, StrokeVerdict } from './api.js';

export const STATUS_COLORS: Record<StrokeVerdict, string> = {
  consistent: '#555555', // neutral: still plausible
  complete: '#1f8a4c', // success: structure closed
  inconsistent: '#c0392b', // warning: no assignment works
};

export function strokeColor(status: StrokeVerdict): string {
  return STATUS_COLORS[status];
}

export interface FeedbackView {
  response: string;
  critiqueRows: string[];
  comment: string;
  next: string; // glyph, or an end-of-lesson marker
}

export function feedbackView(critique: CritiqueView): FeedbackView {
  return {
    response: critique.responsePanel,
    critiqueRows: [...critique.critiquePanel],
    comment: critique.commentPanel,
    next: critique.nextItem ? critique.nextItem.glyph : '(end of lesson)',
  };
}

export interface ReportRow {
  glyph: string;
  shapeName: string;
  visual: 'pass' | 'fail';
  technique: 'pass' | 'fail';
  attempts: number;
}

export interface ReportView {
  empty: boolean;
  rows: ReportRow[];
  visualPercent: string;
  techniquePercent: string;
}

export function formatPercent(value: number | null): string {
  if (value === null) return 'n/a';
  return `${Math.round(value * 1000) / 10}%`;
}

export function reportView(card: ReportCard): ReportView {
  return {
    empty: card.perItem.length === 0,
    rows: card.perItem.map((item) => ({
      glyph: item.glyph,
      shapeName: item.shapeName,
      visual: item.visualOk ? 'pass' : 'fail',
      technique: item.techniqueOk ? 'pass' : 'fail',
      attempts: item.attemptsUsed,
    })),
    visualPercent: formatPercent(card.visualAccuracy),
    techniquePercent: formatPercent(card.techniqueAmongVisual),
  };
}

export function progressLabel(current: number, total: number): string {
  return `${Math.min(current + 1, total)} / ${total}`;
}
