import { describe, expect, it } from 'vitest';

import type { CritiqueView, ReportCard } from '../src/api.js';
import {
  feedbackView,
  formatPercent,
  progressLabel,
  reportView,
  STATUS_COLORS,
  strokeColor,
} from '../src/render.js';

describe('strokeColor', () => {
  it('maps each verdict to a distinct color', () => {
    expect(strokeColor('consistent')).toBe(STATUS_COLORS.consistent);
    expect(strokeColor('complete')).toBe(STATUS_COLORS.complete);
    expect(strokeColor('inconsistent')).toBe(STATUS_COLORS.inconsistent);
    expect(new Set(Object.values(STATUS_COLORS)).size).toBe(3);
  });
});

describe('feedbackView', () => {
  it('renders a passing critique with no rows', () => {
    const critique: CritiqueView = {
      responsePanel: 'Correct',
      critiquePanel: [],
      commentPanel: 'Well done.',
      nextItem: { shapeName: 'Mouth', glyph: '口' },
    };
    const view = feedbackView(critique);
    expect(view.response).toBe('Correct');
    expect(view.critiqueRows).toEqual([]);
    expect(view.comment).toBe('Well done.');
    expect(view.next).toBe('口');
  });

  it('keeps critique rows verbatim and marks the end of the lesson', () => {
    const critique: CritiqueView = {
      responsePanel: 'Visually correct - technique errors',
      critiquePanel: ['Stroke 1: drawn right-to-left; write left-to-right.'],
      commentPanel: 'Fix the flagged strokes.',
      nextItem: null,
    };
    const view = feedbackView(critique);
    expect(view.critiqueRows).toEqual(['Stroke 1: drawn right-to-left; write left-to-right.']);
    expect(view.next).toBe('(end of lesson)');
  });
});

describe('formatPercent', () => {
  it('formats fractions to one decimal place', () => {
    expect(formatPercent(1)).toBe('100%');
    expect(formatPercent(0.5)).toBe('50%');
    expect(formatPercent(2 / 3)).toBe('66.7%');
    expect(formatPercent(0)).toBe('0%');
  });

  it('shows n/a when the server reports null', () => {
    expect(formatPercent(null)).toBe('n/a');
  });
});

describe('reportView', () => {
  const card: ReportCard = {
    perItem: [
      { shapeName: 'Ten', glyph: '十', visualOk: true, techniqueOk: true, attemptsUsed: 1 },
      { shapeName: 'Mouth', glyph: '口', visualOk: true, techniqueOk: false, attemptsUsed: 2 },
      { shapeName: 'Ancient', glyph: '古', visualOk: false, techniqueOk: false, attemptsUsed: 1 },
    ],
    visualAccuracy: 2 / 3,
    techniqueAmongVisual: 0.5,
  };

  it('builds one row per item', () => {
    const view = reportView(card);
    expect(view.empty).toBe(false);
    expect(view.rows).toEqual([
      { glyph: '十', shapeName: 'Ten', visual: 'pass', technique: 'pass', attempts: 1 },
      { glyph: '口', shapeName: 'Mouth', visual: 'pass', technique: 'fail', attempts: 2 },
      { glyph: '古', shapeName: 'Ancient', visual: 'fail', technique: 'fail', attempts: 1 },
    ]);
    expect(view.visualPercent).toBe('66.7%');
    expect(view.techniquePercent).toBe('50%');
  });

  it('handles an empty report', () => {
    const view = reportView({ perItem: [], visualAccuracy: null, techniqueAmongVisual: null });
    expect(view.empty).toBe(true);
    expect(view.rows).toEqual([]);
    expect(view.visualPercent).toBe('n/a');
    expect(view.techniquePercent).toBe('n/a');
  });
});

describe('progressLabel', () => {
  it('is one-based and clamps at the end', () => {
    expect(progressLabel(0, 4)).toBe('1 / 4');
    expect(progressLabel(3, 4)).toBe('4 / 4');
    expect(progressLabel(4, 4)).toBe('4 / 4');
  });
});
