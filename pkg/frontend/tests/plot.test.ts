import { describe, expect, it } from 'vitest';

import { renderPlotSvg } from '../src/plot.js';
import type { PlotView } from '../src/types.js';

const view: PlotView = {
  points: [
    { x: 0, y: 1, group: 'low', censored: false },
    { x: 1, y: 2, group: 'high', censored: false },
    { x: 2, y: 4, group: 'high', censored: true },
  ],
  x_label: 'x12',
  y_label: 'observed time',
  group_label: 'x7 vs median',
  log_scale: true,
};

describe('scatter rendering', () => {
  it('emits one circle per point', () => {
    const svg = renderPlotSvg(view);
    expect(svg.match(/<circle /g)?.length).toBe(3);
  });

  it('censored points are hollow, groups keep their colors', () => {
    const svg = renderPlotSvg(view);
    expect(svg).toContain('fill="none"');
    expect(svg).toContain('#1f77b4');
    expect(svg).toContain('#d62728');
  });

  it('labels come straight from the server payload', () => {
    const svg = renderPlotSvg(view);
    expect(svg).toContain('x12');
    expect(svg).toContain('observed time (log)');
    expect(svg).toContain('x7 vs median');
  });

  it('degenerate single-value axes still render', () => {
    const flat: PlotView = {
      ...view,
      log_scale: false,
      points: [
        { x: 5, y: 7, group: 'low', censored: false },
        { x: 5, y: 7, group: 'low', censored: false },
      ],
    };
    const svg = renderPlotSvg(flat);
    expect(svg).toContain('<svg');
    expect(svg).not.toContain('NaN');
  });
});
