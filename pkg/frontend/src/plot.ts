/** SVG scatter rendering of server-provided plot data.
 *
 * Points are colored by the companion's median-split group; censored
 * observations render hollow.  All numbers come from the server; this
 * module only draws.
 */

import type { PlotView } from './types.js';

const WIDTH = 320;
const HEIGHT = 240;
const MARGIN = 36;
const GROUP_COLORS: Record<string, string> = { low: '#1f77b4', high: '#d62728' };

function scale(
  values: number[],
  lo: number,
  hi: number,
  log: boolean,
): (v: number) => number {
  let min = Math.min(...values);
  let max = Math.max(...values);
  if (log) {
    const positive = values.filter((v) => v > 0);
    min = Math.log(Math.min(...positive));
    max = Math.log(Math.max(...positive));
  }
  if (max === min) {
    max = min + 1;
  }
  return (v: number) => {
    const t = ((log ? Math.log(Math.max(v, 1e-300)) : v) - min) / (max - min);
    return lo + t * (hi - lo);
  };
}

export function renderPlotSvg(view: PlotView): string {
  const xs = view.points.map((p) => p.x);
  const ys = view.points.map((p) => p.y);
  const sx = scale(xs, MARGIN, WIDTH - 8, false);
  const sy = scale(ys, HEIGHT - MARGIN, 8, view.log_scale);

  const dots = view.points
    .map((p) => {
      const color = GROUP_COLORS[p.group] ?? '#555';
      const fill = p.censored ? 'none' : color;
      return (
        `<circle cx="${sx(p.x).toFixed(1)}" cy="${sy(p.y).toFixed(1)}" r="3" ` +
        `fill="${fill}" stroke="${color}" stroke-width="1.2"/>`
      );
    })
    .join('');

  const yLabel = view.log_scale ? `${view.y_label} (log)` : view.y_label;
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${WIDTH} ${HEIGHT}" ` +
    `class="scatter" role="img">` +
    `<line x1="${MARGIN}" y1="${HEIGHT - MARGIN}" x2="${WIDTH - 8}" ` +
    `y2="${HEIGHT - MARGIN}" stroke="#999"/>` +
    `<line x1="${MARGIN}" y1="8" x2="${MARGIN}" y2="${HEIGHT - MARGIN}" stroke="#999"/>` +
    `<text x="${(WIDTH + MARGIN) / 2}" y="${HEIGHT - 8}" text-anchor="middle" ` +
    `font-size="11">${view.x_label}</text>` +
    `<text x="12" y="${HEIGHT / 2}" font-size="11" ` +
    `transform="rotate(-90 12 ${HEIGHT / 2})" text-anchor="middle">${yLabel}</text>` +
    `<text x="${WIDTH - 10}" y="16" text-anchor="end" font-size="10" fill="#555">` +
    `${view.group_label}: ` +
    `<tspan fill="${GROUP_COLORS.low}">low</tspan> / ` +
    `<tspan fill="${GROUP_COLORS.high}">high</tspan></text>` +
    dots +
    `</svg>`
  );
}
