// Two-panel figure: (a) friction/noise coefficients, (b) shared-noise
// trajectories -- mass curves dashed, candidate limits solid -- with a
// zoom inset over the final stretch.  Also the single-panel
// alpha(lambda) curve with its asymptotes.

import { FigureInputs, LambdaRow, TrajectorySeries } from './data';
import { Box, Scale, axes, document as svgDocument, el, extent, frame, label, polyline, px, ticks } from './svg';

const CANDIDATE_COLORS = ['#000000', '#909090', '#3b5b8f', '#a65e00'];

function massGrey(rank: number, count: number): string {
  const v = count > 1 ? Math.round(200 - (166 * rank) / (count - 1)) : 60;
  const hex = v.toString(16).padStart(2, '0');
  return `#${hex}${hex}${hex}`;
}

export interface RenderOptions {
  insetT0?: number;
  insetT1?: number;
}

function clip(series: TrajectorySeries, t0: number, t1: number): { t: number[]; x: number[] } {
  const t: number[] = [];
  const x: number[] = [];
  for (let i = 0; i < series.t.length; i++) {
    if (series.t[i] >= t0 && series.t[i] <= t1) {
      t.push(series.t[i]);
      x.push(series.x[i]);
    }
  }
  return { t, x };
}

function coefficientPanel(inputs: FigureInputs, box: Box): string {
  const { x, gamma, sigma } = inputs.coefficients;
  const [ylo, yhi] = extent([gamma, sigma]);
  const sx = new Scale(x[0], x[x.length - 1], box.x0, box.x1);
  const sy = new Scale(ylo, yhi, box.y1, box.y0);
  const out: string[] = [];
  out.push(label(box.x0, box.y0 - 12, '(a) coefficients', { 'font-weight': 'bold' }));
  out.push(axes(box, sx, sy, ticks(x[0], x[x.length - 1]), ticks(ylo, yhi)));
  out.push(polyline(x, gamma, sx, sy, { stroke: '#222222', 'stroke-width': 2, class: 'coefficient-gamma' }));
  out.push(polyline(x, sigma, sx, sy, { stroke: '#aaaaaa', 'stroke-width': 2, class: 'coefficient-sigma' }));
  out.push(label(box.x0 + 8, box.y0 + 14, 'gamma(x)', { fill: '#222222' }));
  out.push(label(box.x0 + 8, box.y0 + 28, 'sigma(x)', { fill: '#aaaaaa' }));
  out.push(label((box.x0 + box.x1) / 2, box.y1 + 30, 'x', { 'text-anchor': 'middle' }));
  return out.join('');
}

function drawSeries(
  inputs: FigureInputs,
  sx: Scale,
  sy: Scale,
  window?: { t0: number; t1: number },
): string {
  const out: string[] = [];
  inputs.masses.forEach((s, i) => {
    const data = window ? clip(s, window.t0, window.t1) : s;
    out.push(
      polyline(data.t, data.x, sx, sy, {
        stroke: massGrey(i, inputs.masses.length),
        'stroke-width': 1,
        'stroke-dasharray': '4,3',
        class: 'mass-trajectory',
      }),
    );
  });
  inputs.candidates.forEach((s, i) => {
    const data = window ? clip(s, window.t0, window.t1) : s;
    out.push(
      polyline(data.t, data.x, sx, sy, {
        stroke: CANDIDATE_COLORS[i % CANDIDATE_COLORS.length],
        'stroke-width': 1.8,
        class: 'candidate-trajectory',
      }),
    );
  });
  return out.join('');
}

function trajectoryPanel(inputs: FigureInputs, box: Box, options: RenderOptions): string {
  const all = [...inputs.masses, ...inputs.candidates];
  const tEnd = all[0].t[all[0].t.length - 1];
  const t0 = options.insetT0 ?? 0.9 * tEnd;
  const t1 = options.insetT1 ?? tEnd;
  if (!(t0 < t1)) {
    throw new Error(`inset window [${t0}, ${t1}] is empty`);
  }
  const [ylo, yhi] = extent(all.map((s) => s.x));
  const sx = new Scale(0, tEnd, box.x0, box.x1);
  const sy = new Scale(ylo, yhi, box.y1, box.y0);
  const out: string[] = [];
  out.push(label(box.x0, box.y0 - 12, '(b) trajectories', { 'font-weight': 'bold' }));
  out.push(axes(box, sx, sy, ticks(0, tEnd), ticks(ylo, yhi)));
  out.push(drawSeries(inputs, sx, sy));
  out.push(label((box.x0 + box.x1) / 2, box.y1 + 30, 't', { 'text-anchor': 'middle' }));

  // dashed marker around the inset window on the main axes
  const winData = all.map((s) => clip(s, t0, t1).x);
  const [wlo, whi] = extent(winData);
  out.push(
    el('rect', {
      x: px(sx.map(t0)),
      y: px(sy.map(whi)),
      width: px(sx.map(t1) - sx.map(t0)),
      height: px(sy.map(wlo) - sy.map(whi)),
      fill: 'none',
      stroke: '#555555',
      'stroke-dasharray': '3,3',
      class: 'inset-marker',
    }),
  );

  // the blow-up itself, framed inside the panel
  const ibox: Box = { x0: box.x0 + 14, y0: box.y0 + 10, x1: box.x0 + 150, y1: box.y0 + 112 };
  const isx = new Scale(t0, t1, ibox.x0, ibox.x1);
  const isy = new Scale(wlo, whi, ibox.y1, ibox.y0);
  const inset: string[] = [];
  inset.push(
    el('rect', {
      x: px(ibox.x0),
      y: px(ibox.y0),
      width: px(ibox.x1 - ibox.x0),
      height: px(ibox.y1 - ibox.y0),
      fill: '#ffffff',
      stroke: 'none',
    }),
  );
  inset.push(drawSeries(inputs, isx, isy, { t0, t1 }));
  inset.push(frame(ibox));
  out.push(el('g', { id: 'inset' }, inset.join('')));

  // legend under the inset
  let ly = ibox.y1 + 18;
  inputs.masses.forEach((s, i) => {
    out.push(
      el('line', {
        x1: px(ibox.x0),
        y1: px(ly - 3),
        x2: px(ibox.x0 + 22),
        y2: px(ly - 3),
        stroke: massGrey(i, inputs.masses.length),
        'stroke-dasharray': '4,3',
      }),
    );
    out.push(label(ibox.x0 + 28, ly, s.label, { 'font-size': 10 }));
    ly += 13;
  });
  inputs.candidates.forEach((s, i) => {
    out.push(
      el('line', {
        x1: px(ibox.x0),
        y1: px(ly - 3),
        x2: px(ibox.x0 + 22),
        y2: px(ly - 3),
        stroke: CANDIDATE_COLORS[i % CANDIDATE_COLORS.length],
        'stroke-width': 1.8,
      }),
    );
    out.push(label(ibox.x0 + 28, ly, s.label, { 'font-size': 10 }));
    ly += 13;
  });
  const winner = inputs.report.winner['pathwise'];
  if (winner) {
    out.push(label(box.x1, box.y0 - 12, `winner: ${winner}`, { 'text-anchor': 'end', 'font-size': 10 }));
  }
  return out.join('');
}

export function renderFigure(inputs: FigureInputs, options: RenderOptions = {}): string {
  const panelA: Box = { x0: 60, y0: 45, x1: 420, y1: 345 };
  const panelB: Box = { x0: 520, y0: 45, x1: 885, y1: 345 };
  const body =
    el('g', { id: 'panel-a' }, coefficientPanel(inputs, panelA)) +
    el('g', { id: 'panel-b' }, trajectoryPanel(inputs, panelB, options));
  return svgDocument(920, 400, body);
}

const ALPHA_CLAMP: [number, number] = [-3, 4];

export function renderLambdaFigure(rows: LambdaRow[]): string {
  if (rows.length === 0) {
    throw new Error('lambda table is empty');
  }
  const box: Box = { x0: 70, y0: 45, x1: 520, y1: 360 };
  const lam = rows.map((r) => r.lambda);
  const sx = new Scale(lam[0], lam[lam.length - 1], box.x0, box.x1);
  const sy = new Scale(ALPHA_CLAMP[0], ALPHA_CLAMP[1], box.y1, box.y0);
  const out: string[] = [];
  out.push(label(box.x0, box.y0 - 12, 'alpha(lambda) = lambda / (2 (lambda - 1))', { 'font-weight': 'bold' }));
  out.push(axes(box, sx, sy, ticks(lam[0], lam[lam.length - 1]), ticks(ALPHA_CLAMP[0], ALPHA_CLAMP[1], 8)));

  for (const side of ['left', 'right'] as const) {
    const branch = rows.filter((r) =>
      side === 'left' ? r.lambda < 1 : r.lambda > 1,
    ).filter((r) => r.alpha >= ALPHA_CLAMP[0] && r.alpha <= ALPHA_CLAMP[1]);
    if (branch.length > 1) {
      out.push(
        polyline(branch.map((r) => r.lambda), branch.map((r) => r.alpha), sx, sy, {
          stroke: '#000000',
          'stroke-width': 1.8,
          class: `alpha-branch-${side}`,
        }),
      );
    }
  }
  // horizontal asymptote alpha = 1/2, approached only as |lambda| -> inf
  out.push(
    el('line', {
      x1: px(box.x0),
      y1: px(sy.map(0.5)),
      x2: px(box.x1),
      y2: px(sy.map(0.5)),
      stroke: '#666666',
      'stroke-dasharray': '2,3',
      id: 'alpha-half-asymptote',
    }),
  );
  out.push(label(box.x1 - 4, sy.map(0.5) - 4, 'alpha = 1/2', { 'text-anchor': 'end', 'font-size': 10, fill: '#666666' }));
  // vertical asymptote at the singular exponent lambda = 1
  out.push(
    el('line', {
      x1: px(sx.map(1)),
      y1: px(box.y0),
      x2: px(sx.map(1)),
      y2: px(box.y1),
      stroke: '#666666',
      'stroke-dasharray': '6,3',
      id: 'lambda-one-asymptote',
    }),
  );
  // reference conventions: Ito at (0, 0), anti-Ito at (2, 1)
  const sq = 4;
  out.push(
    el('rect', {
      x: px(sx.map(0) - sq),
      y: px(sy.map(0) - sq),
      width: px(2 * sq),
      height: px(2 * sq),
      fill: '#ffffff',
      stroke: '#000000',
      class: 'marker-ito',
    }),
  );
  const dx = sx.map(2);
  const dy = sy.map(1);
  out.push(
    el('polygon', {
      points: `${px(dx)},${px(dy - 5)} ${px(dx + 5)},${px(dy)} ${px(dx)},${px(dy + 5)} ${px(dx - 5)},${px(dy)}`,
      fill: '#ffffff',
      stroke: '#000000',
      class: 'marker-anti-ito',
    }),
  );
  out.push(label(sx.map(0) + 8, sy.map(0) + 4, 'Ito (0, 0)', { 'font-size': 10 }));
  out.push(label(dx + 8, dy + 4, 'anti-Ito (2, 1)', { 'font-size': 10 }));
  out.push(label((box.x0 + box.x1) / 2, box.y1 + 30, 'lambda', { 'text-anchor': 'middle' }));
  return svgDocument(560, 420, el('g', { id: 'lambda-panel' }, out.join('')));
}
