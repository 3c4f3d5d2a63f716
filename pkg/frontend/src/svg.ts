// Minimal deterministic SVG assembly: plain string building, fixed-point
// coordinates, no DOM and no environment-dependent state.

export function px(v: number): string {
  const s = v.toFixed(2);
  return s === '-0.00' ? '0.00' : s;
}

export function tickLabel(v: number): string {
  if (v === 0) return '0';
  const a = Math.abs(v);
  const s = a >= 1000 || a < 0.01 ? v.toExponential(1) : v.toPrecision(3);
  return String(Number(s));
}

export function el(name: string, attrs: Record<string, string | number>, body = ''): string {
  const parts = Object.entries(attrs)
    .map(([k, v]) => `${k}="${v}"`)
    .join(' ');
  return body === '' ? `<${name} ${parts}/>` : `<${name} ${parts}>${body}</${name}>`;
}

export class Scale {
  constructor(
    private d0: number,
    private d1: number,
    private r0: number,
    private r1: number,
  ) {
    if (d1 === d0) {
      // degenerate data range: spread it so the curve sits mid-panel
      this.d0 -= 0.5;
      this.d1 += 0.5;
    }
  }

  map(v: number): number {
    return this.r0 + ((v - this.d0) / (this.d1 - this.d0)) * (this.r1 - this.r0);
  }
}

export function polyline(
  t: number[],
  x: number[],
  sx: Scale,
  sy: Scale,
  attrs: Record<string, string | number>,
): string {
  const pts: string[] = [];
  for (let i = 0; i < t.length; i++) {
    pts.push(`${px(sx.map(t[i]))},${px(sy.map(x[i]))}`);
  }
  return el('polyline', { points: pts.join(' '), fill: 'none', ...attrs });
}

export interface Box {
  x0: number;
  y0: number;
  x1: number;
  y1: number;
}

export function frame(box: Box): string {
  return el('rect', {
    x: px(box.x0),
    y: px(box.y0),
    width: px(box.x1 - box.x0),
    height: px(box.y1 - box.y0),
    fill: 'none',
    stroke: '#000',
    'stroke-width': 1,
  });
}

export function axes(box: Box, sx: Scale, sy: Scale, xt: number[], yt: number[]): string {
  const out: string[] = [frame(box)];
  for (const v of xt) {
    const X = sx.map(v);
    out.push(el('line', { x1: px(X), y1: px(box.y1), x2: px(X), y2: px(box.y1 + 4), stroke: '#000' }));
    out.push(
      el(
        'text',
        { x: px(X), y: px(box.y1 + 16), 'font-size': 10, 'text-anchor': 'middle', 'font-family': 'sans-serif' },
        tickLabel(v),
      ),
    );
  }
  for (const v of yt) {
    const Y = sy.map(v);
    out.push(el('line', { x1: px(box.x0 - 4), y1: px(Y), x2: px(box.x0), y2: px(Y), stroke: '#000' }));
    out.push(
      el(
        'text',
        { x: px(box.x0 - 7), y: px(Y + 3), 'font-size': 10, 'text-anchor': 'end', 'font-family': 'sans-serif' },
        tickLabel(v),
      ),
    );
  }
  return out.join('');
}

export function ticks(lo: number, hi: number, n = 5): number[] {
  const out: number[] = [];
  for (let i = 0; i < n; i++) {
    out.push(lo + ((hi - lo) * i) / (n - 1));
  }
  return out;
}

export function extent(arrays: number[][]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const arr of arrays) {
    for (const v of arr) {
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
  }
  const pad = 0.05 * (hi - lo || 1);
  return [lo - pad, hi + pad];
}

export function label(x: number, y: number, text: string, attrs: Record<string, string | number> = {}): string {
  return el('text', { x: px(x), y: px(y), 'font-size': 11, 'font-family': 'sans-serif', ...attrs }, text);
}

export function document(width: number, height: number, body: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}">` +
    el('rect', { x: 0, y: 0, width, height, fill: '#fff' }) +
    body +
    '</svg>\n'
  );
}
