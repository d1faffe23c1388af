/** Minimal deterministic SVG output: fixed canvas, fixed-precision numbers. */

export const WIDTH = 640;
export const HEIGHT = 480;
export const MARGIN = 48;

export const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

export interface Bounds {
  xmin: number;
  xmax: number;
  ymin: number;
  ymax: number;
}

export function boundsOf(points: Array<[number, number]>): Bounds {
  let xmin = Infinity;
  let xmax = -Infinity;
  let ymin = Infinity;
  let ymax = -Infinity;
  for (const [x, y] of points) {
    if (x < xmin) xmin = x;
    if (x > xmax) xmax = x;
    if (y < ymin) ymin = y;
    if (y > ymax) ymax = y;
  }
  return { xmin, xmax, ymin, ymax };
}

function padded(b: Bounds, equalAspect: boolean): Bounds {
  let { xmin, xmax, ymin, ymax } = b;
  const spanX = Math.max(xmax - xmin, 1e-9);
  const spanY = Math.max(ymax - ymin, 1e-9);
  if (equalAspect) {
    // widen the short axis so one unit measures the same on both
    const usableX = WIDTH - 2 * MARGIN;
    const usableY = HEIGHT - 2 * MARGIN;
    const unit = Math.max(spanX / usableX, spanY / usableY);
    const cx = (xmin + xmax) / 2;
    const cy = (ymin + ymax) / 2;
    xmin = cx - (unit * usableX) / 2;
    xmax = cx + (unit * usableX) / 2;
    ymin = cy - (unit * usableY) / 2;
    ymax = cy + (unit * usableY) / 2;
  }
  const padX = 0.05 * (xmax - xmin);
  const padY = 0.05 * (ymax - ymin);
  return { xmin: xmin - padX, xmax: xmax + padX, ymin: ymin - padY, ymax: ymax + padY };
}

export class Mapper {
  private readonly b: Bounds;

  constructor(bounds: Bounds, equalAspect: boolean) {
    this.b = padded(bounds, equalAspect);
  }

  x(v: number): number {
    const t = (v - this.b.xmin) / (this.b.xmax - this.b.xmin);
    return MARGIN + t * (WIDTH - 2 * MARGIN);
  }

  y(v: number): number {
    const t = (v - this.b.ymin) / (this.b.ymax - this.b.ymin);
    return HEIGHT - MARGIN - t * (HEIGHT - 2 * MARGIN);
  }

  point(px: number, py: number): string {
    return `${this.x(px).toFixed(2)},${this.y(py).toFixed(2)}`;
  }
}

export function polyline(mapper: Mapper, pts: Array<[number, number]>, color: string, width = 1.2): string {
  const coords = pts.map(([x, y]) => mapper.point(x, y)).join(" ");
  return `<polyline fill="none" stroke="${color}" stroke-width="${width}" points="${coords}"/>`;
}

export function segment(mapper: Mapper, a: [number, number], b: [number, number], color: string, width = 1.5): string {
  return (
    `<line stroke="${color}" stroke-width="${width}" ` +
    `x1="${mapper.x(a[0]).toFixed(2)}" y1="${mapper.y(a[1]).toFixed(2)}" ` +
    `x2="${mapper.x(b[0]).toFixed(2)}" y2="${mapper.y(b[1]).toFixed(2)}"/>`
  );
}

export function marker(mapper: Mapper, p: [number, number], color: string, r = 3): string {
  return `<circle cx="${mapper.x(p[0]).toFixed(2)}" cy="${mapper.y(p[1]).toFixed(2)}" r="${r}" fill="${color}"/>`;
}

export function document(body: string[], xlabel: string, ylabel: string, title: string): string {
  const frame =
    `<rect x="${MARGIN}" y="${MARGIN}" width="${WIDTH - 2 * MARGIN}" ` +
    `height="${HEIGHT - 2 * MARGIN}" fill="none" stroke="#999" stroke-width="1"/>`;
  const labels = [
    `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-family="sans-serif" font-size="14">${title}</text>`,
    `<text x="${WIDTH / 2}" y="${HEIGHT - 12}" text-anchor="middle" font-family="sans-serif" font-size="12">${xlabel}</text>`,
    `<text x="16" y="${HEIGHT / 2}" text-anchor="middle" font-family="sans-serif" font-size="12" transform="rotate(-90 16 ${HEIGHT / 2})">${ylabel}</text>`,
  ];
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
    `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
    frame,
    ...labels,
    ...body,
    "</svg>",
  ].join("\n");
}
