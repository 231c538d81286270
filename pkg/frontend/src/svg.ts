/**
 * Small hand-rolled SVG chart kit: line charts on linear/log axes, bar
 * charts, and cell heatmaps.  No DOM, no dependencies; every builder
 * returns a complete standalone SVG document string.
 */

export interface Margins {
  top: number;
  right: number;
  bottom: number;
  left: number;
}

export const STYLE = {
  width: 720,
  height: 480,
  margins: { top: 48, right: 24, bottom: 56, left: 72 } as Margins,
  font: "13px 'DejaVu Sans', sans-serif",
  axisColor: "#444444",
  gridColor: "#dddddd",
  seriesColor: "#2a6fdb",
  accentColor: "#c84b4b",
  background: "#ffffff",
};

export function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function svgDocument(body: string, width = STYLE.width, height = STYLE.height): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}" font-family="DejaVu Sans, sans-serif" font-size="13">\n` +
    `<rect width="${width}" height="${height}" fill="${STYLE.background}"/>\n` +
    body +
    "\n</svg>\n"
  );
}

export interface Scale {
  (v: number): number;
  ticks: number[];
}

export function linearScale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  const span = hi - lo || 1;
  const fn = ((v: number) => outLo + ((v - lo) / span) * (outHi - outLo)) as Scale;
  const step = niceStep(span / 5);
  const ticks: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + 1e-12 * Math.abs(span); t += step) {
    ticks.push(Number(t.toPrecision(12)));
  }
  fn.ticks = ticks;
  return fn;
}

export function log10Scale(lo: number, hi: number, outLo: number, outHi: number): Scale {
  const llo = Math.log10(lo);
  const lhi = Math.log10(hi);
  const span = lhi - llo || 1;
  const fn = ((v: number) => outLo + ((Math.log10(v) - llo) / span) * (outHi - outLo)) as Scale;
  const ticks: number[] = [];
  for (let e = Math.ceil(llo); e <= Math.floor(lhi); e++) {
    ticks.push(10 ** e);
  }
  fn.ticks = ticks.length ? ticks : [lo, hi];
  return fn;
}

function niceStep(raw: number): number {
  const mag = 10 ** Math.floor(Math.log10(Math.abs(raw) || 1));
  const r = raw / mag;
  if (r <= 1) return mag;
  if (r <= 2) return 2 * mag;
  if (r <= 5) return 5 * mag;
  return 10 * mag;
}

export function formatTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 1e4 || a < 1e-3) return v.toExponential(0).replace("e", "e");
  return String(Number(v.toPrecision(6)));
}

export function axes(
  x: Scale,
  y: Scale,
  box: { x0: number; x1: number; y0: number; y1: number },
  labels: { title: string; xLabel: string; yLabel: string },
  yFormat: (v: number) => string = formatTick
): string {
  const parts: string[] = [];
  const { x0, x1, y0, y1 } = box;
  for (const t of y.ticks) {
    const yy = y(t);
    parts.push(`<line x1="${x0}" y1="${yy}" x2="${x1}" y2="${yy}" stroke="${STYLE.gridColor}"/>`);
    parts.push(
      `<text x="${x0 - 8}" y="${yy + 4}" text-anchor="end" fill="${STYLE.axisColor}">${esc(yFormat(t))}</text>`
    );
  }
  for (const t of x.ticks) {
    const xx = x(t);
    parts.push(
      `<text x="${xx}" y="${y0 + 20}" text-anchor="middle" fill="${STYLE.axisColor}">${esc(formatTick(t))}</text>`
    );
  }
  parts.push(`<line x1="${x0}" y1="${y0}" x2="${x1}" y2="${y0}" stroke="${STYLE.axisColor}"/>`);
  parts.push(`<line x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}" stroke="${STYLE.axisColor}"/>`);
  parts.push(
    `<text x="${(x0 + x1) / 2}" y="26" text-anchor="middle" font-size="16" fill="#111">${esc(labels.title)}</text>`
  );
  parts.push(
    `<text x="${(x0 + x1) / 2}" y="${y0 + 42}" text-anchor="middle" fill="${STYLE.axisColor}">${esc(labels.xLabel)}</text>`
  );
  parts.push(
    `<text transform="rotate(-90 18 ${(y0 + y1) / 2})" x="18" y="${(y0 + y1) / 2}" ` +
      `text-anchor="middle" fill="${STYLE.axisColor}">${esc(labels.yLabel)}</text>`
  );
  return parts.join("\n");
}

export function polyline(points: Array<[number, number]>, color: string, width = 1.8): string {
  const pts = points.map(([a, b]) => `${a.toFixed(2)},${b.toFixed(2)}`).join(" ");
  return `<polyline points="${pts}" fill="none" stroke="${color}" stroke-width="${width}"/>`;
}

export function circles(points: Array<[number, number]>, color: string, r = 3): string {
  return points
    .map(([a, b]) => `<circle cx="${a.toFixed(2)}" cy="${b.toFixed(2)}" r="${r}" fill="${color}"/>`)
    .join("\n");
}

/** Diverging blue-white-red map on [-1, 1]. */
export function divergingColor(v: number): string {
  const t = Math.max(-1, Math.min(1, v));
  const lerp = (a: number, b: number, w: number) => Math.round(a + (b - a) * w);
  let r: number, g: number, b: number;
  if (t < 0) {
    const w = 1 + t;
    [r, g, b] = [lerp(33, 255, w), lerp(102, 255, w), lerp(172, 255, w)];
  } else {
    const w = 1 - t;
    [r, g, b] = [lerp(178, 255, w), lerp(24, 255, w), lerp(43, 255, w)];
  }
  return `rgb(${r},${g},${b})`;
}
