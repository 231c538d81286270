/**
 * Shell-spectrum bar figure from the solver's per-shell CSV
 * (columns: j, weighted shell norm).
 */

import { SpectrumRow } from "./data.js";
import { STYLE, axes, esc, linearScale, svgDocument } from "./svg.js";

export function renderSpectrum(rows: SpectrumRow[], title = "Shell spectrum"): string {
  if (rows.length === 0) {
    throw new Error("spectrum CSV contained no rows");
  }
  const { width, height, margins } = STYLE;
  const box = { x0: margins.left, x1: width - margins.right, y0: height - margins.bottom, y1: margins.top };
  const js = rows.map((r) => r.j);
  const vmax = Math.max(...rows.map((r) => r.value), 0);
  const x = linearScale(Math.min(...js) - 0.5, Math.max(...js) + 0.5, box.x0, box.x1);
  const y = linearScale(0, vmax > 0 ? vmax * 1.1 : 1, box.y0, box.y1);

  const parts: string[] = [];
  parts.push(axes(x, y, box, { title, xLabel: "shell index j", yLabel: "2^(s j) shell norm" }, (v) =>
    v === 0 ? "0" : v.toExponential(1)
  ));
  const slot = (box.x1 - box.x0) / rows.length;
  const barWidth = Math.min(36, slot * 0.7);
  for (const r of rows) {
    const cx = x(r.j);
    const top = y(r.value);
    const h = box.y0 - top;
    parts.push(
      `<rect x="${(cx - barWidth / 2).toFixed(2)}" y="${top.toFixed(2)}" ` +
        `width="${barWidth.toFixed(2)}" height="${Math.max(h, 0).toFixed(2)}" ` +
        `fill="${STYLE.seriesColor}" data-shell="${r.j}" data-value="${r.value}"/>`
    );
  }
  return svgDocument(parts.join("\n"));
}

/** Shells carrying nonzero content, for assertions and captions. */
export function activeShells(rows: SpectrumRow[], eps = 1e-12): number[] {
  const vmax = Math.max(...rows.map((r) => r.value), 0);
  return rows.filter((r) => r.value > eps * Math.max(vmax, 1)).map((r) => r.j);
}

export function spectrumCaption(rows: SpectrumRow[]): string {
  const live = activeShells(rows);
  return live.length === 1 ? `single shell j=${live[0]}` : `${live.length} active shells: ${esc(live.join(", "))}`;
}
