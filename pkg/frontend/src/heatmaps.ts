/**
 * Field heatmaps over one period: `count` frames at uniform stored times,
 * one SVG per frame, symmetric diverging color scale shared by all frames.
 */

import { Snapshot, listSnapshots, readSnapshot } from "./data.js";
import { divergingColor, esc, svgDocument } from "./svg.js";

export interface HeatmapFrame {
  name: string;
  time: number;
  svg: string;
  /** the color grid actually rendered, for visual-identity checks */
  cells: string[];
}

export function renderHeatmap(snap: Snapshot, scale: number, title: string): { svg: string; cells: string[] } {
  const n = snap.n;
  const size = 560;
  const cell = size / n;
  const pad = 36;
  const cells: string[] = new Array(n * n);
  const rects: string[] = [];
  for (let i = 0; i < n; i++) {
    for (let j = 0; j < n; j++) {
      const v = scale > 0 ? snap.values[i * n + j] / scale : 0;
      const color = divergingColor(v);
      cells[i * n + j] = color;
      rects.push(
        `<rect x="${(pad + j * cell).toFixed(2)}" y="${(pad + i * cell).toFixed(2)}" ` +
          `width="${cell.toFixed(2)}" height="${cell.toFixed(2)}" fill="${color}"/>`
      );
    }
  }
  const body =
    `<text x="${pad + size / 2}" y="24" text-anchor="middle" font-size="16" fill="#111">${esc(title)}</text>\n` +
    rects.join("\n") +
    `\n<rect x="${pad}" y="${pad}" width="${size}" height="${size}" fill="none" stroke="#444"/>`;
  return { svg: svgDocument(body, size + 2 * pad, size + 2 * pad), cells };
}

/** Pick `count` frame indices at uniform times across the stored samples. */
export function uniformFrameIndices(times: number[], count: number): number[] {
  if (count < 1) throw new Error("frame count must be >= 1");
  if (times.length === 1) return new Array(count).fill(0);
  const t0 = times[0];
  const t1 = times[times.length - 1];
  const targets = Array.from({ length: count }, (_, k) => t0 + ((t1 - t0) * k) / Math.max(count - 1, 1));
  return targets.map((t) => {
    let best = 0;
    for (let i = 1; i < times.length; i++) {
      if (Math.abs(times[i] - t) < Math.abs(times[best] - t)) best = i;
    }
    return best;
  });
}

export function renderPeriodHeatmaps(runDir: string, count: number): HeatmapFrame[] {
  const files = listSnapshots(runDir);
  if (files.length === 0) {
    throw new Error(`no snapshots under ${runDir}`);
  }
  const snaps = files.map(readSnapshot);
  const times = snaps.map((s) => s.time);
  const indices = uniformFrameIndices(times, count);
  const scale = Math.max(...snaps.map((s) => s.values.reduce((m, v) => Math.max(m, Math.abs(v)), 0)));
  return indices.map((idx, k) => {
    const snap = snaps[idx];
    const { svg, cells } = renderHeatmap(snap, scale, `t = ${snap.time.toPrecision(4)}`);
    return { name: `heatmap_${String(k).padStart(2, "0")}.svg`, time: snap.time, svg, cells };
  });
}
