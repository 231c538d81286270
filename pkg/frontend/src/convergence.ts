/**
 * Pass-distance convergence figure: B_n on a log axis with the fitted
 * geometric rate annotated, plus the per-pass periodicity residual.
 */

import { ConvergenceReport } from "./data.js";
import { STYLE, axes, circles, esc, log10Scale, linearScale, polyline, svgDocument } from "./svg.js";

/** Least-squares slope of log(b) against n; null when any value is nonpositive. */
export function fitGeometricRatio(bs: number[]): number | null {
  if (bs.length < 2 || bs.some((b) => b <= 0)) return null;
  const xs = bs.map((_, i) => i);
  const ys = bs.map((b) => Math.log(b));
  const mx = xs.reduce((a, b) => a + b, 0) / xs.length;
  const my = ys.reduce((a, b) => a + b, 0) / ys.length;
  let num = 0;
  let den = 0;
  for (let i = 0; i < xs.length; i++) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) ** 2;
  }
  return Math.exp(num / den);
}

export function renderConvergence(report: ConvergenceReport): string {
  const rows = report.iterations;
  const ns = rows.map((r) => r.n);
  const bs = rows.map((r) => r.b_n);
  const { width, height, margins } = STYLE;
  const box = { x0: margins.left, x1: width - margins.right, y0: height - margins.bottom, y1: margins.top };

  const parts: string[] = [];
  const allZero = bs.every((b) => b === 0);
  const xlo = ns.length ? Math.min(...ns) : 0;
  const xhi = ns.length ? Math.max(...ns, xlo + 1) : 1;
  const x = linearScale(xlo, xhi, box.x0, box.x1);

  if (allZero) {
    // zero solution: flat line pinned at the axis, no rate fit
    const y = linearScale(0, 1, box.y0, box.y1);
    parts.push(axes(x, y, box, { title: "Pass distance", xLabel: "pass n", yLabel: "B_n" }));
    parts.push(polyline(ns.map((n) => [x(n), y(0)] as [number, number]), STYLE.seriesColor));
    parts.push(`<text x="${box.x0 + 10}" y="${box.y1 + 18}" fill="${STYLE.axisColor}">all passes identically zero</text>`);
    return svgDocument(parts.join("\n"));
  }

  const positive = bs.filter((b) => b > 0);
  const lo = Math.min(...positive);
  const hi = Math.max(...positive);
  const y = log10Scale(lo / 2, hi * 2, box.y0, box.y1);
  parts.push(
    axes(x, y, box, { title: "Pass distance (log scale)", xLabel: "pass n", yLabel: "B_n" }, (v) =>
      v.toExponential(0)
    )
  );
  const pts = rows.filter((r) => r.b_n > 0).map((r) => [x(r.n), y(r.b_n)] as [number, number]);
  parts.push(polyline(pts, STYLE.seriesColor));
  parts.push(circles(pts, STYLE.seriesColor));

  const ratio = fitGeometricRatio(bs);
  if (ratio !== null) {
    parts.push(
      `<text x="${box.x1 - 8}" y="${box.y1 + 18}" text-anchor="end" fill="${STYLE.accentColor}">` +
        `fitted geometric ratio ${esc(ratio.toFixed(3))}</text>`
    );
  }
  const reason = report.final.converged ? "converged" : `failed: ${report.final.reason}`;
  parts.push(`<text x="${box.x0 + 8}" y="${box.y1 + 18}" fill="${STYLE.axisColor}">${esc(reason)}</text>`);
  return svgDocument(parts.join("\n"));
}

export function renderResidualTrace(report: ConvergenceReport): string {
  const rows = report.iterations.filter((r) => r.periodicity_residual > 0);
  const { width, height, margins } = STYLE;
  const box = { x0: margins.left, x1: width - margins.right, y0: height - margins.bottom, y1: margins.top };
  const parts: string[] = [];
  if (rows.length === 0) {
    const x = linearScale(0, 1, box.x0, box.x1);
    const y = linearScale(0, 1, box.y0, box.y1);
    parts.push(axes(x, y, box, { title: "Periodicity residual", xLabel: "pass n", yLabel: "residual" }));
    parts.push(`<text x="${box.x0 + 10}" y="${box.y1 + 18}" fill="${STYLE.axisColor}">residual identically zero</text>`);
    return svgDocument(parts.join("\n"));
  }
  const x = linearScale(rows[0].n, rows[rows.length - 1].n, box.x0, box.x1);
  const vals = rows.map((r) => r.periodicity_residual);
  const y = log10Scale(Math.min(...vals) / 2, Math.max(...vals) * 2, box.y0, box.y1);
  parts.push(
    axes(x, y, box, { title: "Periodicity residual per pass", xLabel: "pass n", yLabel: "endpoint gap" }, (v) =>
      v.toExponential(0)
    )
  );
  const pts = rows.map((r) => [x(r.n), y(r.periodicity_residual)] as [number, number]);
  parts.push(polyline(pts, STYLE.accentColor));
  parts.push(circles(pts, STYLE.accentColor));
  return svgDocument(parts.join("\n"));
}
