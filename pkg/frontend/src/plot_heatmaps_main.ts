/**
 * Entry: field heatmaps over one period from a run's snapshots.
 *
 * Usage: node dist/plot_heatmaps_main.js RUN_DIR [OUT_DIR] [COUNT]
 */

import { mkdirSync, writeFileSync } from "fs";
import path from "path";

import { renderPeriodHeatmaps } from "./heatmaps.js";

export function run(runDir: string, outDir: string, count: number): string[] {
  const frames = renderPeriodHeatmaps(runDir, count);
  mkdirSync(outDir, { recursive: true });
  for (const frame of frames) {
    writeFileSync(path.join(outDir, frame.name), frame.svg);
  }
  return frames.map((f) => f.name);
}

const invokedDirectly = process.argv[1]?.endsWith("plot_heatmaps_main.js");
if (invokedDirectly) {
  const [runDir, outDir, count] = process.argv.slice(2);
  if (!runDir) {
    console.error("usage: plot_heatmaps_main RUN_DIR [OUT_DIR] [COUNT]");
    process.exit(2);
  }
  try {
    const written = run(runDir, outDir ?? "figures", count ? Number(count) : 6);
    console.log(written.join("\n"));
  } catch (err) {
    console.error(String(err));
    process.exit(1);
  }
}
