/**
 * Entry: shell-spectrum bar figure from a per-shell CSV.
 *
 * Usage: node dist/plot_spectrum_main.js SPECTRUM_CSV [OUT_DIR]
 */

import { mkdirSync, writeFileSync } from "fs";
import path from "path";

import { loadSpectrumCsv } from "./data.js";
import { renderSpectrum, spectrumCaption } from "./spectrum.js";

export function run(csvPath: string, outDir: string): string {
  const rows = loadSpectrumCsv(csvPath);
  mkdirSync(outDir, { recursive: true });
  const svg = renderSpectrum(rows, `Shell spectrum (${spectrumCaption(rows)})`);
  const target = path.join(outDir, "besov_spectrum.svg");
  writeFileSync(target, svg);
  return target;
}

const invokedDirectly = process.argv[1]?.endsWith("plot_spectrum_main.js");
if (invokedDirectly) {
  const [csvPath, outDir] = process.argv.slice(2);
  if (!csvPath) {
    console.error("usage: plot_spectrum_main SPECTRUM_CSV [OUT_DIR]");
    process.exit(2);
  }
  try {
    console.log(run(csvPath, outDir ?? "figures"));
  } catch (err) {
    console.error(String(err));
    process.exit(1);
  }
}
