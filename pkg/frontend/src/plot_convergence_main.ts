/**
 * Entry: convergence figures from a completed run directory.
 *
 * Usage: node dist/plot_convergence_main.js RUN_DIR [OUT_DIR]
 * Writes convergence.svg and periodicity_residual.svg; exits nonzero on
 * missing or invalid inputs.  Never writes into RUN_DIR.
 */

import { mkdirSync, writeFileSync } from "fs";
import path from "path";

import { renderConvergence, renderResidualTrace } from "./convergence.js";
import { loadReport } from "./data.js";

export function run(runDir: string, outDir: string): string[] {
  const report = loadReport(runDir);
  mkdirSync(outDir, { recursive: true });
  const targets: Array<[string, string]> = [
    ["convergence.svg", renderConvergence(report)],
    ["periodicity_residual.svg", renderResidualTrace(report)],
  ];
  for (const [name, svg] of targets) {
    writeFileSync(path.join(outDir, name), svg);
  }
  return targets.map(([name]) => name);
}

const invokedDirectly = process.argv[1]?.endsWith("plot_convergence_main.js");
if (invokedDirectly) {
  const [runDir, outDir] = process.argv.slice(2);
  if (!runDir) {
    console.error("usage: plot_convergence_main RUN_DIR [OUT_DIR]");
    process.exit(2);
  }
  try {
    const written = run(runDir, outDir ?? "figures");
    console.log(written.join("\n"));
  } catch (err) {
    console.error(String(err));
    process.exit(1);
  }
}
