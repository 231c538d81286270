/**
 * Readers for the solver's run-directory artifacts: the convergence report
 * (JSON, schema version 1), shell-spectrum CSVs, and binary field snapshots
 * ("SQGF": magic, u32 version, u32 n, f64 box length, f64 time, n*n f64 LE).
 *
 * All readers are strictly read-only and validate before use.
 */

import { readFileSync, readdirSync } from "fs";
import path from "path";

export const SUPPORTED_SCHEMA_VERSION = 1;

export interface IterationRow {
  n: number;
  a_n: number;
  b_n: number;
  b_n_datum?: number;
  b_n_traj?: number;
  periodicity_residual: number;
}

export interface ConvergenceReport {
  schema_version: number;
  kind: string;
  iterations: IterationRow[];
  final: {
    converged: boolean;
    reason: string;
    K: number;
    K_over_F: number | null;
    theta0_norms: Record<string, number>;
    final_periodicity_residual?: number;
  };
}

export function loadReport(runDir: string): ConvergenceReport {
  const raw = readFileSync(path.join(runDir, "report.json"), "utf-8");
  const obj = JSON.parse(raw);
  if (obj.schema_version !== SUPPORTED_SCHEMA_VERSION) {
    throw new Error(
      `unsupported report schema version ${obj.schema_version} (expected ${SUPPORTED_SCHEMA_VERSION})`
    );
  }
  if (obj.kind !== "convergence_report" || !Array.isArray(obj.iterations) || !obj.final) {
    throw new Error("malformed convergence report");
  }
  return obj as ConvergenceReport;
}

export interface SpectrumRow {
  j: number;
  value: number;
}

export function parseSpectrumCsv(text: string): SpectrumRow[] {
  const lines = text.trim().split(/\r?\n/);
  if (lines.length < 2) {
    throw new Error("spectrum CSV has no data rows");
  }
  const header = lines[0].split(",").map((h) => h.trim());
  if (header[0] !== "j") {
    throw new Error(`unexpected spectrum CSV header: ${lines[0]}`);
  }
  return lines.slice(1).map((line, i) => {
    const [j, value] = line.split(",");
    const row = { j: Number(j), value: Number(value) };
    if (!Number.isFinite(row.j) || !Number.isFinite(row.value)) {
      throw new Error(`bad CSV row ${i + 2}: ${line}`);
    }
    return row;
  });
}

export function loadSpectrumCsv(csvPath: string): SpectrumRow[] {
  return parseSpectrumCsv(readFileSync(csvPath, "utf-8"));
}

export interface Snapshot {
  n: number;
  length: number;
  time: number;
  /** row-major n*n samples */
  values: Float64Array;
}

const SNAPSHOT_MAGIC = "SQGF";
const HEADER_BYTES = 4 + 4 + 4 + 8 + 8;

export function readSnapshot(file: string): Snapshot {
  const buf = readFileSync(file);
  if (buf.length < HEADER_BYTES) {
    throw new Error(`${file}: truncated snapshot`);
  }
  if (buf.toString("latin1", 0, 4) !== SNAPSHOT_MAGIC) {
    throw new Error(`${file}: bad snapshot magic`);
  }
  const version = buf.readUInt32LE(4);
  if (version !== 1) {
    throw new Error(`${file}: unsupported snapshot version ${version}`);
  }
  const n = buf.readUInt32LE(8);
  const length = buf.readDoubleLE(12);
  const time = buf.readDoubleLE(20);
  const expected = HEADER_BYTES + 8 * n * n;
  if (buf.length !== expected) {
    throw new Error(`${file}: expected ${expected} bytes, found ${buf.length}`);
  }
  const values = new Float64Array(n * n);
  for (let i = 0; i < n * n; i++) {
    values[i] = buf.readDoubleLE(HEADER_BYTES + 8 * i);
  }
  return { n, length, time, values };
}

/** Snapshot files of a run directory, ordered by time. */
export function listSnapshots(runDir: string): string[] {
  const dir = path.join(runDir, "snapshots");
  return readdirSync(dir)
    .filter((f) => f.endsWith(".sqgf"))
    .sort()
    .map((f) => path.join(dir, f));
}
