/**
 * Reading and writing the run-directory CSV schemas.
 *
 * The harness writes header-first, comma-separated, '.'-decimal files with
 * no quoting, so parsing is a straight split. Schemas are validated
 * column-by-column and violations name the file and line.
 */

import { readFileSync } from "node:fs";

export class CsvError extends Error {}

export interface Table {
  header: string[];
  rows: string[][];
}

export function parseCsv(text: string, source: string): Table {
  const lines = text.split("\n").filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new CsvError(`${source}: empty file, expected a header row`);
  }
  const header = lines[0].split(",");
  const rows = lines.slice(1).map((line, i) => {
    const cells = line.split(",");
    if (cells.length !== header.length) {
      throw new CsvError(
        `${source}:${i + 2}: expected ${header.length} columns, got ${cells.length}`,
      );
    }
    return cells;
  });
  return { header, rows };
}

export function readTable(path: string, expectedHeader: string[]): Table {
  let text: string;
  try {
    text = readFileSync(path, "utf-8");
  } catch {
    throw new CsvError(`cannot read ${path}`);
  }
  const table = parseCsv(text, path);
  if (expectedHeader.join(",") !== table.header.join(",")) {
    throw new CsvError(
      `${path}: header is "${table.header.join(",")}", expected "${expectedHeader.join(",")}"`,
    );
  }
  return table;
}

export function serializeCsv(header: string[], rows: (string | number)[][]): string {
  const body = rows.map((row) => row.map(formatCell).join(","));
  return [header.join(","), ...body].join("\n") + "\n";
}

function formatCell(value: string | number): string {
  if (typeof value === "string") return value;
  return Number.isInteger(value) ? value.toString() : value.toString();
}

function toNumber(cell: string, source: string): number {
  const value = Number(cell);
  if (!Number.isFinite(value)) {
    throw new CsvError(`${source}: not a number: "${cell}"`);
  }
  return value;
}

export interface CompositionRow {
  snapshotT: number;
  bufferKind: string;
  taskLabel: number;
  count: number;
  ratio: number;
}

export interface RewardRow {
  evalT: number;
  taskLabel: number;
  meanReturn: number;
  stdReturn: number;
  episodes: number;
}

export interface CuriosityRow {
  t: number;
  c: number;
  mu: number;
  snr: number;
  candidate: boolean;
  boundary: boolean;
}

export const COMPOSITION_HEADER = ["snapshot_t", "buffer_kind", "task_label", "count", "ratio"];
export const REWARDS_HEADER = ["eval_t", "task_label", "mean_return", "std_return", "episodes"];
export const CURIOSITY_HEADER = ["t", "c", "mu", "snr", "candidate", "boundary"];
export const BOUNDARIES_HEADER = ["t"];

export function readComposition(path: string): CompositionRow[] {
  return readTable(path, COMPOSITION_HEADER).rows.map((r) => ({
    snapshotT: toNumber(r[0], path),
    bufferKind: r[1],
    taskLabel: toNumber(r[2], path),
    count: toNumber(r[3], path),
    ratio: toNumber(r[4], path),
  }));
}

export function readRewards(path: string): RewardRow[] {
  return readTable(path, REWARDS_HEADER).rows.map((r) => ({
    evalT: toNumber(r[0], path),
    taskLabel: toNumber(r[1], path),
    meanReturn: toNumber(r[2], path),
    stdReturn: toNumber(r[3], path),
    episodes: toNumber(r[4], path),
  }));
}

export function readCuriosity(path: string): CuriosityRow[] {
  return readTable(path, CURIOSITY_HEADER).rows.map((r) => ({
    t: toNumber(r[0], path),
    c: toNumber(r[1], path),
    mu: toNumber(r[2], path),
    snr: toNumber(r[3], path),
    candidate: r[4] === "1",
    boundary: r[5] === "1",
  }));
}

export function readBoundaries(path: string): number[] {
  return readTable(path, BOUNDARIES_HEADER).rows.map((r) => toNumber(r[0], path));
}
