/**
 * Orchestration: read a run directory, write images plus sidecars.
 *
 * The output path is a directory; file names inside it are deterministic:
 * one `<buffer_kind>_composition.png` per composition row group,
 * `rewards.png`, `curiosity.png`, each with `<image>.data.csv` (and a
 * `<image>.markers.csv` where the figure carries vertical markers).
 * Run directories are never written to.
 */

import { mkdirSync, writeFileSync } from "node:fs";
import { join } from "node:path";

import {
  BOUNDARIES_HEADER,
  COMPOSITION_HEADER,
  CsvError,
  CURIOSITY_HEADER,
  readBoundaries,
  readTable,
  REWARDS_HEADER,
} from "./csv.js";
import { compositionFigure, curiosityFigure, rewardsFigure, type Figure } from "./charts.js";

export const KINDS = ["composition", "rewards", "curiosity"] as const;
export type PlotKind = (typeof KINDS)[number];

function sanitize(name: string): string {
  return name.replace(/[^A-Za-z0-9._-]+/g, "-");
}

function emit(outDir: string, imageName: string, figure: Figure): string[] {
  const imagePath = join(outDir, imageName);
  writeFileSync(imagePath, figure.png);
  const written = [imagePath];
  for (const [suffix, text] of figure.sidecars) {
    const sidecarPath = `${imagePath}.${suffix}`;
    writeFileSync(sidecarPath, text);
    written.push(sidecarPath);
  }
  return written;
}

/** Renders one figure kind from a run directory; returns written paths. */
export function plotRun(
  runDir: string,
  kind: PlotKind,
  outDir: string,
  markers?: number[],
): string[] {
  mkdirSync(outDir, { recursive: true });
  if (kind === "composition") {
    const path = join(runDir, "composition.csv");
    const table = readTable(path, COMPOSITION_HEADER);
    if (table.rows.length === 0) {
      throw new CsvError(`${path}: no data (header only)`);
    }
    const kinds = [...new Set(table.rows.map((r) => r[1]))].sort();
    const written: string[] = [];
    for (const bufferKind of kinds) {
      const figure = compositionFigure(table, bufferKind, path);
      written.push(...emit(outDir, `${sanitize(bufferKind)}_composition.png`, figure));
    }
    return written;
  }
  if (kind === "rewards") {
    const path = join(runDir, "rewards.csv");
    const table = readTable(path, REWARDS_HEADER);
    const markerSteps = markers ?? readBoundariesIfPresent(runDir);
    const figure = rewardsFigure(table, markerSteps, path);
    return emit(outDir, "rewards.png", figure);
  }
  const path = join(runDir, "curiosity.csv");
  const figure = curiosityFigure(readTable(path, CURIOSITY_HEADER), path);
  return emit(outDir, "curiosity.png", figure);
}

function readBoundariesIfPresent(runDir: string): number[] {
  try {
    return readBoundaries(join(runDir, "boundaries.csv"));
  } catch {
    return [];
  }
}

export { BOUNDARIES_HEADER };
