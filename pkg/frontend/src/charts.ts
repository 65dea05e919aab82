/**
 * Figure builders: each returns PNG bytes plus machine-readable sidecar
 * tables that echo exactly the data that was drawn.
 *
 * Sidecars reuse the input's own cell text (no numeric reformatting), so
 * a sidecar is byte-stable across invocations and directly comparable to
 * the source rows. Correctness checks diff sidecars; the images are for
 * eyes.
 */

import {
  AXIS_COLOR,
  GRID_COLOR,
  MARKER_COLOR,
  PALETTE,
  Raster,
  type Rgb,
} from "./png.js";
import { CsvError, serializeCsv, type Table } from "./csv.js";

const WIDTH = 800;
const HEIGHT = 480;
const MARGIN = { left: 60, right: 20, top: 20, bottom: 40 };

export interface Figure {
  png: Buffer;
  /** sidecar file name suffix -> CSV text */
  sidecars: Map<string, string>;
}

function plotArea() {
  return {
    x0: MARGIN.left,
    y0: MARGIN.top,
    w: WIDTH - MARGIN.left - MARGIN.right,
    h: HEIGHT - MARGIN.top - MARGIN.bottom,
  };
}

function frame(raster: Raster): void {
  const { x0, y0, w, h } = plotArea();
  raster.hline(y0 + h, x0, x0 + w, AXIS_COLOR);
  raster.vline(x0, y0, y0 + h, AXIS_COLOR);
}

function color(i: number): Rgb {
  return PALETTE[i % PALETTE.length];
}

function requireRows(table: Table, source: string): void {
  if (table.rows.length === 0) {
    throw new CsvError(`${source}: no data (header only)`);
  }
}

/** Grouped bars: one group per snapshot, one bar per task label, y in [0,1]. */
export function compositionFigure(table: Table, bufferKind: string, source: string): Figure {
  const rows = table.rows.filter((r) => r[1] === bufferKind);
  if (rows.length === 0) {
    throw new CsvError(`${source}: no data for buffer kind "${bufferKind}"`);
  }
  rows.sort((a, b) => Number(a[0]) - Number(b[0]) || Number(a[2]) - Number(b[2]));
  const snapshots = [...new Set(rows.map((r) => r[0]))];
  const labels = [...new Set(rows.map((r) => Number(r[2])))].sort((a, b) => a - b);

  const raster = new Raster(WIDTH, HEIGHT);
  const { x0, y0, w, h } = plotArea();
  for (const frac of [0.25, 0.5, 0.75, 1.0]) {
    raster.hline(y0 + h - frac * h, x0, x0 + w, GRID_COLOR);
  }
  frame(raster);

  const groupWidth = w / snapshots.length;
  const barWidth = Math.max(2, Math.floor((groupWidth * 0.8) / labels.length));
  for (const row of rows) {
    const group = snapshots.indexOf(row[0]);
    const label = labels.indexOf(Number(row[2]));
    const ratio = Number(row[4]);
    const x = x0 + group * groupWidth + groupWidth * 0.1 + label * barWidth;
    const barH = ratio * h;
    raster.fillRect(x, y0 + h - barH, barWidth - 1, barH, color(label));
  }

  const sidecars = new Map<string, string>();
  sidecars.set(
    "data.csv",
    serializeCsv(
      ["snapshot_t", "task_label", "count", "ratio"],
      rows.map((r) => [r[0], r[2], r[3], r[4]]),
    ),
  );
  return { png: raster.encodePng(), sidecars };
}

/** One reward curve per task label over eval_t, with task-change markers. */
export function rewardsFigure(table: Table, markers: number[], source: string): Figure {
  requireRows(table, source);
  const rows = [...table.rows].sort(
    (a, b) => Number(a[1]) - Number(b[1]) || Number(a[0]) - Number(b[0]),
  );
  const labels = [...new Set(rows.map((r) => Number(r[1])))].sort((a, b) => a - b);
  const ts = rows.map((r) => Number(r[0]));
  const ys = rows.map((r) => Number(r[2]));
  const tMin = Math.min(...ts, ...(markers.length ? markers : ts));
  const tMax = Math.max(...ts, ...(markers.length ? markers : ts));
  const yMin = Math.min(...ys);
  const yMax = Math.max(...ys);
  const ySpan = yMax - yMin || 1;

  const raster = new Raster(WIDTH, HEIGHT);
  const { x0, y0, w, h } = plotArea();
  const px = (t: number) => x0 + ((t - tMin) / (tMax - tMin || 1)) * w;
  const py = (y: number) => y0 + h - ((y - yMin) / ySpan) * (h - 10) - 5;

  frame(raster);
  for (const marker of markers) {
    raster.vline(px(marker), y0, y0 + h, MARKER_COLOR);
  }
  for (const label of labels) {
    const series = rows.filter((r) => Number(r[1]) === label);
    for (let i = 1; i < series.length; i++) {
      raster.line(
        px(Number(series[i - 1][0])),
        py(Number(series[i - 1][2])),
        px(Number(series[i][0])),
        py(Number(series[i][2])),
        color(labels.indexOf(label)),
      );
    }
    if (series.length === 1) {
      const [t, y] = [Number(series[0][0]), Number(series[0][2])];
      raster.fillRect(px(t) - 2, py(y) - 2, 5, 5, color(labels.indexOf(label)));
    }
  }

  const sidecars = new Map<string, string>();
  sidecars.set("data.csv", serializeCsv(table.header, rows));
  sidecars.set(
    "markers.csv",
    serializeCsv(["t"], markers.map((m) => [m])),
  );
  return { png: raster.encodePng(), sidecars };
}

const CURIOSITY_POINT_BUDGET = 2000;

/** Curiosity and window mean over time, detected boundaries as vlines. */
export function curiosityFigure(table: Table, source: string): Figure {
  requireRows(table, source);
  const stride = Math.max(1, Math.ceil(table.rows.length / CURIOSITY_POINT_BUDGET));
  const sampled = table.rows.filter((_, i) => i % stride === 0);
  const boundaries = table.rows.filter((r) => r[5] === "1").map((r) => Number(r[0]));

  const ts = sampled.map((r) => Number(r[0]));
  const cs = sampled.map((r) => Number(r[1]));
  const mus = sampled.map((r) => Number(r[2]));
  const tMin = ts[0];
  const tMax = ts[ts.length - 1];
  const yMax = Math.max(...cs, ...mus, 1e-12);

  const raster = new Raster(WIDTH, HEIGHT);
  const { x0, y0, w, h } = plotArea();
  const px = (t: number) => x0 + ((t - tMin) / (tMax - tMin || 1)) * w;
  const py = (y: number) => y0 + h - (y / yMax) * (h - 10) - 5;

  frame(raster);
  for (const boundary of boundaries) {
    raster.vline(px(boundary), y0, y0 + h, MARKER_COLOR);
  }
  for (const [values, colorIndex] of [
    [cs, 0],
    [mus, 1],
  ] as const) {
    for (let i = 1; i < ts.length; i++) {
      raster.line(px(ts[i - 1]), py(values[i - 1]), px(ts[i]), py(values[i]), color(colorIndex));
    }
  }

  const sidecars = new Map<string, string>();
  sidecars.set(
    "data.csv",
    serializeCsv(["t", "c", "mu"], sampled.map((r) => [r[0], r[1], r[2]])),
  );
  sidecars.set(
    "markers.csv",
    serializeCsv(["t"], boundaries.map((b) => [b])),
  );
  return { png: raster.encodePng(), sidecars };
}
