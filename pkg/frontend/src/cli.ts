/**
 * plot --run DIR --kind {composition,rewards,curiosity} --out DIR
 *      [--markers t1,t2,...]
 *
 * Markers default to the run's detected boundaries (boundaries.csv); pass
 * the configured task-change steps explicitly to mark ground truth.
 */

import { parseArgs } from "node:util";

import { CsvError } from "./csv.js";
import { KINDS, plotRun, type PlotKind } from "./plot.js";

const USAGE =
  "usage: plot --run DIR --kind {composition,rewards,curiosity} --out DIR [--markers t1,t2,...]";

export function main(argv: string[]): number {
  let args;
  try {
    args = parseArgs({
      args: argv,
      options: {
        run: { type: "string" },
        kind: { type: "string" },
        out: { type: "string" },
        markers: { type: "string" },
      },
      strict: true,
    }).values;
  } catch (error) {
    console.error(`${(error as Error).message}\n${USAGE}`);
    return 2;
  }
  if (!args.run || !args.kind || !args.out) {
    console.error(USAGE);
    return 2;
  }
  if (!KINDS.includes(args.kind as PlotKind)) {
    console.error(`unknown kind "${args.kind}"\n${USAGE}`);
    return 2;
  }
  let markers: number[] | undefined;
  if (args.markers !== undefined) {
    markers = args.markers.split(",").filter((s) => s.length).map(Number);
    if (markers.some((m) => !Number.isFinite(m))) {
      console.error(`bad --markers value "${args.markers}"\n${USAGE}`);
      return 2;
    }
  }
  try {
    const written = plotRun(args.run, args.kind as PlotKind, args.out, markers);
    for (const path of written) {
      console.log(path);
    }
    return 0;
  } catch (error) {
    if (error instanceof CsvError) {
      console.error(`error: ${error.message}`);
      return 1;
    }
    throw error;
  }
}
