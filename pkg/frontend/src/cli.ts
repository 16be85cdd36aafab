#!/usr/bin/env node
/**
 * plot <figure> --csv <path> --out <path> [--families a,b] [--band]
 *
 * figure: objective_vs_n | iterations_vs_n | objective_vs_budget
 */

import { FIGURES, FigureKind, PlotError, PlotSpec, render } from "./plot";

const USAGE = "usage: plot <figure> --csv <path> --out <path> [--families a,b] [--band]";

export function parseArgs(argv: string[]): PlotSpec {
  if (argv.length === 0) {
    throw new PlotError(USAGE);
  }
  const [figure, ...rest] = argv;
  const spec: Partial<PlotSpec> = { figure: figure as FigureKind, band: false };
  for (let k = 0; k < rest.length; k++) {
    const flag = rest[k];
    const next = () => {
      if (k + 1 >= rest.length) throw new PlotError(`flag ${flag} needs a value`);
      return rest[++k];
    };
    if (flag === "--csv") spec.csvPath = next();
    else if (flag === "--out") spec.outPath = next();
    else if (flag === "--families") spec.families = next().split(",").filter((s) => s.length > 0);
    else if (flag === "--band") spec.band = true;
    else throw new PlotError(`unknown flag ${flag}\n${USAGE}`);
  }
  if (!FIGURES.includes(spec.figure as FigureKind)) {
    throw new PlotError(`unknown figure '${figure}'\n${USAGE}`);
  }
  if (!spec.csvPath || !spec.outPath) {
    throw new PlotError(USAGE);
  }
  return spec as PlotSpec;
}

export function runCli(argv: string[]): number {
  try {
    render(parseArgs(argv));
    return 0;
  } catch (err) {
    if (err instanceof PlotError || (err as NodeJS.ErrnoException)?.code === "ENOENT") {
      console.error(`error: ${(err as Error).message}`);
      return 1;
    }
    throw err;
  }
}

if (require.main === module) {
  process.exit(runCli(process.argv.slice(2)));
}
