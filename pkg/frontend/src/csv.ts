/**
 * Reader for the experiment harness CSV
 * (family,n,l,seed,algorithm,objective,iterations,wall_ms).
 */

export class PlotError extends Error {}

export interface ExperimentRow {
  family: string;
  n: number;
  l: number;
  seed: number;
  algorithm: string;
  objective: number;
  iterations: number;
  wall_ms: number;
}

export const CSV_COLUMNS = [
  "family",
  "n",
  "l",
  "seed",
  "algorithm",
  "objective",
  "iterations",
  "wall_ms",
] as const;

export function parseCsv(text: string): ExperimentRow[] {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new PlotError("empty CSV");
  }
  const header = lines[0].split(",");
  for (const col of CSV_COLUMNS) {
    if (!header.includes(col)) {
      throw new PlotError(`missing column '${col}' in CSV header '${lines[0]}'`);
    }
  }
  const at: Record<string, number> = {};
  header.forEach((name, k) => (at[name] = k));
  const rows: ExperimentRow[] = [];
  for (const [index, line] of lines.slice(1).entries()) {
    const parts = line.split(",");
    if (parts.length !== header.length) {
      throw new PlotError(`row ${index + 2} has ${parts.length} fields, expected ${header.length}`);
    }
    rows.push({
      family: parts[at.family],
      n: parseInt(parts[at.n], 10),
      l: parseInt(parts[at.l], 10),
      seed: parseInt(parts[at.seed], 10),
      algorithm: parts[at.algorithm],
      objective: parseFloat(parts[at.objective]),
      iterations: parseInt(parts[at.iterations], 10),
      wall_ms: parseInt(parts[at.wall_ms], 10),
    });
  }
  return rows;
}
