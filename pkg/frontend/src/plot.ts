/**
 * Figure renderer for interdiction experiment CSVs.
 *
 * Three figures, one subplot per family:
 *   objective_vs_n      mean objective over seeds, per algorithm
 *   iterations_vs_n     max iteration count over seeds, per algorithm
 *   objective_vs_budget mean objective over seeds, x axis = edge budget
 *
 * The exhaustive "optimal" curve is dashed, every other algorithm is a
 * solid line; legend labels are the algorithm column values verbatim.
 * Output is plain SVG text, byte-identical across runs.
 */

import { readFileSync, writeFileSync } from "fs";

import { CSV_COLUMNS, ExperimentRow, parseCsv, PlotError } from "./csv";
import { circle, fmt, line, linearScale, polyline, svgDocument, text, tickLabel, ticks } from "./svg";

export { PlotError } from "./csv";

export type FigureKind = "objective_vs_n" | "iterations_vs_n" | "objective_vs_budget";

export const FIGURES: FigureKind[] = ["objective_vs_n", "iterations_vs_n", "objective_vs_budget"];

export interface PlotSpec {
  csvPath: string;
  figure: FigureKind;
  outPath: string;
  families?: string[];
  band?: boolean;
}

export interface SeriesPoint {
  x: number;
  y: number;
  lo: number;
  hi: number;
}

/** family -> algorithm -> points sorted by x */
export type Aggregated = Map<string, Map<string, SeriesPoint[]>>;

const COLORS: Record<string, string> = {
  optimal: "#2ca02c",
  adaptive: "#d62728",
  potential_iter: "#1f77b4",
  potential_oneshot: "#17becf",
  erip_approx: "#9467bd",
};
const FALLBACK_COLORS = ["#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#ff7f0e"];

const SUBPLOT_W = 330;
const SUBPLOT_H = 240;
const MARGIN = { left: 58, right: 16, top: 30, bottom: 42 };
const LEGEND_H = 26;

function yField(figure: FigureKind, row: ExperimentRow): number {
  return figure === "iterations_vs_n" ? row.iterations : row.objective;
}

function xField(figure: FigureKind, row: ExperimentRow): number {
  return figure === "objective_vs_budget" ? row.l : row.n;
}

function yAxisLabel(figure: FigureKind): string {
  return figure === "iterations_vs_n" ? "max iterations" : "mean objective";
}

function xAxisLabel(figure: FigureKind): string {
  return figure === "objective_vs_budget" ? "edge budget l" : "nodes n";
}

export function aggregate(rows: ExperimentRow[], figure: FigureKind): Aggregated {
  const groups = new Map<string, Map<string, Map<number, number[]>>>();
  for (const row of rows) {
    if (row.algorithm === "ERROR") continue; // failed instances carry no value
    const y = yField(figure, row);
    if (!Number.isFinite(y)) continue;
    const x = xField(figure, row);
    let byAlg = groups.get(row.family);
    if (!byAlg) groups.set(row.family, (byAlg = new Map()));
    let byX = byAlg.get(row.algorithm);
    if (!byX) byAlg.set(row.algorithm, (byX = new Map()));
    let bucket = byX.get(x);
    if (!bucket) byX.set(x, (bucket = []));
    bucket.push(y);
  }
  const out: Aggregated = new Map();
  for (const family of [...groups.keys()].sort()) {
    const byAlg = groups.get(family)!;
    const algOut = new Map<string, SeriesPoint[]>();
    for (const algorithm of [...byAlg.keys()].sort()) {
      const byX = byAlg.get(algorithm)!;
      const points: SeriesPoint[] = [...byX.keys()]
        .sort((a, b) => a - b)
        .map((x) => {
          const vals = byX.get(x)!;
          const y =
            figure === "iterations_vs_n"
              ? Math.max(...vals)
              : vals.reduce((acc, v) => acc + v, 0) / vals.length;
          return { x, y, lo: Math.min(...vals), hi: Math.max(...vals) };
        });
      algOut.set(algorithm, points);
    }
    out.set(family, algOut);
  }
  return out;
}

function colorOf(algorithm: string, index: number): string {
  return COLORS[algorithm] ?? FALLBACK_COLORS[index % FALLBACK_COLORS.length];
}

function strokeAttrs(algorithm: string, index: number): string {
  const dash = algorithm === "optimal" ? ' stroke-dasharray="7 4"' : "";
  return `stroke="${colorOf(algorithm, index)}" stroke-width="1.8"${dash}`;
}

function renderSubplot(
  family: string,
  series: Map<string, SeriesPoint[]>,
  figure: FigureKind,
  ox: number,
  oy: number,
  band: boolean,
): string[] {
  const body: string[] = [];
  const x0 = ox + MARGIN.left;
  const x1 = ox + SUBPLOT_W - MARGIN.right;
  const y0 = oy + SUBPLOT_H - MARGIN.bottom;
  const y1 = oy + MARGIN.top;

  const allPoints = [...series.values()].flat();
  const xs = allPoints.map((p) => p.x);
  const los = allPoints.map((p) => (band ? p.lo : p.y));
  const his = allPoints.map((p) => (band ? p.hi : p.y));
  const xMin = Math.min(...xs);
  const xMax = Math.max(...xs);
  let yMin = Math.min(0, ...los);
  let yMax = Math.max(...his);
  if (yMax === yMin) yMax = yMin + 1;
  const sx = linearScale(xMin, xMax, x0, x1);
  const sy = linearScale(yMin, yMax, y0, y1);

  body.push(text((x0 + x1) / 2, y1 - 10, family, 'text-anchor="middle" font-size="13" font-weight="bold"'));
  body.push(line(x0, y0, x1, y0, 'stroke="#333" stroke-width="1"'));
  body.push(line(x0, y0, x0, y1, 'stroke="#333" stroke-width="1"'));

  const xTicks = xs.length <= 1 ? [xMin] : [...new Set(xs)].sort((a, b) => a - b);
  const xTickValues = xTicks.length > 8 ? ticks(xMin, xMax, 7) : xTicks;
  for (const v of xTickValues) {
    body.push(line(sx(v), y0, sx(v), y0 + 4, 'stroke="#333" stroke-width="1"'));
    body.push(text(sx(v), y0 + 16, tickLabel(v), 'text-anchor="middle" font-size="10"'));
  }
  for (const v of ticks(yMin, yMax, 5)) {
    body.push(line(x0 - 4, sy(v), x0, sy(v), 'stroke="#333" stroke-width="1"'));
    body.push(line(x0, sy(v), x1, sy(v), 'stroke="#ddd" stroke-width="0.5"'));
    body.push(text(x0 - 7, sy(v) + 3, tickLabel(v), 'text-anchor="end" font-size="10"'));
  }
  body.push(text((x0 + x1) / 2, y0 + 32, xAxisLabel(figure), 'text-anchor="middle" font-size="11"'));
  body.push(
    `<text x="${fmt(ox + 14)}" y="${fmt((y0 + y1) / 2)}" text-anchor="middle" font-size="11" ` +
      `transform="rotate(-90 ${fmt(ox + 14)} ${fmt((y0 + y1) / 2)})">${yAxisLabel(figure)}</text>`,
  );

  [...series.keys()].forEach((algorithm, index) => {
    const pts = series.get(algorithm)!;
    if (band && figure !== "iterations_vs_n" && pts.length > 1) {
      const upper = pts.map((p) => `${fmt(sx(p.x))},${fmt(sy(p.hi))}`);
      const lower = [...pts].reverse().map((p) => `${fmt(sx(p.x))},${fmt(sy(p.lo))}`);
      body.push(
        `<polygon points="${[...upper, ...lower].join(" ")}" fill="${colorOf(algorithm, index)}" opacity="0.12"/>`,
      );
    }
    body.push(
      polyline(
        pts.map((p) => [sx(p.x), sy(p.y)]),
        `${strokeAttrs(algorithm, index)} data-family="${family}" data-algorithm="${algorithm}"`,
      ),
    );
    for (const p of pts) {
      body.push(circle(sx(p.x), sy(p.y), 2.2, colorOf(algorithm, index)));
    }
  });
  return body;
}

function renderLegend(algorithms: string[], width: number): string[] {
  const body: string[] = [];
  const slot = Math.min(170, Math.floor((width - 20) / Math.max(1, algorithms.length)));
  algorithms.forEach((algorithm, index) => {
    const x = 20 + index * slot;
    const y = 16;
    body.push(line(x, y, x + 26, y, strokeAttrs(algorithm, index)));
    body.push(text(x + 31, y + 4, algorithm, 'font-size="11"'));
  });
  return body;
}

export function renderSvg(spec: PlotSpec): string {
  if (!FIGURES.includes(spec.figure)) {
    throw new PlotError(`unknown figure '${spec.figure}' (expected one of ${FIGURES.join(", ")})`);
  }
  let rows = parseCsv(readFileSync(spec.csvPath, "utf-8"));
  if (spec.families && spec.families.length > 0) {
    const wanted = new Set(spec.families);
    rows = rows.filter((row) => wanted.has(row.family));
  }
  const data = aggregate(rows, spec.figure);
  if (data.size === 0) {
    throw new PlotError("no data rows left after filtering");
  }
  const families = [...data.keys()];
  const algorithms = [...new Set(families.flatMap((f) => [...data.get(f)!.keys()]))].sort();
  const columns = Math.min(2, families.length);
  const rowsOfPlots = Math.ceil(families.length / columns);
  const width = columns * SUBPLOT_W;
  const height = LEGEND_H + rowsOfPlots * SUBPLOT_H;

  const body: string[] = renderLegend(algorithms, width);
  families.forEach((family, k) => {
    const ox = (k % columns) * SUBPLOT_W;
    const oy = LEGEND_H + Math.floor(k / columns) * SUBPLOT_H;
    body.push(...renderSubplot(family, data.get(family)!, spec.figure, ox, oy, spec.band ?? false));
  });
  return svgDocument(width, height, body);
}

export function render(spec: PlotSpec): void {
  writeFileSync(spec.outPath, renderSvg(spec));
}

export { parseCsv, CSV_COLUMNS };
