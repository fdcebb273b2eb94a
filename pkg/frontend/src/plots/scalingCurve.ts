import { scaleLinear, scaleLog } from "d3";
import { parseCsv, col, cols, num } from "../csv.js";
import { el, text, line, pathThrough, polygon, svgDoc } from "../svg.js";
import { axisBottom, axisLeft, gridLeft, type Frame } from "../axes.js";
import { seriesColor } from "../palette.js";
import { fmt3 } from "../fmt.js";

/** Recovery versus sample size from a scaling-table CSV (columns: n,
 * subr2_mean, subr2_std, subr2_seed*). Mean curve on a log-n axis with a
 * one-standard-deviation band when the std column is finite, plus the
 * per-seed values as open circles. */
export function scalingCurve(scalingCsv: string): string {
  const t = parseCsv(scalingCsv);
  const cN = col(t, "n");
  const cMean = col(t, "subr2_mean");
  const cStd = col(t, "subr2_std");
  const seedIdx = cols(t, "subr2_seed");

  const pts = t.rows.map((row) => ({
    n: num(row, cN),
    mean: num(row, cMean),
    std: num(row, cStd),
    seeds: seedIdx.map((i) => num(row, i)).filter((v) => Number.isFinite(v)),
  }));
  pts.sort((a, b) => a.n - b.n);
  if (pts.some((p) => !Number.isFinite(p.mean))) {
    throw new Error("non-finite subr2_mean in scaling CSV");
  }

  const ysAll = pts.flatMap((p) => [
    p.mean,
    ...(Number.isFinite(p.std) ? [p.mean - p.std, p.mean + p.std] : []),
    ...p.seeds,
  ]);
  const lo = Math.min(...ysAll);
  const hi = Math.max(...ysAll);
  const pad = 0.08 * (hi - lo || 1);

  const width = 640;
  const height = 420;
  const frame: Frame = { left: 70, right: width - 24, top: 48, bottom: height - 56 };
  const x = scaleLog()
    .domain([pts[0]!.n, pts[pts.length - 1]!.n])
    .range([frame.left, frame.right]);
  const y = scaleLinear()
    .domain([lo - pad, hi + pad])
    .range([frame.bottom, frame.top]);
  const yTicks = y.ticks(5);

  const children: string[] = [
    text(frame.left, 24, "recovery vs sample size", {
      "font-size": 15,
      "font-weight": "bold",
    }),
    gridLeft(y, frame, yTicks),
    axisBottom(x, frame, pts.map((p) => p.n), "samples n (log scale)", String),
    axisLeft(y, frame, yTicks, "subspace R2", fmt3),
  ];

  const banded = pts.filter((p) => Number.isFinite(p.std));
  if (banded.length >= 2) {
    children.push(
      polygon(
        [
          ...banded.map((p): [number, number] => [x(p.n), y(p.mean - p.std)]),
          ...banded
            .slice()
            .reverse()
            .map((p): [number, number] => [x(p.n), y(p.mean + p.std)]),
        ],
        { fill: seriesColor(0), "fill-opacity": 0.15 },
      ),
    );
  }
  children.push(
    pathThrough(
      pts.map((p) => [x(p.n), y(p.mean)]),
      { stroke: seriesColor(0), "stroke-width": 2 },
    ),
  );
  for (const p of pts) {
    for (const s of p.seeds) {
      children.push(
        el("circle", {
          cx: x(p.n),
          cy: y(s),
          r: 3,
          fill: "none",
          stroke: seriesColor(0),
          "stroke-width": 1,
        }),
      );
    }
    children.push(
      el("circle", { cx: x(p.n), cy: y(p.mean), r: 4, fill: seriesColor(0) }),
    );
  }
  children.push(
    line(frame.left, frame.bottom, frame.right, frame.bottom, {
      "stroke-width": 1,
    }),
  );

  return svgDoc(width, height, children);
}
