import { scaleLinear } from "d3";
import { parseCsv, cols, num } from "../csv.js";
import { el, text, pathThrough, svgDoc } from "../svg.js";
import { axisBottom, axisLeft, type Frame } from "../axes.js";
import { seriesColor, REF_COLOR } from "../palette.js";

/** One panel per mode: the reference eigenfunction and the fitted one,
 * both as curves over the (one-dimensional) state coordinate. Inputs are
 * a dataset CSV (x0, ref0..) and a fit's modes CSV (phi0..); rows must
 * correspond. Fitted signs are aligned to the reference by correlation. */
export function eigenfunctionOverlay(
  datasetCsv: string,
  modesCsv: string,
): string {
  const data = parseCsv(datasetCsv);
  const modes = parseCsv(modesCsv);
  const xIdx = cols(data, "x");
  const refIdx = cols(data, "ref");
  const phiIdx = cols(modes, "phi");
  if (xIdx.length !== 1) {
    throw new Error(
      `overlay needs a one-dimensional dataset, got ${xIdx.length} x-columns`,
    );
  }
  if (refIdx.length === 0) throw new Error("dataset has no ref columns");
  if (data.rows.length !== modes.rows.length) {
    throw new Error(
      `row mismatch: dataset ${data.rows.length}, modes ${modes.rows.length}`,
    );
  }
  const r = Math.min(refIdx.length, phiIdx.length);
  const n = data.rows.length;

  const order = Array.from({ length: n }, (_, i) => i).sort(
    (a, b) => num(data.rows[a]!, xIdx[0]!) - num(data.rows[b]!, xIdx[0]!),
  );
  const xs = order.map((i) => num(data.rows[i]!, xIdx[0]!));

  const ncol = 2;
  const nrow = Math.ceil(r / ncol);
  const panelW = 330;
  const panelH = 180;
  const width = 40 + ncol * (panelW + 24);
  const height = 64 + nrow * (panelH + 40);

  const panels: string[] = [];
  for (let k = 0; k < r; k++) {
    const ref = order.map((i) => num(data.rows[i]!, refIdx[k]!));
    const phiRaw = order.map((i) => num(modes.rows[i]!, phiIdx[k]!));
    let dot = 0;
    for (let i = 0; i < n; i++) dot += ref[i]! * phiRaw[i]!;
    const sign = dot >= 0 ? 1 : -1;
    const phi = phiRaw.map((v) => sign * v);

    const gx = 40 + (k % ncol) * (panelW + 24);
    const gy = 64 + Math.floor(k / ncol) * (panelH + 40);
    const frame: Frame = {
      left: gx + 44,
      right: gx + panelW,
      top: gy,
      bottom: gy + panelH - 34,
    };
    const lo = Math.min(...ref, ...phi);
    const hi = Math.max(...ref, ...phi);
    const pad = 0.05 * (hi - lo || 1);
    const x = scaleLinear()
      .domain([xs[0]!, xs[n - 1]!])
      .range([frame.left, frame.right]);
    const y = scaleLinear()
      .domain([lo - pad, hi + pad])
      .range([frame.bottom, frame.top]);

    panels.push(
      el("g", {}, [
        text(frame.left, frame.top - 6, `mode ${k}`, { "font-size": 12 }),
        axisBottom(x, frame, x.ticks(4)),
        axisLeft(y, frame, y.ticks(3)),
        pathThrough(
          xs.map((v, i) => [x(v), y(ref[i]!)]),
          { stroke: REF_COLOR, "stroke-width": 1.5 },
        ),
        pathThrough(
          xs.map((v, i) => [x(v), y(phi[i]!)]),
          {
            stroke: seriesColor(0),
            "stroke-width": 1.5,
            "stroke-dasharray": "5 3",
          },
        ),
      ]),
    );
  }

  const legend = el("g", {}, [
    pathThrough(
      [
        [40, 30],
        [70, 30],
      ],
      { stroke: REF_COLOR, "stroke-width": 1.5 },
    ),
    text(76, 34, "reference", { "font-size": 12 }),
    pathThrough(
      [
        [170, 30],
        [200, 30],
      ],
      {
        stroke: seriesColor(0),
        "stroke-width": 1.5,
        "stroke-dasharray": "5 3",
      },
    ),
    text(206, 34, "fitted (sign-aligned)", { "font-size": 12 }),
  ]);

  return svgDoc(width, height, [
    text(40, 18, "eigenfunction overlay", {
      "font-size": 15,
      "font-weight": "bold",
    }),
    legend,
    ...panels,
  ]);
}
