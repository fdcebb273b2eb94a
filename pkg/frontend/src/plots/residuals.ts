import { scaleLog } from "d3";
import { parseCsv, col, cols, num } from "../csv.js";
import { el, text, svgDoc, line } from "../svg.js";
import { axisLeft, gridLeft, type Frame } from "../axes.js";
import { seriesColor } from "../palette.js";
import { fmt3 } from "../fmt.js";

const FLOOR = 1e-6;

function fitLabel(path: string): string {
  const base = path.split("/").pop() ?? path;
  return base.replace(/^fit_/, "").replace(/_modes\.csv$/, "");
}

function pow10Label(v: number): string {
  const e = Math.round(Math.log10(v));
  return e === 0 ? "1" : `1e${e}`;
}

/** Per-mode misalignment (1 - cos^2 of the matched angle, log scale) for
 * every fit recorded in an evaluation CSV. Bars are grouped by mode so
 * methods can be compared mode by mode. */
export function residuals(metricsCsv: string): string {
  const t = parseCsv(metricsCsv);
  const cFit = col(t, "fit");
  const cSub = col(t, "subr2");
  const cosIdx = cols(t, "cos2_");
  if (cosIdx.length === 0) throw new Error("no cos2_* columns in metrics CSV");
  const nModes = cosIdx.length;
  const fits = t.rows.map((row) => ({
    label: fitLabel(row[cFit]!),
    subr2: num(row, cSub),
    resid: cosIdx.map((ci) => Math.max(1 - num(row, ci), FLOOR)),
  }));

  const width = 760;
  const height = 440;
  const frame: Frame = { left: 70, right: width - 20, top: 84, bottom: height - 56 };
  const y = scaleLog().domain([FLOOR, 1]).range([frame.bottom, frame.top]);
  const yTicks = [1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1];

  const plotW = frame.right - frame.left;
  const groupW = plotW / nModes;
  const barW = (groupW * 0.8) / fits.length;

  const bars: string[] = [];
  for (let k = 0; k < nModes; k++) {
    const gx = frame.left + k * groupW + groupW * 0.1;
    fits.forEach((f, si) => {
      bars.push(
        el("rect", {
          x: gx + si * barW,
          y: y(f.resid[k]!),
          width: barW * 0.92,
          height: frame.bottom - y(f.resid[k]!),
          fill: seriesColor(si),
        }),
      );
    });
    bars.push(
      text(frame.left + k * groupW + groupW / 2, frame.bottom + 18, `mode ${k}`, {
        "text-anchor": "middle",
      }),
    );
  }

  const legend: string[] = [];
  let ly = 40;
  fits.forEach((f, si) => {
    legend.push(
      el("rect", { x: frame.left, y: ly - 10, width: 12, height: 12, fill: seriesColor(si) }),
    );
    legend.push(
      text(frame.left + 16, ly, `${f.label}  (subspace R2 ${fmt3(f.subr2)})`, {
        "font-size": 11,
      }),
    );
    ly += 15;
  });

  return svgDoc(width, height, [
    text(frame.left, 24, "per-mode residual misalignment", {
      "font-size": 15,
      "font-weight": "bold",
    }),
    gridLeft(y, frame, yTicks),
    axisLeft(y, frame, yTicks, "1 - cos2 (log)", pow10Label),
    line(frame.left, frame.bottom, frame.right, frame.bottom),
    el("g", {}, bars),
    el("g", {}, legend),
  ]);
}
