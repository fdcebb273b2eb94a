import { summaryBars } from "./plots/summaryBars.js";
import { eigenfunctionOverlay } from "./plots/eigenfunctionOverlay.js";
import { residuals } from "./plots/residuals.js";
import { cvHeatmap } from "./plots/cvHeatmap.js";
import { scalingCurve } from "./plots/scalingCurve.js";

export { summaryBars, eigenfunctionOverlay, residuals, cvHeatmap, scalingCurve };
export { parseCsv } from "./csv.js";
export { fmt, fmt3 } from "./fmt.js";

export interface KindSpec {
  /** Human description of each positional CSV input, in order. */
  inputs: string[];
  render: (...files: string[]) => string;
}

/** Every figure kind, keyed by CLI name. Each renderer is a pure function
 * from CSV text to a complete SVG document. */
export const KINDS: Record<string, KindSpec> = {
  "summary-bars": {
    inputs: ["benchmark table CSV (problem, method, subr2_mean, subr2_std)"],
    render: (table) => summaryBars(table),
  },
  "eigenfunction-overlay": {
    inputs: ["dataset CSV (x0, ref*)", "fit modes CSV (phi*)"],
    render: (data, modes) => eigenfunctionOverlay(data, modes),
  },
  residuals: {
    inputs: ["evaluation CSV (fit, data, subr2, cos2_*)"],
    render: (metrics) => residuals(metrics),
  },
  "cv-heatmap": {
    inputs: ["selection grid CSV (rule, family, sigma, score, failed)"],
    render: (grid) => cvHeatmap(grid),
  },
  "scaling-curve": {
    inputs: ["scaling table CSV (n, subr2_mean, subr2_std, subr2_seed*)"],
    render: (table) => scalingCurve(table),
  },
};

export function render(kind: string, files: string[]): string {
  const spec = KINDS[kind];
  if (spec === undefined) {
    throw new Error(
      `unknown figure kind "${kind}" (have: ${Object.keys(KINDS).join(", ")})`,
    );
  }
  if (files.length !== spec.inputs.length) {
    throw new Error(
      `${kind} needs ${spec.inputs.length} input(s): ${spec.inputs.join("; ")}`,
    );
  }
  return spec.render(...files);
}
