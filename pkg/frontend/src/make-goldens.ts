/** Regenerate the golden SVGs in test/golden/ from the reference CSVs.
 * Run after changing any renderer on purpose; the test suite compares
 * fresh renders byte for byte against these files. */
import { readFileSync, writeFileSync, mkdirSync } from "node:fs";
import { fileURLToPath } from "node:url";
import path from "node:path";
import { render } from "./index.js";

const here = path.dirname(fileURLToPath(import.meta.url));
const root = path.resolve(here, "..");
const goldenDir = path.join(root, "test", "golden");
mkdirSync(goldenDir, { recursive: true });

const SPECS: Array<[string, string[]]> = [
  ["summary-bars", ["table1.csv"]],
  ["eigenfunction-overlay", ["dw1d_n300_seed42.csv", "fit_cv-rff_seed42_modes.csv"]],
  ["residuals", ["metrics.csv"]],
  ["cv-heatmap", ["cv_eigsum_seed42_grid.csv"]],
  ["scaling-curve", ["scaling.csv"]],
];

for (const [kind, files] of SPECS) {
  const texts = files.map((f) =>
    readFileSync(path.join(root, "reference", f), "utf8"),
  );
  const out = path.join(goldenDir, `${kind}.svg`);
  writeFileSync(out, render(kind, texts));
  console.log(`wrote ${path.relative(root, out)}`);
}
