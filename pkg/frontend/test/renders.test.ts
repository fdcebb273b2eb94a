import { describe, expect, it } from "vitest";
import { render, KINDS, parseCsv } from "../src/index.js";
import { fmt, fmt3 } from "../src/fmt.js";
import { countOf, expectWellFormedSvg, readGolden, readRef } from "./helpers.js";

/** Input files per kind, matching make-goldens.ts. */
const INPUTS: Record<string, string[]> = {
  "summary-bars": ["table1.csv"],
  "eigenfunction-overlay": ["dw1d_n300_seed42.csv", "fit_cv-rff_seed42_modes.csv"],
  residuals: ["metrics.csv"],
  "cv-heatmap": ["cv_eigsum_seed42_grid.csv"],
  "scaling-curve": ["scaling.csv"],
};

describe.each(Object.keys(KINDS))("%s", (kind) => {
  const files = INPUTS[kind]!;
  const texts = files.map(readRef);

  it("renders the same bytes twice from the same input bytes", () => {
    const a = render(kind, texts);
    const b = render(
      kind,
      files.map(readRef), // re-read from disk: no hidden state anywhere
    );
    expect(a).toBe(b);
    expectWellFormedSvg(a);
  });

  it("matches the committed golden byte for byte", () => {
    expect(render(kind, texts)).toBe(readGolden(`${kind}.svg`));
  });

  it("rejects the wrong number of inputs", () => {
    expect(() => render(kind, [...texts, "extra,col\n1,2\n"])).toThrow(
      /needs \d+ input/,
    );
  });
});

it("render rejects unknown kinds by name", () => {
  expect(() => render("sparkline", ["a\n1\n"])).toThrow(
    /unknown figure kind "sparkline"/,
  );
});

describe("summary-bars content", () => {
  const table = parseCsv(readRef("table1.csv"));
  const svg = render("summary-bars", [readRef("table1.csv")]);

  it("draws one bar per table row plus legend swatches and background", () => {
    const methods = new Set(table.rows.map((r) => r[1]!));
    expect(countOf(svg, "<rect ")).toBe(table.rows.length + methods.size + 1);
  });

  it("labels every problem group and legend method", () => {
    for (const problem of new Set(table.rows.map((r) => r[0]!))) {
      expect(svg).toContain(`>${problem}</text>`);
    }
    for (const method of new Set(table.rows.map((r) => r[1]!))) {
      expect(svg).toContain(`>${method}</text>`);
    }
  });

  it("bar heights follow the subr2_mean column", () => {
    // tallest bar belongs to the row with the best mean
    const best = Math.max(...table.rows.map((r) => Number(r[4])));
    const frameTop = 70;
    const frameBottom = 440 - 56;
    const yBest = frameBottom - best * (frameBottom - frameTop);
    expect(svg).toContain(`y="${fmt(yBest)}"`);
  });
});

describe("eigenfunction-overlay content", () => {
  const svg = render("eigenfunction-overlay", [
    readRef("dw1d_n300_seed42.csv"),
    readRef("fit_cv-rff_seed42_modes.csv"),
  ]);

  it("draws a panel per mode and two curves per panel", () => {
    for (let k = 0; k < 4; k++) expect(svg).toContain(`>mode ${k}</text>`);
    // 4 panels x (reference + fitted) + 2 legend strokes
    expect(countOf(svg, "<path ")).toBe(10);
    expect(svg).toContain(">reference</text>");
    expect(svg).toContain(">fitted (sign-aligned)</text>");
  });

  it("refuses mismatched row counts", () => {
    const truncated = readRef("fit_cv-rff_seed42_modes.csv")
      .split("\n")
      .slice(0, 100)
      .join("\n");
    expect(() =>
      render("eigenfunction-overlay", [readRef("dw1d_n300_seed42.csv"), truncated]),
    ).toThrow(/row mismatch/);
  });

  it("refuses multi-dimensional datasets", () => {
    expect(() =>
      render("eigenfunction-overlay", [
        "x0,x1,ref0\n0,0,1\n1,1,2\n",
        "phi0\n1\n2\n",
      ]),
    ).toThrow(/one-dimensional/);
  });
});

describe("residuals content", () => {
  const metrics = parseCsv(readRef("metrics.csv"));
  const svg = render("residuals", [readRef("metrics.csv")]);

  it("draws fits x modes bars plus legend swatches and background", () => {
    const nModes = metrics.header.filter((h) => h.startsWith("cos2_")).length;
    expect(countOf(svg, "<rect ")).toBe(
      metrics.rows.length * nModes + metrics.rows.length + 1,
    );
  });

  it("legend names each fit with its subspace R2", () => {
    for (const row of metrics.rows) {
      const label = row[0]!.split("/").pop()!.replace(/^fit_/, "").replace(/_modes\.csv$/, "");
      expect(svg).toContain(`${label}  (subspace R2 ${fmt3(Number(row[2]))})`);
    }
  });

  it("uses a log axis with power-of-ten labels", () => {
    expect(svg).toContain(">1e-6</text>");
    expect(svg).toContain(">1</text>");
  });
});

describe("cv-heatmap content", () => {
  const grid = parseCsv(readRef("cv_eigsum_seed42_grid.csv"));
  const svg = render("cv-heatmap", [readRef("cv_eigsum_seed42_grid.csv")]);

  it("draws every cell, the colorbar, and the background", () => {
    // cells + best outline + 64 colorbar strips + colorbar border + background
    expect(countOf(svg, "<rect ")).toBe(grid.rows.length + 1 + 64 + 1 + 1);
  });

  it("names the rule and the families", () => {
    expect(svg).toContain("cross-validation scores (rule: eigsum)");
    for (const fam of new Set(grid.rows.map((r) => r[1]!))) {
      expect(svg).toContain(`>${fam}</text>`);
    }
  });

  it("outlines the best-scoring cell at its grid position", () => {
    const families: string[] = [];
    let best = { v: -Infinity, fi: 0, si: 0 };
    const perFamilyCount = new Map<string, number>();
    for (const row of grid.rows) {
      const fam = row[1]!;
      if (!families.includes(fam)) families.push(fam);
      const si = perFamilyCount.get(fam) ?? 0;
      perFamilyCount.set(fam, si + 1);
      const v = Number(row[3]);
      if (row[4] === "0" && v > best.v) {
        best = { v, fi: families.indexOf(fam), si };
      }
    }
    const x = 96 + best.si * 52 + 1.5;
    const y = 56 + best.fi * 34 + 1.5;
    expect(svg).toContain(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="49" height="31" fill="none" stroke="#ffffff" stroke-width="2.5"/>`,
    );
  });

  it("grays and crosses out failed candidates", () => {
    const lines = readRef("cv_eigsum_seed42_grid.csv").split("\n");
    const doctored = lines
      .map((l, i) => (i === 1 ? l.replace(",0,", ",1,") : l))
      .join("\n");
    const withFail = render("cv-heatmap", [doctored]);
    expect(withFail).toContain('fill="#cccccc"');
    expect(withFail).toContain(">x</text>");
    expect(svg).not.toContain('fill="#cccccc"');
  });
});

describe("scaling-curve content", () => {
  const table = parseCsv(readRef("scaling.csv"));
  const svg = render("scaling-curve", [readRef("scaling.csv")]);

  it("marks the mean at every size and each per-seed value", () => {
    const nSeeds = table.header.filter((h) => h.startsWith("subr2_seed")).length;
    expect(countOf(svg, "<circle ")).toBe(table.rows.length * (1 + nSeeds));
  });

  it("draws the one-standard-deviation band", () => {
    expect(svg).toContain('fill-opacity="0.15"');
  });

  it("ticks the x axis at the sample sizes themselves", () => {
    for (const row of table.rows) {
      expect(svg).toContain(`>${row[0]}</text>`);
    }
  });
});
