import Papa from "papaparse";

/** A parsed CSV: one header row plus string cells, rectangular. */
export interface Table {
  header: string[];
  rows: string[][];
}

export function parseCsv(text: string): Table {
  const res = Papa.parse<string[]>(text.trim(), {
    delimiter: ",",
    skipEmptyLines: true,
  });
  if (res.errors.length > 0) {
    const e = res.errors[0]!;
    throw new Error(`CSV parse failed at row ${e.row}: ${e.message}`);
  }
  const data = res.data;
  if (data.length < 2) {
    throw new Error("CSV needs a header row and at least one data row");
  }
  const header = data[0]!;
  const rows = data.slice(1);
  for (const row of rows) {
    if (row.length !== header.length) {
      throw new Error(
        `ragged CSV row: ${row.length} cells, header has ${header.length}`,
      );
    }
  }
  return { header, rows };
}

/** Index of an exact column name, or an explanatory error. */
export function col(t: Table, name: string): number {
  const i = t.header.indexOf(name);
  if (i < 0) {
    throw new Error(`missing column "${name}" (have: ${t.header.join(", ")})`);
  }
  return i;
}

/** Indexes of all columns whose name starts with the prefix, in file order. */
export function cols(t: Table, prefix: string): number[] {
  const out: number[] = [];
  t.header.forEach((h, i) => {
    if (h.startsWith(prefix)) out.push(i);
  });
  return out;
}

/** Numeric cell access; NaN passes through (used for missing std columns). */
export function num(row: string[], i: number): number {
  const s = row[i];
  if (s === undefined) throw new Error(`row too short for column ${i}`);
  return Number(s);
}
