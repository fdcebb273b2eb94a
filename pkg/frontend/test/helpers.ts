import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";
import path from "node:path";

export const ROOT = path.resolve(
  path.dirname(fileURLToPath(import.meta.url)),
  "..",
);

export function refPath(name: string): string {
  return path.join(ROOT, "reference", name);
}

export function readRef(name: string): string {
  return readFileSync(refPath(name), "utf8");
}

export function readGolden(name: string): string {
  return readFileSync(path.join(ROOT, "test", "golden", name), "utf8");
}

export function countOf(haystack: string, needle: string): number {
  let n = 0;
  let i = haystack.indexOf(needle);
  while (i >= 0) {
    n += 1;
    i = haystack.indexOf(needle, i + needle.length);
  }
  return n;
}

/** Cheap structural sanity for a whole SVG document. */
export function expectWellFormedSvg(svg: string): void {
  if (!svg.startsWith("<svg ")) throw new Error("missing <svg> root");
  if (!svg.endsWith("</svg>\n")) throw new Error("missing closing tag");
  for (const bad of ["NaN", "Infinity", "undefined", "null"]) {
    if (svg.includes(bad)) throw new Error(`literal "${bad}" leaked into SVG`);
  }
  const opens = countOf(svg, "<g>") + countOf(svg, "<g ");
  const closes = countOf(svg, "</g>");
  if (opens !== closes) {
    throw new Error(`unbalanced <g>: ${opens} opened, ${closes} closed`);
  }
}
