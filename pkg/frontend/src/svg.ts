import { fmt } from "./fmt.js";

export type Attrs = Record<string, string | number>;

function esc(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Build one element. Array children are trusted markup fragments built by
 * this module; a string child is text content and gets escaped. */
export function el(
  tag: string,
  attrs: Attrs = {},
  children: string[] | string = [],
): string {
  let a = "";
  for (const [k, v] of Object.entries(attrs)) {
    a += ` ${k}="${esc(typeof v === "number" ? fmt(v) : v)}"`;
  }
  const body = Array.isArray(children) ? children.join("") : esc(children);
  return body === "" ? `<${tag}${a}/>` : `<${tag}${a}>${body}</${tag}>`;
}

export const FONT = "DejaVu Sans, Helvetica, sans-serif";

export function text(
  x: number,
  y: number,
  s: string,
  attrs: Attrs = {},
): string {
  return el(
    "text",
    { x, y, "font-family": FONT, "font-size": 12, fill: "#222", ...attrs },
    s,
  );
}

export function line(
  x1: number,
  y1: number,
  x2: number,
  y2: number,
  attrs: Attrs = {},
): string {
  return el("line", { x1, y1, x2, y2, stroke: "#222", ...attrs });
}

/** Polyline path through the points, in order. */
export function pathThrough(pts: Array<[number, number]>, attrs: Attrs): string {
  if (pts.length === 0) throw new Error("empty path");
  const d = pts
    .map(([x, y], i) => `${i === 0 ? "M" : "L"}${fmt(x)} ${fmt(y)}`)
    .join("");
  return el("path", { d, fill: "none", ...attrs });
}

/** Closed polygon (used for error bands). */
export function polygon(pts: Array<[number, number]>, attrs: Attrs): string {
  const d = pts
    .map(([x, y], i) => `${i === 0 ? "M" : "L"}${fmt(x)} ${fmt(y)}`)
    .join("");
  return el("path", { d: d + "Z", stroke: "none", ...attrs });
}

/** Complete SVG document with a white background, trailing newline. */
export function svgDoc(
  width: number,
  height: number,
  children: string[],
): string {
  return (
    el(
      "svg",
      {
        xmlns: "http://www.w3.org/2000/svg",
        width,
        height,
        viewBox: `0 0 ${fmt(width)} ${fmt(height)}`,
      },
      [
        el("rect", { x: 0, y: 0, width, height, fill: "#ffffff" }),
        ...children,
      ],
    ) + "\n"
  );
}
