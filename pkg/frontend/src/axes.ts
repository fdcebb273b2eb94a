import { el, line, text } from "./svg.js";
import { fmt3 } from "./fmt.js";

/** Pixel box of the plotting area inside the figure. */
export interface Frame {
  left: number;
  right: number;
  top: number;
  bottom: number;
}

type Scale = (v: number) => number;
type TickFormat = (v: number) => string;

export function axisBottom(
  x: Scale,
  frame: Frame,
  ticks: number[],
  label = "",
  tickFormat: TickFormat = fmt3,
): string {
  const parts: string[] = [
    line(frame.left, frame.bottom, frame.right, frame.bottom),
  ];
  for (const t of ticks) {
    const px = x(t);
    parts.push(line(px, frame.bottom, px, frame.bottom + 5));
    parts.push(
      text(px, frame.bottom + 18, tickFormat(t), { "text-anchor": "middle" }),
    );
  }
  if (label !== "") {
    parts.push(
      text((frame.left + frame.right) / 2, frame.bottom + 36, label, {
        "text-anchor": "middle",
        "font-size": 13,
      }),
    );
  }
  return el("g", {}, parts);
}

export function axisLeft(
  y: Scale,
  frame: Frame,
  ticks: number[],
  label = "",
  tickFormat: TickFormat = fmt3,
): string {
  const parts: string[] = [
    line(frame.left, frame.top, frame.left, frame.bottom),
  ];
  for (const t of ticks) {
    const py = y(t);
    parts.push(line(frame.left - 5, py, frame.left, py));
    parts.push(
      text(frame.left - 8, py + 4, tickFormat(t), { "text-anchor": "end" }),
    );
  }
  if (label !== "") {
    const cx = frame.left - 40;
    const cy = (frame.top + frame.bottom) / 2;
    parts.push(
      text(cx, cy, label, {
        "text-anchor": "middle",
        "font-size": 13,
        transform: `rotate(-90 ${cx} ${cy})`,
      }),
    );
  }
  return el("g", {}, parts);
}

/** Horizontal grid lines behind the data. */
export function gridLeft(y: Scale, frame: Frame, ticks: number[]): string {
  const parts = ticks.map((t) =>
    line(frame.left, y(t), frame.right, y(t), {
      stroke: "#dddddd",
      "stroke-width": 1,
    }),
  );
  return el("g", {}, parts);
}

export function title(frame: Frame, s: string): string {
  return text((frame.left + frame.right) / 2, frame.top - 12, s, {
    "text-anchor": "middle",
    "font-size": 15,
    "font-weight": "bold",
  });
}
