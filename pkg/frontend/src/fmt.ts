/** Number formatting shared by every renderer.
 *
 * All numeric output funnels through here so that an SVG is a pure
 * function of its input bytes: six significant digits, shortest
 * round-trip spelling, no negative zero.
 */
export function fmt(x: number): string {
  if (!Number.isFinite(x)) {
    throw new Error(`non-finite value in SVG output: ${x}`);
  }
  const v = Number(x.toPrecision(6));
  return Object.is(v, -0) ? "0" : String(v);
}

/** Three significant digits, for dense tick labels. */
export function fmt3(x: number): string {
  if (!Number.isFinite(x)) {
    throw new Error(`non-finite tick label: ${x}`);
  }
  const v = Number(x.toPrecision(3));
  return Object.is(v, -0) ? "0" : String(v);
}
