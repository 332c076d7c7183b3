/**
 * Deflection-difference curves around a parameter loop.
 *
 * The tabulated values are circle-valued across the l = 0 crossings, so the
 * plotted curve unwraps consecutive increments into (-pi, pi]; the loop's
 * winding shows up as the gap between the curve's end (closed back to the
 * start) and its beginning, a multiple of 2 pi.
 */
import { Table, requireColumns } from "./csv.js";
import { el, frame, polylinePath, svgDocument } from "./svg.js";

const TWO_PI = 2 * Math.PI;

export interface DeflectionRender {
  svg: string;
  /** unwrapped curve including the closing increment back to the start */
  endpointGap: number;
  maxIncrement: number;
  values: number[];
}

export function wrapIncrement(d: number): number {
  let x = d % TWO_PI;
  if (x > Math.PI) x -= TWO_PI;
  if (x <= -Math.PI) x += TWO_PI;
  return x;
}

export function unwrapLoop(values: number[]): { curve: number[]; gap: number; maxInc: number } {
  const curve = [values[0]];
  let maxInc = 0;
  for (let i = 1; i < values.length; i++) {
    const inc = wrapIncrement(values[i] - values[i - 1]);
    maxInc = Math.max(maxInc, Math.abs(inc));
    curve.push(curve[i - 1] + inc);
  }
  const closing = wrapIncrement(values[0] - values[values.length - 1]);
  maxInc = Math.max(maxInc, Math.abs(closing));
  const gap = curve[curve.length - 1] + closing - curve[0];
  return { curve, gap, maxInc };
}

export function renderDeflection(table: Table): DeflectionRender {
  requireColumns(table, ["k", "deflection_difference"]);
  const values = table.data["deflection_difference"];
  const { curve, gap, maxInc } = unwrapLoop(values);
  const lo = Math.min(...curve);
  const hi = Math.max(...curve);
  const pad = 0.05 * (hi - lo || 1);
  const box = { x0: 56, y0: 30, w: 420, h: 240 };
  const f = frame(
    [0, values.length - 1],
    [lo - pad, hi + pad + Math.max(0, gap)],
    box,
    { x: "loop sample", y: "deflection difference", title: table.meta["reference"] ?? "" },
  );
  const parts = [...f.body];
  parts.push(
    el("path", {
      d: polylinePath(curve.map((v, k) => [f.x(k), f.y(v)])),
      fill: "none",
      stroke: "#1f77b4",
      "stroke-width": 1.6,
      class: "deflection-curve",
    }),
  );
  // closing point one loop later, showing the winding gap
  parts.push(
    el("circle", {
      cx: f.x(values.length - 1),
      cy: f.y(curve[0] + gap),
      r: 3,
      fill: "#d62728",
      class: "loop-closure",
    }),
  );
  return {
    svg: svgDocument(530, 310, parts.join("\n")),
    endpointGap: gap,
    maxIncrement: maxInc,
    values,
  };
}
