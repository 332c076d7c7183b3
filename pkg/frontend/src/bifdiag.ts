/**
 * Bifurcation-diagram slices: physical-region shading from the classification
 * grid, critical curves as arcs, critical lines as black points. Rendering is
 * a pure function of the input tables; no physics is recomputed here.
 */
import { Table, requireColumns, SchemaError } from "./csv.js";
import { el, frame, polylinePath, svgDocument } from "./svg.js";

export interface SliceRender {
  svg: string;
  panel: string;
  regionCount: number;
  declaredRegionCount: number | null;
  curveSegments: number;
}

interface GridShape {
  rows: number;
  cols: number;
  xs: number[];
  ys: number[];
  physical: boolean[];
}

function gridShape(grid: Table, xCol: string, yCol: string): GridShape {
  requireColumns(grid, [xCol, yCol, "physical"]);
  const rows = Number(grid.meta["rows"] ?? 0);
  const cols = Number(grid.meta["cols"] ?? 0);
  if (rows * cols !== grid.rowCount) {
    throw new SchemaError(
      `grid metadata ${rows}x${cols} does not match ${grid.rowCount} rows`,
    );
  }
  return {
    rows,
    cols,
    xs: grid.data[xCol],
    ys: grid.data[yCol],
    physical: grid.data["physical"].map((v) => v === 1),
  };
}

/** 4-connected components of the shaded cells (cross-checked with the header). */
export function regionCount(shape: GridShape): number {
  const { rows, cols, physical } = shape;
  const seen = new Uint8Array(rows * cols);
  let count = 0;
  for (let i = 0; i < rows * cols; i++) {
    if (!physical[i] || seen[i]) continue;
    count += 1;
    const stack = [i];
    seen[i] = 1;
    while (stack.length) {
      const k = stack.pop()!;
      const r = Math.floor(k / cols);
      const c = k % cols;
      for (const [rr, cc] of [[r - 1, c], [r + 1, c], [r, c - 1], [r, c + 1]]) {
        if (rr < 0 || rr >= rows || cc < 0 || cc >= cols) continue;
        const kk = rr * cols + cc;
        if (physical[kk] && !seen[kk]) {
          seen[kk] = 1;
          stack.push(kk);
        }
      }
    }
  }
  return count;
}

function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  return [lo, hi];
}

/** Split curve samples into polyline arcs: breaks at family changes,
 *  non-physical samples and jumps larger than a few grid cells. */
export function curveArcs(
  diagram: Table,
  xCol: string,
  yCol: string,
): Map<string, Array<Array<[number, number]>>> {
  requireColumns(diagram, ["family", xCol, yCol, "physical"]);
  const fams = diagram.text["family"];
  const xs = diagram.data[xCol];
  const ys = diagram.data[yCol];
  const phys = diagram.data["physical"];
  const [xLo, xHi] = extent(xs.filter(Number.isFinite));
  const [yLo, yHi] = extent(ys.filter(Number.isFinite));
  const jump = 0.06 * Math.hypot(xHi - xLo, yHi - yLo);
  const out = new Map<string, Array<Array<[number, number]>>>();
  let cur: Array<[number, number]> | null = null;
  let curFam = "";
  const flush = () => {
    if (cur && cur.length > 1) {
      if (!out.has(curFam)) out.set(curFam, []);
      out.get(curFam)!.push(cur);
    }
    cur = null;
  };
  for (let i = 0; i < xs.length; i++) {
    const fam = fams[i] ?? "";
    if (fam.startsWith("line-")) {
      flush();
      curFam = "";
      continue;
    }
    const ok = phys[i] === 1 && Number.isFinite(xs[i]) && Number.isFinite(ys[i]);
    if (!ok || fam !== curFam) {
      flush();
      curFam = fam;
      if (!ok) continue;
      cur = [[xs[i], ys[i]]];
      continue;
    }
    const last = cur?.[cur.length - 1];
    if (last && Math.hypot(xs[i] - last[0], ys[i] - last[1]) > jump) {
      flush();
      curFam = fam;
      cur = [[xs[i], ys[i]]];
      continue;
    }
    if (!cur) cur = [];
    cur.push([xs[i], ys[i]]);
  }
  flush();
  return out;
}

const PANEL_W = 260;
const PANEL_H = 240;
const MARGIN = 44;

export function renderSlicePanel(
  grid: Table,
  diagram: Table,
  panelIndex: number,
  xCol = "g",
  yCol = "l",
): { body: string; result: SliceRender } {
  const shape = gridShape(grid, xCol, yCol);
  const declared = grid.meta["region-count"] != null ? Number(grid.meta["region-count"]) : null;
  const count = regionCount(shape);
  const x0 = MARGIN + panelIndex * (PANEL_W + MARGIN);
  const box = { x0, y0: MARGIN, w: PANEL_W, h: PANEL_H };
  const [gLo, gHi] = extent(shape.xs);
  const [lLo, lHi] = extent(shape.ys);
  const title = grid.meta["h"] != null ? `h = ${grid.meta["h"]}` : "";
  const f = frame([gLo, gHi], [lLo, lHi], box, { x: xCol, y: yCol, title });
  const parts: string[] = [...f.body];
  // shading: one rect per physical cell
  const cw = PANEL_W / shape.cols;
  const ch = PANEL_H / shape.rows;
  let shaded = 0;
  for (let i = 0; i < shape.physical.length; i++) {
    if (!shape.physical[i]) continue;
    shaded += 1;
    parts.push(
      el("rect", {
        x: f.x(shape.xs[i]) - cw / 2,
        y: f.y(shape.ys[i]) - ch / 2,
        width: cw,
        height: ch,
        fill: "#9ecae1",
        "fill-opacity": 0.55,
        stroke: "none",
        class: "region-cell",
      }),
    );
  }
  // critical curves as arcs
  let segments = 0;
  for (const [fam, arcs] of curveArcs(diagram, xCol, yCol)) {
    for (const arc of arcs) {
      segments += 1;
      parts.push(
        el("path", {
          d: polylinePath(arc.map(([gx, ly]) => [f.x(gx), f.y(ly)])),
          fill: "none",
          stroke: fam.includes("eta") || fam.includes("nu") ? "#d62728" : "#2ca02c",
          "stroke-width": 1.4,
          class: `curve ${fam}`,
        }),
      );
    }
  }
  // critical lines as black points
  const fams = diagram.text["family"];
  for (let i = 0; i < fams.length; i++) {
    if (!fams[i].startsWith("line-")) continue;
    parts.push(
      el("circle", {
        cx: f.x(diagram.data[xCol][i]),
        cy: f.y(diagram.data[yCol][i]),
        r: 3,
        fill: "#000",
        class: `critical-${fams[i]}`,
      }),
    );
  }
  const svg = parts.join("\n");
  return {
    body: svg,
    result: {
      svg,
      panel: title,
      regionCount: count,
      declaredRegionCount: declared,
      curveSegments: segments,
    },
  };
}

export function renderSlices(
  pairs: Array<{ grid: Table; diagram: Table }>,
): { svg: string; panels: SliceRender[] } {
  const panels: SliceRender[] = [];
  const bodies: string[] = [];
  pairs.forEach(({ grid, diagram }, i) => {
    const { body, result } = renderSlicePanel(grid, diagram, i);
    bodies.push(body);
    panels.push(result);
  });
  const width = MARGIN + pairs.length * (PANEL_W + MARGIN);
  return { svg: svgDocument(width, PANEL_H + 2 * MARGIN, bodies.join("\n")), panels };
}
