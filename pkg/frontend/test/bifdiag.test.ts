import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { curveArcs, regionCount, renderSlices } from "../src/bifdiag.js";
import { parseTable } from "../src/csv.js";

const FIX = new URL("../fixtures/", import.meta.url).pathname;
const load = (name: string) => parseTable(readFileSync(FIX + name, "utf8"));

const SLICES = ["0.25", "0.5", "1"];

describe("bifurcation slice rendering (fig1 fixtures)", () => {
  const pairs = SLICES.map((h) => ({
    grid: load(`fig1_h${h}_grid.csv`),
    diagram: load(`fig1_h${h}_diagram.csv`),
  }));
  const { svg, panels } = renderSlices(pairs);

  it("renders three panels into one document", () => {
    expect(panels).toHaveLength(3);
    expect(svg.startsWith("<svg")).toBe(true);
    expect((svg.match(/<rect/g) ?? []).length).toBeGreaterThan(100); // shading
    expect((svg.match(/class="curve spatial-eta"/g) ?? []).length).toBeGreaterThan(0);
    expect((svg.match(/critical-line-/g) ?? []).length).toBe(9); // 3 lines x 3 panels
  });

  it("recomputed region count matches the declared metadata", () => {
    for (const p of panels) {
      expect(p.declaredRegionCount).not.toBeNull();
      expect(p.regionCount).toBe(p.declaredRegionCount);
    }
  });

  it("draws only physical curve samples", () => {
    const diagram = load("fig1_h1_diagram.csv");
    const arcs = curveArcs(diagram, "g", "l");
    for (const segs of arcs.values()) {
      for (const seg of segs) {
        expect(seg.length).toBeGreaterThan(1);
      }
    }
  });

  it("flood fill handles an empty grid", () => {
    expect(
      regionCount({ rows: 2, cols: 2, xs: [0, 0, 1, 1], ys: [0, 1, 0, 1],
                    physical: [false, false, false, false] }),
    ).toBe(0);
  });
});
