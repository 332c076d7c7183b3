import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { parseTable } from "../src/csv.js";
import { renderDeflection, unwrapLoop, wrapIncrement } from "../src/deflection.js";

const FIX = new URL("../fixtures/", import.meta.url).pathname;
const load = (name: string) => parseTable(readFileSync(FIX + name, "utf8"));

describe("deflection loop rendering", () => {
  it("endpoint gap of the committed loop equals 2 pi", () => {
    const r = renderDeflection(load("deflection_gamma3.csv"));
    expect(Math.abs(r.endpointGap - 2 * Math.PI)).toBeLessThan(0.01 * 2 * Math.PI);
    expect(r.svg).toContain("deflection-curve");
    expect(r.svg).toContain("loop-closure");
  });

  it("gap agrees with the variation recorded by the producer", () => {
    const table = load("deflection_gamma3.csv");
    const r = renderDeflection(table);
    expect(r.endpointGap).toBeCloseTo(Number(table.meta["variation"]), 6);
  });

  it("curve is continuous at plotted resolution (increments below pi)", () => {
    const r = renderDeflection(load("deflection_gamma3.csv"));
    expect(r.maxIncrement).toBeLessThan(Math.PI / 2);
  });

  it("self-comparison fixture renders an identically zero curve", () => {
    const r = renderDeflection(load("deflection_gamma3_self.csv"));
    expect(r.values.every((v) => v === 0)).toBe(true);
    expect(r.endpointGap).toBe(0);
  });

  it("wrap/unwrap helpers", () => {
    expect(wrapIncrement(0.1)).toBeCloseTo(0.1, 12);
    expect(wrapIncrement(2 * Math.PI - 0.1)).toBeCloseTo(-0.1, 12);
    expect(unwrapLoop([0, 1, 2, 3, 4, 5]).gap).toBeCloseTo(2 * Math.PI, 10);
  });
});
