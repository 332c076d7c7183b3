/**
 * Render twocenter CSV outputs to SVG.
 *
 *   node dist/cli.js bifdiag out.svg h0_grid.csv h0_diagram.csv [more pairs...]
 *   node dist/cli.js deflection out.svg deflection_gamma3.csv
 */
import { readFileSync, writeFileSync } from "node:fs";

import { renderSlices } from "./bifdiag.js";
import { parseTable } from "./csv.js";
import { renderDeflection } from "./deflection.js";

function load(path: string) {
  return parseTable(readFileSync(path, "utf8"));
}

export function main(argv: string[]): number {
  const [mode, out, ...inputs] = argv;
  if (!mode || !out) {
    console.error("usage: cli.js bifdiag|deflection OUT.svg INPUT.csv...");
    return 2;
  }
  if (mode === "bifdiag") {
    if (inputs.length === 0 || inputs.length % 2 !== 0) {
      console.error("bifdiag needs grid/diagram CSV pairs");
      return 2;
    }
    const pairs = [];
    for (let i = 0; i < inputs.length; i += 2) {
      pairs.push({ grid: load(inputs[i]), diagram: load(inputs[i + 1]) });
    }
    const { svg, panels } = renderSlices(pairs);
    writeFileSync(out, svg);
    for (const p of panels) {
      const tag =
        p.declaredRegionCount === null || p.declaredRegionCount === p.regionCount
          ? "ok"
          : "MISMATCH";
      console.log(
        `${p.panel}: regions ${p.regionCount} (declared ${p.declaredRegionCount}) ` +
          `${p.curveSegments} arcs [${tag}]`,
      );
      if (tag === "MISMATCH") return 3;
    }
    return 0;
  }
  if (mode === "deflection") {
    if (inputs.length !== 1) {
      console.error("deflection needs exactly one CSV");
      return 2;
    }
    const r = renderDeflection(load(inputs[0]));
    writeFileSync(out, r.svg);
    console.log(
      `endpoint gap ${(r.endpointGap / (2 * Math.PI)).toFixed(4)} x 2pi, ` +
        `max increment ${r.maxIncrement.toFixed(3)} rad`,
    );
    return 0;
  }
  console.error(`unknown mode "${mode}"`);
  return 2;
}

if (import.meta.url === `file://${process.argv[1]}`) {
  process.exit(main(process.argv.slice(2)));
}
