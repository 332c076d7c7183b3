/** Minimal SVG assembly: string templates, no DOM. */

export interface Scale {
  (x: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const k = (r1 - r0) / (d1 - d0 || 1);
  const f = ((x: number) => r0 + (x - d0) * k) as Scale;
  f.domain = domain;
  f.range = range;
  return f;
}

export function el(tag: string, attrs: Record<string, string | number>, body = ""): string {
  const a = Object.entries(attrs)
    .map(([k, v]) => `${k}="${typeof v === "number" ? fmt(v) : v}"`)
    .join(" ");
  return body ? `<${tag} ${a}>${body}</${tag}>` : `<${tag} ${a}/>`;
}

export function fmt(v: number): string {
  return Number.isInteger(v) ? String(v) : v.toPrecision(6);
}

export function polylinePath(pts: Array<[number, number]>): string {
  return pts
    .map(([x, y], i) => `${i === 0 ? "M" : "L"}${fmt(x)},${fmt(y)}`)
    .join("");
}

export function svgDocument(width: number, height: number, body: string): string {
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
    `viewBox="0 0 ${width} ${height}">\n${body}\n</svg>\n`
  );
}

export interface Frame {
  x: Scale;
  y: Scale;
  body: string[];
}

/** Plot frame with border and edge tick labels. */
export function frame(
  xDomain: [number, number],
  yDomain: [number, number],
  box: { x0: number; y0: number; w: number; h: number },
  labels: { x?: string; y?: string; title?: string } = {},
): Frame {
  const x = linearScale(xDomain, [box.x0, box.x0 + box.w]);
  const y = linearScale(yDomain, [box.y0 + box.h, box.y0]); // flipped
  const body: string[] = [
    el("rect", {
      x: box.x0,
      y: box.y0,
      width: box.w,
      height: box.h,
      fill: "none",
      stroke: "#333",
      "stroke-width": 1,
    }),
  ];
  const text = (tx: number, ty: number, s: string, anchor = "middle", size = 10) =>
    el("text", { x: tx, y: ty, "font-size": size, "text-anchor": anchor, fill: "#333" }, s);
  body.push(text(box.x0, box.y0 + box.h + 12, fmt(xDomain[0])));
  body.push(text(box.x0 + box.w, box.y0 + box.h + 12, fmt(xDomain[1])));
  body.push(text(box.x0 - 4, box.y0 + box.h, fmt(yDomain[0]), "end"));
  body.push(text(box.x0 - 4, box.y0 + 8, fmt(yDomain[1]), "end"));
  if (labels.title) body.push(text(box.x0 + box.w / 2, box.y0 - 6, labels.title, "middle", 11));
  if (labels.x) body.push(text(box.x0 + box.w / 2, box.y0 + box.h + 24, labels.x));
  if (labels.y) {
    body.push(
      el(
        "text",
        {
          x: box.x0 - 26,
          y: box.y0 + box.h / 2,
          "font-size": 10,
          "text-anchor": "middle",
          fill: "#333",
          transform: `rotate(-90 ${box.x0 - 26} ${box.y0 + box.h / 2})`,
        },
        labels.y,
      ),
    );
  }
  return { x, y, body };
}
