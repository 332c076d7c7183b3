/**
 * Reader for the headered CSV files the twocenter CLI writes.
 *
 * Files start with `# key: value` comment lines (schema id, version, config
 * hash, result metadata), then a column-name row, then numeric rows. Files
 * whose schema id is not in the supported set are rejected outright: this
 * package only renders, it never guesses at unknown data.
 */

export interface Table {
  schema: string;
  version: string;
  meta: Record<string, string>;
  columns: string[];
  /** column name -> numeric values (NaN where the cell is not a number) */
  data: Record<string, number[]>;
  /** column name -> raw string cells (for textual columns like "family") */
  text: Record<string, string[]>;
  rowCount: number;
}

export const SUPPORTED_SCHEMAS = new Set([
  "twocenter.bifdiag.grid.v1",
  "twocenter.bifdiag.spatial.v1",
  "twocenter.bifdiag.planar.v1",
  "twocenter.deflection.v1",
  "twocenter.knauf.v1",
]);

export class SchemaError extends Error {}

export function parseTable(raw: string): Table {
  const lines = raw.split(/\r?\n/);
  const meta: Record<string, string> = {};
  let i = 0;
  for (; i < lines.length && lines[i].startsWith("#"); i++) {
    const body = lines[i].slice(1);
    const sep = body.indexOf(":");
    if (sep >= 0) {
      meta[body.slice(0, sep).trim()] = body.slice(sep + 1).trim();
    }
  }
  const schema = meta["schema"] ?? "";
  if (!SUPPORTED_SCHEMAS.has(schema)) {
    throw new SchemaError(`unsupported or missing schema id: "${schema}"`);
  }
  if (!(i < lines.length) || lines[i].length === 0) {
    throw new SchemaError("missing column header row");
  }
  const columns = lines[i].split(",").map((c) => c.trim());
  const data: Record<string, number[]> = {};
  const text: Record<string, string[]> = {};
  for (const c of columns) {
    data[c] = [];
    text[c] = [];
  }
  let rowCount = 0;
  for (i += 1; i < lines.length; i++) {
    const line = lines[i].trim();
    if (line.length === 0) continue;
    const cells = line.split(",");
    if (cells.length !== columns.length) {
      throw new SchemaError(
        `row ${rowCount} has ${cells.length} cells, expected ${columns.length}`,
      );
    }
    cells.forEach((cell, j) => {
      data[columns[j]].push(Number(cell));
      text[columns[j]].push(cell);
    });
    rowCount += 1;
  }
  return {
    schema,
    version: meta["version"] ?? "",
    meta,
    columns,
    data,
    text,
    rowCount,
  };
}

export function requireColumns(table: Table, names: string[]): void {
  for (const n of names) {
    if (!(n in table.data)) {
      throw new SchemaError(`column "${n}" missing from ${table.schema}`);
    }
  }
}
