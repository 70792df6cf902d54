/** Minimal CSV reading plus schema validation for the experiment outputs. */

import { readFileSync } from "node:fs";

export class SchemaError extends Error {}

export interface Table {
  file: string;
  columns: string[];
  /** Row-major cells, strings as written. */
  rows: string[][];
}

export function readCsv(file: string): Table {
  const text = readFileSync(file, "utf-8");
  const lines = text.split("\n").filter((ln) => ln.length > 0);
  if (lines.length === 0) {
    throw new SchemaError(`${file}: empty file, expected a header row`);
  }
  const columns = lines[0].split(",");
  const rows = lines.slice(1).map((ln) => ln.split(","));
  if (rows.length === 0) {
    throw new SchemaError(`${file}: no data rows`);
  }
  for (const [i, row] of rows.entries()) {
    if (row.length !== columns.length) {
      throw new SchemaError(
        `${file}: row ${i + 2} has ${row.length} cells, expected ${columns.length}`,
      );
    }
  }
  return { file, columns, rows };
}

/** Numeric column accessor; the named column must exist and parse. */
export function numbers(table: Table, column: string): number[] {
  const idx = table.columns.indexOf(column);
  if (idx < 0) {
    throw new SchemaError(`${table.file}: missing column "${column}"`);
  }
  return table.rows.map((row, i) => {
    const v = Number(row[idx]);
    if (!Number.isFinite(v)) {
      throw new SchemaError(
        `${table.file}: row ${i + 2}, column "${column}": not a number (${row[idx]})`,
      );
    }
    return v;
  });
}

export function strings(table: Table, column: string): string[] {
  const idx = table.columns.indexOf(column);
  if (idx < 0) {
    throw new SchemaError(`${table.file}: missing column "${column}"`);
  }
  return table.rows.map((row) => row[idx]);
}

export function requireColumns(table: Table, cols: string[]): void {
  for (const c of cols) {
    if (!table.columns.includes(c)) {
      throw new SchemaError(`${table.file}: missing column "${c}"`);
    }
  }
}
