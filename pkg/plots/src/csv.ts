/**
 * Readers for the CSV files the opentc command-line tool writes: a block
 * of `#`-prefixed metadata lines, a header row, then data rows.  The
 * metadata block is a flat `section.key = value` document; the keys we
 * need for labelling (sweep axes, drive settings) are exposed as a map.
 */

import { readFileSync } from "node:fs";
import Papa from "papaparse";

export interface Table {
  /** Column names from the header row, in file order. */
  columns: string[];
  /** Data rows keyed by column name; cells stay as written. */
  rows: Record<string, string>[];
  /** Metadata `section.key` -> value, from the leading comment block. */
  meta: Map<string, string>;
  /** Path the table was read from, for error messages. */
  path: string;
}

export class InputError extends Error {}

function parseMeta(lines: string[]): Map<string, string> {
  const meta = new Map<string, string>();
  for (const line of lines) {
    const body = line.replace(/^#\s?/, "");
    const eq = body.indexOf("=");
    if (eq < 0) continue;
    meta.set(body.slice(0, eq).trim(), body.slice(eq + 1).trim());
  }
  return meta;
}

/** Read one CSV; `allowEmpty` admits a header-only file (boundary overlays
 *  may legitimately contain no points). */
export function readTable(path: string, allowEmpty = false): Table {
  const text = readFileSync(path, "utf-8");
  const lines = text.split(/\r?\n/);
  const metaLines = lines.filter((l) => l.startsWith("#"));
  const body = lines.filter((l) => !l.startsWith("#") && l.trim() !== "");
  if (body.length === 0) {
    throw new InputError(`${path}: no header row`);
  }
  const parsed = Papa.parse<Record<string, string>>(body.join("\n"), {
    header: true,
    delimiter: ",",
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const e = parsed.errors[0];
    throw new InputError(`${path}: ${e.message} (row ${e.row})`);
  }
  const columns = parsed.meta.fields ?? [];
  if (!allowEmpty && parsed.data.length === 0) {
    throw new InputError(`${path}: no data rows`);
  }
  return { columns, rows: parsed.data, meta: parseMeta(metaLines), path };
}

/** Numeric column accessor; `nan` cells become NaN, anything else
 *  unparseable is an error. */
export function numeric(table: Table, column: string): number[] {
  requireColumns(table, [column]);
  return table.rows.map((row, i) => {
    const cell = row[column];
    if (cell === "" || cell === undefined) return NaN;
    const v = Number(cell);
    if (Number.isNaN(v) && cell !== "nan" && cell !== "NaN") {
      throw new InputError(
        `${table.path}: column ${column}, row ${i + 1}: ` +
          `expected a number, got "${cell}"`,
      );
    }
    return v;
  });
}

export function strings(table: Table, column: string): string[] {
  requireColumns(table, [column]);
  return table.rows.map((row) => row[column] ?? "");
}

export function requireColumns(table: Table, names: string[]): void {
  for (const name of names) {
    if (!table.columns.includes(name)) {
      throw new InputError(
        `${table.path}: missing column "${name}" ` +
          `(have: ${table.columns.join(", ")})`,
      );
    }
  }
}

/** Group row indices by the value of one column, preserving first-seen
 *  order of the keys. */
export function groupBy(table: Table, column: string): Map<string, number[]> {
  const groups = new Map<string, number[]>();
  table.rows.forEach((row, i) => {
    const key = row[column] ?? "";
    const bucket = groups.get(key);
    if (bucket) bucket.push(i);
    else groups.set(key, [i]);
  });
  return groups;
}
