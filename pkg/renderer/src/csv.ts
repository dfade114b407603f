import { readFileSync } from "fs";
import Papa from "papaparse";

export interface CsvTable {
  path: string;
  columns: string[];
  rows: Record<string, string>[];
}

export function readCsv(path: string): CsvTable {
  const text = readFileSync(path, "utf8");
  const parsed = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (parsed.errors.length > 0) {
    const first = parsed.errors[0];
    throw new Error(`${path}: CSV parse error at row ${first.row}: ${first.message}`);
  }
  const columns = parsed.meta.fields ?? [];
  if (parsed.data.length === 0) {
    throw new Error(`${path}: CSV has no data rows`);
  }
  return { path, columns, rows: parsed.data };
}

/** Extract one column as numbers, failing loudly on absent names or bad cells. */
export function numberColumn(table: CsvTable, name: string): number[] {
  if (!table.columns.includes(name)) {
    throw new Error(`${table.path}: missing column '${name}' (has: ${table.columns.join(", ")})`);
  }
  return table.rows.map((row, i) => {
    const value = Number(row[name]);
    if (!Number.isFinite(value)) {
      throw new Error(`${table.path}: non-numeric value '${row[name]}' in column '${name}' row ${i + 1}`);
    }
    return value;
  });
}
