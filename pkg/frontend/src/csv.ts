/**
 * Minimal CSV reader for the simulator's output files: a header line
 * followed by comma-separated rows, LF endings, no quoting.
 */

export interface CsvTable {
  header: string[];
  /** Raw string cells, one array per data row. */
  rows: string[][];
}

export class EmptyCsvError extends Error {
  constructor(path: string) {
    super(`CSV has no data rows: ${path}`);
  }
}

export class MissingColumnError extends Error {
  constructor(column: string, path: string) {
    super(`CSV is missing required column '${column}': ${path}`);
  }
}

export function parseCsv(text: string): CsvTable {
  const lines = text
    .split(/\r?\n/)
    .map((l) => l.trim())
    .filter((l) => l.length > 0);
  if (lines.length === 0) {
    return { header: [], rows: [] };
  }
  const header = lines[0].split(",").map((h) => h.trim());
  const rows = lines.slice(1).map((l) => l.split(",").map((c) => c.trim()));
  return { header, rows };
}

/**
 * Extract named numeric columns; rows whose `status` cell (when present)
 * is not "ok" are skipped, as are rows with non-finite values.
 */
export function numericColumns(
  table: CsvTable,
  names: string[],
  path: string
): number[][] {
  const indices = names.map((name) => {
    const i = table.header.indexOf(name);
    if (i < 0) {
      throw new MissingColumnError(name, path);
    }
    return i;
  });
  const statusIdx = table.header.indexOf("status");
  const out: number[][] = names.map(() => []);
  for (const row of table.rows) {
    if (statusIdx >= 0 && row[statusIdx] !== "ok") {
      continue;
    }
    const values = indices.map((i) => Number(row[i]));
    if (values.some((v) => !Number.isFinite(v))) {
      continue;
    }
    values.forEach((v, k) => out[k].push(v));
  }
  if (out[0].length === 0) {
    throw new EmptyCsvError(path);
  }
  return out;
}
