// Strict reader for the simulator's CSV artifacts: optional leading
// "# key=value,..." metadata comment, then a header row, then numeric rows.

export interface CsvTable {
  file: string;
  header: string[];
  rows: number[][];
  meta: Record<string, string>;
}

export function parseCsv(text: string, file: string): CsvTable {
  const lines = text.split('\n').filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new Error(`${file}: empty file`);
  }
  const meta: Record<string, string> = {};
  let start = 0;
  if (lines[0].startsWith('#')) {
    for (const part of lines[0].slice(1).trim().split(',')) {
      const eq = part.indexOf('=');
      if (eq > 0) {
        meta[part.slice(0, eq)] = part.slice(eq + 1);
      }
    }
    start = 1;
  }
  if (start >= lines.length) {
    throw new Error(`${file}: missing header row`);
  }
  const header = lines[start].split(',');
  const rows: number[][] = [];
  for (let i = start + 1; i < lines.length; i++) {
    const cells = lines[i].split(',');
    if (cells.length !== header.length) {
      throw new Error(`${file}: row ${i + 1} has ${cells.length} cells, expected ${header.length}`);
    }
    const row = cells.map(Number);
    if (row.some((v) => !Number.isFinite(v))) {
      throw new Error(`${file}: non-numeric cell in row ${i + 1}`);
    }
    rows.push(row);
  }
  if (rows.length === 0) {
    throw new Error(`${file}: no data rows`);
  }
  return { file, header, rows, meta };
}

export function column(table: CsvTable, name: string): number[] {
  const idx = table.header.indexOf(name);
  if (idx < 0) {
    throw new Error(`${table.file}: missing column '${name}'`);
  }
  return table.rows.map((row) => row[idx]);
}
