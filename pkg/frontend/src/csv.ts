/** Trajectory CSV parsing: header `t,<name...>`, one numeric row per step. */

export interface TrajectoryTable {
  columns: string[];
  rows: number[][];
}

export function parseTrajectoryCsv(text: string): TrajectoryTable {
  const lines = text.split(/\r?\n/).filter((line) => line.trim().length > 0);
  if (lines.length < 2) {
    throw new Error("trajectory CSV needs a header and at least one row");
  }
  const columns = lines[0].split(",").map((c) => c.trim());
  if (columns[0] !== "t") {
    throw new Error(`first column must be "t", got "${columns[0]}"`);
  }
  const rows: number[][] = [];
  for (let i = 1; i < lines.length; i++) {
    const parts = lines[i].split(",");
    if (parts.length !== columns.length) {
      throw new Error(`row ${i} has ${parts.length} fields, expected ${columns.length}`);
    }
    const row = parts.map(Number);
    if (row.some((v) => !Number.isFinite(v))) {
      throw new Error(`row ${i} contains a non-numeric value`);
    }
    rows.push(row);
  }
  return { columns, rows };
}

/** Extract one column by name; fails fast when it is absent. */
export function column(table: TrajectoryTable, name: string): number[] {
  const idx = table.columns.indexOf(name);
  if (idx < 0) {
    throw new Error(`missing column "${name}" (have: ${table.columns.join(", ")})`);
  }
  return table.rows.map((row) => row[idx]);
}
