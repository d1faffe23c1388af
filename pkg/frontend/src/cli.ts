#!/usr/bin/env node
/** plots <kind> <csv...> -o <out.svg> */

import { readFileSync, writeFileSync } from "node:fs";
import { parseTrajectoryCsv } from "./csv.js";
import { PLOT_KINDS, PlotKind, render } from "./plots.js";

const USAGE = `usage: plots <${PLOT_KINDS.join("|")}> <csv...> -o <out.svg>`;

export function main(argv: string[]): number {
  const args = [...argv];
  let out: string | undefined;
  const outIdx = args.findIndex((a) => a === "-o" || a === "--output");
  if (outIdx >= 0) {
    out = args[outIdx + 1];
    args.splice(outIdx, 2);
  }
  const [kind, ...inputs] = args;

  if (!kind || !out || inputs.length === 0) {
    console.error(USAGE);
    return 2;
  }
  if (!(PLOT_KINDS as string[]).includes(kind)) {
    console.error(`unknown plot kind "${kind}"\n${USAGE}`);
    return 2;
  }
  if (!out.endsWith(".svg")) {
    console.error("only SVG output is supported; use an .svg path");
    return 2;
  }

  try {
    const tables = inputs.map((path) => parseTrajectoryCsv(readFileSync(path, "utf8")));
    writeFileSync(out, render(kind as PlotKind, tables));
  } catch (err) {
    console.error(`plots: ${err instanceof Error ? err.message : err}`);
    return 1;
  }
  console.error(`wrote ${out}`);
  return 0;
}

process.exitCode = main(process.argv.slice(2));
