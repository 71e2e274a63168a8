#!/usr/bin/env node
/**
 * Figure renderer for opentc CSV output.
 *
 *   opentc-plots render --kind <lines_vs_h|heatmap_with_boundary|spectrum>
 *                       --in <csv> [--in <csv> ...] [--boundary <csv>]
 *                       [--out <fig.svg>] [--value <column>]
 *                       [--width <px>] [--height <px>]
 *
 * Exit codes: 0 success, 1 bad arguments or malformed input, 3 I/O error.
 */

import { realpathSync } from "node:fs";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";
import { InputError, Table, readTable } from "./csv.js";
import { FigureKind, buildFigure } from "./figures.js";
import { renderSVG, writeSVG } from "./render.js";

const KINDS: FigureKind[] = ["lines_vs_h", "heatmap_with_boundary", "spectrum"];
const USAGE =
  "usage: opentc-plots render --kind <" +
  KINDS.join("|") +
  "> --in <csv> [--in <csv> ...] [--boundary <csv>] [--out <fig.svg>]\n" +
  "                    [--value <column>] [--width <px>] [--height <px>]";

export function main(argv: string[]): number {
  let args;
  try {
    args = parseArgs({
      args: argv,
      allowPositionals: true,
      options: {
        kind: { type: "string" },
        in: { type: "string", multiple: true },
        boundary: { type: "string" },
        out: { type: "string" },
        value: { type: "string" },
        width: { type: "string" },
        height: { type: "string" },
      },
    });
  } catch (err) {
    console.error(`error: ${(err as Error).message}\n${USAGE}`);
    return 1;
  }

  const { positionals, values } = args;
  if (positionals.length !== 1 || positionals[0] !== "render") {
    console.error(`error: expected the "render" command\n${USAGE}`);
    return 1;
  }
  const kind = values.kind as FigureKind | undefined;
  if (!kind || !KINDS.includes(kind)) {
    console.error(`error: --kind must be one of ${KINDS.join(", ")}\n${USAGE}`);
    return 1;
  }
  const inputs = values.in ?? [];
  if (inputs.length === 0) {
    console.error(`error: at least one --in CSV is required\n${USAGE}`);
    return 1;
  }
  const width = Number(values.width ?? 900);
  const height = Number(values.height ?? 600);
  if (!Number.isFinite(width) || !Number.isFinite(height) || width <= 0 || height <= 0) {
    console.error("error: --width and --height must be positive numbers");
    return 1;
  }
  const out = values.out ?? `${kind}.svg`;

  let tables: Table[];
  let boundary: Table | null;
  try {
    tables = inputs.map((p) => readTable(p));
    boundary = values.boundary ? readTable(values.boundary, true) : null;
  } catch (err) {
    if (err instanceof InputError) {
      console.error(`error: ${err.message}`);
      return 1;
    }
    console.error(`i/o error: ${(err as Error).message}`);
    return 3;
  }

  try {
    const option = buildFigure(kind, tables, boundary, values.value);
    writeSVG(out, renderSVG(option, { width, height }));
  } catch (err) {
    if (err instanceof InputError) {
      console.error(`error: ${err.message}`);
      return 1;
    }
    console.error(`i/o error: ${(err as Error).message}`);
    return 3;
  }
  console.log(`wrote ${out} (${kind}, ${width}x${height})`);
  return 0;
}

const invoked = process.argv[1];
if (invoked && import.meta.url === pathToFileURL(realpathSync(invoked)).href) {
  process.exit(main(process.argv.slice(2)));
}
