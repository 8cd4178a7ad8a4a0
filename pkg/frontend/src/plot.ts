#!/usr/bin/env node
/**
 * Regenerate a figure from experiment run logs.
 *
 * Usage:
 *   plot <figname> --inputs a.csv b.csv ... --out fig.svg
 *
 * figname is one of fig1..fig8; each input CSV becomes one series. Exits 1 on
 * usage errors, 2 when an input is missing, malformed, or empty (no image is
 * written in that case).
 */

import { readFileSync, writeFileSync } from "fs";
import path from "path";

import { CsvFormatError, parseRunCsv } from "./csv.js";
import { FIGURES, FigureDataError, NamedInput, buildFigure } from "./figures.js";

export interface Args {
  figname: string;
  inputs: string[];
  out: string;
}

export class UsageError extends Error {}

export function parseArgs(argv: string[]): Args {
  const positional: string[] = [];
  const inputs: string[] = [];
  let out: string | undefined;
  let i = 0;
  while (i < argv.length) {
    const a = argv[i];
    if (a === "--inputs") {
      i++;
      while (i < argv.length && !argv[i].startsWith("--")) {
        inputs.push(argv[i]);
        i++;
      }
    } else if (a === "--out") {
      i++;
      if (i >= argv.length) throw new UsageError("--out needs a path");
      out = argv[i];
      i++;
    } else if (a.startsWith("--")) {
      throw new UsageError(`unknown flag ${a}`);
    } else {
      positional.push(a);
      i++;
    }
  }
  if (positional.length !== 1) {
    throw new UsageError("usage: plot <figname> --inputs a.csv b.csv ... --out fig.svg");
  }
  const figname = positional[0];
  if (!(figname in FIGURES)) {
    throw new UsageError(
      `unknown figure ${JSON.stringify(figname)}; expected one of ${Object.keys(FIGURES).join(", ")}`,
    );
  }
  if (inputs.length === 0) throw new UsageError("--inputs needs at least one CSV");
  if (!out) throw new UsageError("--out is required");
  return { figname, inputs, out };
}

export function labelFor(file: string): string {
  return path.basename(file).replace(/\.dense\.csv$/, "").replace(/\.csv$/, "");
}

export function run(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
  try {
    const inputs: NamedInput[] = args.inputs.map((file) => {
      let text: string;
      try {
        text = readFileSync(file, "utf-8");
      } catch {
        throw new CsvFormatError(`${file}: cannot read file`);
      }
      return { label: labelFor(file), parsed: parseRunCsv(text, file) };
    });
    const svg = buildFigure(FIGURES[args.figname], inputs);
    writeFileSync(args.out, svg);
    console.log(`${args.out}: ${args.figname} from ${inputs.length} input(s)`);
    return 0;
  } catch (err) {
    if (err instanceof CsvFormatError || err instanceof FigureDataError) {
      console.error(`error: ${err.message}`);
      return 2;
    }
    throw err;
  }
}

const isMain = process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${path.resolve(process.argv[1])}`).href;
if (isMain) {
  process.exitCode = run(process.argv.slice(2));
}
