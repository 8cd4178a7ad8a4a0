/**
 * Parsers for the two CSV schemas the experiment harness writes:
 *
 *   run log:   t,E,c_1..c_n,param_err,flags
 *   dense log: t,obs_err
 *
 * The schema is detected from the header line. Anything else is rejected
 * with a CsvFormatError naming the offending file.
 */

export interface RunLog {
  kind: "records";
  paramCount: number;
  t: number[];
  E: number[];
  c: number[][]; // [row][param]
  paramErr: number[];
  flags: string[];
}

export interface DenseLog {
  kind: "dense";
  t: number[];
  obsErr: number[];
}

export type ParsedCsv = RunLog | DenseLog;

export class CsvFormatError extends Error {}

const RECORDS_HEADER = /^t,E,c_1(?:,c_\d+)*,param_err,flags$/;

function parseNumber(token: string, file: string, line: number): number {
  const v = Number(token);
  if (token.trim() === "" || !Number.isFinite(v)) {
    throw new CsvFormatError(
      `${file}:${line}: expected a finite number, got ${JSON.stringify(token)}`,
    );
  }
  return v;
}

export function parseRunCsv(text: string, file: string): ParsedCsv {
  const lines = text
    .split("\n")
    .map((s) => s.trim())
    .filter((s) => s.length > 0);
  if (lines.length === 0) {
    throw new CsvFormatError(`${file}: empty file`);
  }
  const header = lines[0];

  if (header === "t,obs_err") {
    const t: number[] = [];
    const obsErr: number[] = [];
    for (let i = 1; i < lines.length; i++) {
      const cols = lines[i].split(",");
      if (cols.length !== 2) {
        throw new CsvFormatError(`${file}:${i + 1}: expected 2 columns, got ${cols.length}`);
      }
      t.push(parseNumber(cols[0], file, i + 1));
      obsErr.push(parseNumber(cols[1], file, i + 1));
    }
    return { kind: "dense", t, obsErr };
  }

  if (RECORDS_HEADER.test(header)) {
    const paramCount = header.split(",").length - 4;
    const t: number[] = [];
    const E: number[] = [];
    const c: number[][] = [];
    const paramErr: number[] = [];
    const flags: string[] = [];
    for (let i = 1; i < lines.length; i++) {
      const cols = lines[i].split(",");
      if (cols.length !== paramCount + 4) {
        throw new CsvFormatError(
          `${file}:${i + 1}: expected ${paramCount + 4} columns, got ${cols.length}`,
        );
      }
      t.push(parseNumber(cols[0], file, i + 1));
      E.push(parseNumber(cols[1], file, i + 1));
      c.push(cols.slice(2, 2 + paramCount).map((s) => parseNumber(s, file, i + 1)));
      paramErr.push(parseNumber(cols[2 + paramCount], file, i + 1));
      flags.push(cols[3 + paramCount]);
    }
    return { kind: "records", paramCount, t, E, c, paramErr, flags };
  }

  throw new CsvFormatError(`${file}: unrecognized header ${JSON.stringify(header)}`);
}
