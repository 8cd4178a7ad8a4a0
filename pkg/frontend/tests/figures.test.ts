import { mkdtempSync, readFileSync, writeFileSync, existsSync } from "fs";
import { tmpdir } from "os";
import path from "path";

import { describe, expect, it } from "vitest";

import { parseRunCsv } from "../src/csv.js";
import { FIGURES, FigureDataError, buildFigure } from "../src/figures.js";
import { buildChart } from "../src/svg.js";
import { labelFor, parseArgs, run } from "../src/plot.js";

function recordsCsv(rows: number[][]): string {
  const header = "t,E,c_1,c_2,c_3,param_err,flags";
  const body = rows.map((r) => r.join(",") + ",").join("\n");
  return `${header}\n${body}\n`;
}

function syntheticRun(n: number, scale: number): string {
  const rows = [];
  for (let k = 1; k <= n; k++) {
    const err = scale * Math.exp(-0.3 * k);
    rows.push([0.5 * k, 0.5 * err * err, 10 - err, 28, 2.66, err]);
  }
  return recordsCsv(rows);
}

describe("buildFigure", () => {
  it("makes one polyline per input", () => {
    const inputs = [1, 2, 3].map((i) => ({
      label: `run${i}`,
      parsed: parseRunCsv(syntheticRun(20, i), `run${i}.csv`),
    }));
    const svg = buildFigure(FIGURES.fig3, inputs);
    expect(svg.match(/<polyline/g)).toHaveLength(3);
    expect(svg).toContain("run1");
    expect(svg).toContain("run3");
  });

  it("rejects empty record logs", () => {
    const empty = parseRunCsv("t,E,c_1,c_2,c_3,param_err,flags\n", "e.csv");
    expect(() => buildFigure(FIGURES.fig3, [{ label: "e", parsed: empty }]))
      .toThrow(FigureDataError);
  });

  it("uses the observed error for dense inputs", () => {
    const dense = parseRunCsv("t,obs_err\n0.1,1.0\n0.2,0.5\n", "d.csv");
    const svg = buildFigure(FIGURES.fig2, [{ label: "d", parsed: dense }]);
    expect(svg).toContain("<polyline");
  });

  it("is deterministic", () => {
    const inputs = [{ label: "r", parsed: parseRunCsv(syntheticRun(10, 1), "r.csv") }];
    expect(buildFigure(FIGURES.fig7, inputs)).toBe(buildFigure(FIGURES.fig7, inputs));
  });

  it("collapses the legend for big ensembles", () => {
    const inputs = Array.from({ length: 50 }, (_, i) => ({
      label: `seed${i}`,
      parsed: parseRunCsv(syntheticRun(10, 1 + 0.01 * i), `s${i}.csv`),
    }));
    const svg = buildFigure(FIGURES.fig2, inputs);
    expect(svg.match(/<polyline/g)).toHaveLength(50);
    expect(svg).toContain("50 runs");
    expect(svg).not.toContain("seed42");
  });
});

describe("buildChart on a log axis", () => {
  it("drops non-positive values and errors when nothing is left", () => {
    const ok = buildChart({
      title: "t", xLabel: "x", yLabel: "y", logY: true,
      series: [{ label: "a", x: [1, 2, 3], y: [0.0, 1e-3, 1e-2] }],
    });
    expect(ok).toContain("<polyline");
    expect(() => buildChart({
      title: "t", xLabel: "x", yLabel: "y", logY: true,
      series: [{ label: "a", x: [1, 2], y: [0.0, 0.0] }],
    })).toThrow(/every series is empty/);
  });
});

describe("plot CLI", () => {
  it("parses the documented invocation", () => {
    const args = parseArgs(["fig3", "--inputs", "a.csv", "b.csv", "--out", "f.svg"]);
    expect(args).toEqual({ figname: "fig3", inputs: ["a.csv", "b.csv"], out: "f.svg" });
  });

  it("rejects bad usage", () => {
    expect(() => parseArgs([])).toThrow();
    expect(() => parseArgs(["fig99", "--inputs", "a.csv", "--out", "f.svg"])).toThrow();
    expect(() => parseArgs(["fig3", "--inputs", "--out", "f.svg"])).toThrow();
    expect(() => parseArgs(["fig3", "--inputs", "a.csv"])).toThrow();
  });

  it("strips csv suffixes from labels", () => {
    expect(labelFor("/x/y/fig3-lm-otf.csv")).toBe("fig3-lm-otf");
    expect(labelFor("fig8_lm.dense.csv")).toBe("fig8_lm");
  });

  it("writes an overlay image for six runs", () => {
    const dir = mkdtempSync(path.join(tmpdir(), "plots-"));
    const files = [];
    for (let i = 0; i < 6; i++) {
      const file = path.join(dir, `run${i}.csv`);
      writeFileSync(file, syntheticRun(30, 1 + i));
      files.push(file);
    }
    const out = path.join(dir, "fig3.svg");
    const code = run(["fig3", "--inputs", ...files, "--out", out]);
    expect(code).toBe(0);
    const svg = readFileSync(out, "utf-8");
    expect(svg.match(/<polyline/g)).toHaveLength(6);
    expect(svg.startsWith("<svg")).toBe(true);
  });

  it("exits nonzero without writing on empty input", () => {
    const dir = mkdtempSync(path.join(tmpdir(), "plots-"));
    const empty = path.join(dir, "empty.csv");
    writeFileSync(empty, "t,E,c_1,c_2,c_3,param_err,flags\n");
    const out = path.join(dir, "never.svg");
    expect(run(["fig3", "--inputs", empty, "--out", out])).toBe(2);
    expect(existsSync(out)).toBe(false);
  });

  it("exits nonzero on missing and malformed files", () => {
    const dir = mkdtempSync(path.join(tmpdir(), "plots-"));
    const out = path.join(dir, "never.svg");
    expect(run(["fig3", "--inputs", path.join(dir, "nope.csv"), "--out", out])).toBe(2);
    const bad = path.join(dir, "bad.csv");
    writeFileSync(bad, "not,a,run,log\n1,2,3,4\n");
    expect(run(["fig3", "--inputs", bad, "--out", out])).toBe(2);
    expect(existsSync(out)).toBe(false);
  });
});
