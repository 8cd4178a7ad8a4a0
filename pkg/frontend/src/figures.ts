/**
 * Figure definitions: which quantity each figure plots and how the axes are
 * styled. Every figure overlays one series per input CSV. Dense logs
 * (t,obs_err) always plot the observed error; run logs plot the column the
 * figure pins below.
 */

import { ParsedCsv } from "./csv.js";
import { Series, buildChart } from "./svg.js";

export type RecordColumn = "param_err" | "E";

export interface FigureSpec {
  name: string;
  title: string;
  recordColumn: RecordColumn;
  yLabel: string;
  logY: boolean;
}

export const FIGURES: Record<string, FigureSpec> = {
  fig1: {
    name: "fig1",
    title: "Nudged state error vs time across parameter perturbations",
    recordColumn: "E",
    yLabel: "observed error",
    logY: true,
  },
  fig2: {
    name: "fig2",
    title: "State error collapse across 50 initial conditions",
    recordColumn: "E",
    yLabel: "observed error",
    logY: true,
  },
  fig3: {
    name: "fig3",
    title: "Parameter error: update rules, integrated vs on-the-fly sensitivities",
    recordColumn: "param_err",
    yLabel: "parameter error",
    logY: true,
  },
  fig4: {
    name: "fig4",
    title: "Levenberg-Marquardt convergence across nudging strengths",
    recordColumn: "param_err",
    yLabel: "parameter error",
    logY: true,
  },
  fig5: {
    name: "fig5",
    title: "Two-layer Lorenz 96 parameter recovery",
    recordColumn: "param_err",
    yLabel: "parameter error",
    logY: true,
  },
  fig6: {
    name: "fig6",
    title: "Kuramoto-Sivashinsky single-parameter estimation",
    recordColumn: "param_err",
    yLabel: "parameter error",
    logY: true,
  },
  fig7: {
    name: "fig7",
    title: "Kuramoto-Sivashinsky three-parameter estimation",
    recordColumn: "param_err",
    yLabel: "parameter error",
    logY: true,
  },
  fig8: {
    name: "fig8",
    title: "Estimation under model error: observed state error",
    recordColumn: "E",
    yLabel: "observed error",
    logY: true,
  },
};

export class FigureDataError extends Error {}

export interface NamedInput {
  /** label shown in the legend, usually the file stem */
  label: string;
  parsed: ParsedCsv;
}

export function buildFigure(spec: FigureSpec, inputs: NamedInput[]): string {
  if (inputs.length === 0) {
    throw new FigureDataError(`${spec.name}: no input CSVs given`);
  }
  const series: Series[] = inputs.map(({ label, parsed }) => {
    if (parsed.kind === "dense") {
      if (parsed.t.length === 0) {
        throw new FigureDataError(`${spec.name}: ${label} has no samples`);
      }
      return { label, x: parsed.t, y: parsed.obsErr };
    }
    if (parsed.t.length === 0) {
      throw new FigureDataError(`${spec.name}: ${label} has no records`);
    }
    const y = spec.recordColumn === "E" ? parsed.E : parsed.paramErr;
    return { label, x: parsed.t, y };
  });
  return buildChart({
    title: spec.title,
    xLabel: "time",
    yLabel: spec.yLabel,
    logY: spec.logY,
    series,
  });
}
