/**
 * Minimal deterministic SVG line charts: fixed geometry, fixed palette,
 * no timestamps, so identical inputs produce identical bytes.
 */

import { Scale, formatTick, linearScale, logScale } from "./scale.js";

export interface Series {
  label: string;
  x: number[];
  y: number[];
  width?: number;
  opacity?: number;
}

export interface ChartOptions {
  title: string;
  xLabel: string;
  yLabel: string;
  logY: boolean;
  series: Series[];
  /** legends with too many entries collapse to a run count */
  maxLegendEntries?: number;
}

const WIDTH = 960;
const HEIGHT = 560;
const MARGIN = { top: 48, right: 24, bottom: 56, left: 76 };
const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
  "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f",
];
const FONT = "font-family=\"Helvetica, Arial, sans-serif\"";

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function fmt(v: number): string {
  return Number(v.toFixed(2)).toString();
}

interface Extent {
  min: number;
  max: number;
}

function extent(values: number[]): Extent | null {
  let min = Infinity;
  let max = -Infinity;
  for (const v of values) {
    if (v < min) min = v;
    if (v > max) max = v;
  }
  return min <= max ? { min, max } : null;
}

/** On a log axis, points with y <= 0 cannot be drawn; drop them per series. */
function usable(series: Series, logY: boolean): { x: number[]; y: number[] } {
  if (!logY) return { x: series.x, y: series.y };
  const x: number[] = [];
  const y: number[] = [];
  for (let i = 0; i < series.y.length; i++) {
    if (series.y[i] > 0) {
      x.push(series.x[i]);
      y.push(series.y[i]);
    }
  }
  return { x, y };
}

export function buildChart(opts: ChartOptions): string {
  const plotted = opts.series.map((s) => ({ s, pts: usable(s, opts.logY) }))
    .filter(({ pts }) => pts.y.length > 0);
  if (plotted.length === 0) {
    throw new Error("nothing to plot: every series is empty" +
      (opts.logY ? " (log axis drops values <= 0)" : ""));
  }

  const xs = plotted.flatMap(({ pts }) => pts.x);
  const ys = plotted.flatMap(({ pts }) => pts.y);
  const xe = extent(xs)!;
  const ye = extent(ys)!;

  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = HEIGHT - MARGIN.bottom;
  const y1 = MARGIN.top;
  const xScale = linearScale(xe.min, xe.max, x0, x1);
  const yScale: Scale = opts.logY
    ? logScale(ye.min, ye.max, y0, y1)
    : linearScale(ye.min, ye.max, y0, y1);

  const parts: string[] = [];
  parts.push(`<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`);
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="#ffffff"/>`);
  parts.push(`<text x="${WIDTH / 2}" y="28" text-anchor="middle" font-size="17" ${FONT}>${esc(opts.title)}</text>`);

  // axes, grid, ticks
  for (const v of xScale.ticks()) {
    if (v < xe.min - 1e-9 || v > xe.max + 1e-9) continue;
    const px = fmt(xScale.map(v));
    parts.push(`<line x1="${px}" y1="${y0}" x2="${px}" y2="${y1}" stroke="#e5e5e5" stroke-width="1"/>`);
    parts.push(`<text x="${px}" y="${y0 + 20}" text-anchor="middle" font-size="12" ${FONT}>${esc(formatTick(v))}</text>`);
  }
  for (const v of yScale.ticks()) {
    const py = fmt(yScale.map(v));
    parts.push(`<line x1="${x0}" y1="${py}" x2="${x1}" y2="${py}" stroke="#e5e5e5" stroke-width="1"/>`);
    parts.push(`<text x="${x0 - 8}" y="${Number(py) + 4}" text-anchor="end" font-size="12" ${FONT}>${esc(formatTick(v))}</text>`);
  }
  parts.push(`<line x1="${x0}" y1="${y0}" x2="${x1}" y2="${y0}" stroke="#333333" stroke-width="1.2"/>`);
  parts.push(`<line x1="${x0}" y1="${y0}" x2="${x0}" y2="${y1}" stroke="#333333" stroke-width="1.2"/>`);
  parts.push(`<text x="${(x0 + x1) / 2}" y="${HEIGHT - 14}" text-anchor="middle" font-size="14" ${FONT}>${esc(opts.xLabel)}</text>`);
  parts.push(`<text x="20" y="${(y0 + y1) / 2}" text-anchor="middle" font-size="14" ${FONT} transform="rotate(-90 20 ${(y0 + y1) / 2})">${esc(opts.yLabel)}</text>`);

  // series
  plotted.forEach(({ s, pts }, i) => {
    const color = PALETTE[i % PALETTE.length];
    const width = s.width ?? (plotted.length > 10 ? 1.0 : 1.6);
    const opacity = s.opacity ?? (plotted.length > 10 ? 0.55 : 1.0);
    const coords = pts.x.map((x, j) => `${fmt(xScale.map(x))},${fmt(yScale.map(pts.y[j]))}`);
    parts.push(`<polyline fill="none" stroke="${color}" stroke-width="${width}" stroke-opacity="${opacity}" points="${coords.join(" ")}"/>`);
  });

  // legend
  const maxEntries = opts.maxLegendEntries ?? 12;
  if (plotted.length <= maxEntries) {
    plotted.forEach(({ s }, i) => {
      const color = PALETTE[i % PALETTE.length];
      const ly = y1 + 10 + i * 18;
      parts.push(`<line x1="${x1 - 180}" y1="${ly}" x2="${x1 - 150}" y2="${ly}" stroke="${color}" stroke-width="2.5"/>`);
      parts.push(`<text x="${x1 - 142}" y="${ly + 4}" font-size="12" ${FONT}>${esc(s.label)}</text>`);
    });
  } else {
    parts.push(`<text x="${x1 - 180}" y="${y1 + 14}" font-size="12" ${FONT}>${plotted.length} runs</text>`);
  }

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
