/** Axis scales and tick generation. Pure functions, pinned behavior. */

export interface Scale {
  map(v: number): number;
  ticks(): number[];
}

export function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  if (d1 === d0) {
    // degenerate domain: pad by one unit either side
    d0 -= 1;
    d1 += 1;
  }
  const k = (r1 - r0) / (d1 - d0);
  const lo = d0;
  const [dmin, dmax] = [d0, d1];
  return {
    map: (v) => r0 + (v - lo) * k,
    ticks: () => niceLinearTicks(dmin, dmax, 6),
  };
}

export function logScale(d0: number, d1: number, r0: number, r1: number): Scale {
  if (d0 <= 0 || d1 <= 0) {
    throw new Error(`log scale needs positive bounds, got [${d0}, ${d1}]`);
  }
  if (d1 === d0) {
    d0 /= 10;
    d1 *= 10;
  }
  const l0 = Math.log10(d0);
  const k = (r1 - r0) / (Math.log10(d1) - l0);
  const [dmin, dmax] = [d0, d1];
  return {
    map: (v) => r0 + (Math.log10(v) - l0) * k,
    ticks: () => decadeTicks(dmin, dmax),
  };
}

export function niceLinearTicks(min: number, max: number, count: number): number[] {
  const span = max - min;
  const rawStep = span / Math.max(count - 1, 1);
  const mag = Math.pow(10, Math.floor(Math.log10(rawStep)));
  const norm = rawStep / mag;
  const step = (norm >= 5 ? 5 : norm >= 2 ? 2 : 1) * mag;
  const first = Math.ceil(min / step) * step;
  const out: number[] = [];
  for (let v = first; v <= max + 1e-9 * step; v += step) {
    out.push(Math.abs(v) < 1e-12 * step ? 0 : v);
  }
  return out;
}

export function decadeTicks(min: number, max: number): number[] {
  const lo = Math.ceil(Math.log10(min) - 1e-9);
  const hi = Math.floor(Math.log10(max) + 1e-9);
  const out: number[] = [];
  // cap the tick count for very wide ranges by striding whole decades
  const stride = Math.max(1, Math.ceil((hi - lo + 1) / 12));
  for (let e = lo; e <= hi; e += stride) {
    out.push(Number(`1e${e}`)); // Math.pow(10, -4) !== 1e-4
  }
  if (out.length === 0) {
    out.push(min, max);
  }
  return out;
}

export function formatTick(v: number): string {
  if (v === 0) return "0";
  const abs = Math.abs(v);
  if (abs >= 1e4 || abs < 1e-3) {
    const e = Math.floor(Math.log10(abs));
    const m = v / Math.pow(10, e);
    const mStr = Math.abs(m - Math.round(m)) < 1e-9 ? String(Math.round(m)) : m.toFixed(1);
    return mStr === "1" ? `1e${e}` : `${mStr}e${e}`;
  }
  return String(Number(v.toPrecision(6)));
}
