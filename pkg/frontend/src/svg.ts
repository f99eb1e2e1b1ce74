/**
 * Hand-rolled SVG plotting: linear/log scales, axes with ticks, polyline
 * series and a legend. Output is deterministic for identical input.
 */

export interface Series {
  x: number[];
  y: number[];
  color: string;
  label: string;
  dash?: string;
}

export interface PanelSpec {
  series: Series[];
  xLabel: string;
  yLabel: string;
  xLog?: boolean;
  yLog?: boolean;
  title?: string;
}

const WIDTH = 640;
const PANEL_HEIGHT = 400;
const MARGIN = { top: 36, right: 24, bottom: 56, left: 84 };

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function fmt(v: number): string {
  return Number(v.toPrecision(6)).toString();
}

interface Scale {
  (v: number): number;
  ticks: number[];
}

function makeScale(
  values: number[],
  log: boolean,
  outLo: number,
  outHi: number
): Scale {
  let lo = Math.min(...values);
  let hi = Math.max(...values);
  if (log) {
    const positive = values.filter((v) => v > 0);
    lo = Math.min(...positive);
    hi = Math.max(...positive);
  }
  if (lo === hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  if (!log) {
    const pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
  const tlo = log ? Math.log10(lo) : lo;
  const thi = log ? Math.log10(hi) : hi;
  const scale = ((v: number) => {
    const t = log ? Math.log10(v) : v;
    return outLo + ((t - tlo) / (thi - tlo)) * (outHi - outLo);
  }) as Scale;
  scale.ticks = log ? logTicks(lo, hi) : linearTicks(lo, hi);
  return scale;
}

function linearTicks(lo: number, hi: number): number[] {
  const span = hi - lo;
  const step = Math.pow(10, Math.floor(Math.log10(span / 4)));
  const mult = span / step > 8 ? 2 : 1;
  const s = step * mult;
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / s) * s; v <= hi + 1e-12 * span; v += s) {
    ticks.push(Math.abs(v) < 1e-12 * span ? 0 : v);
  }
  return ticks;
}

function logTicks(lo: number, hi: number): number[] {
  const ticks: number[] = [];
  for (let e = Math.ceil(Math.log10(lo) - 1e-9); Math.pow(10, e) <= hi * (1 + 1e-9); e++) {
    ticks.push(Math.pow(10, e));
  }
  if (ticks.length < 2) {
    return [lo, hi];
  }
  return ticks;
}

function renderPanel(spec: PanelSpec, yOffset: number): string {
  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = yOffset + PANEL_HEIGHT - MARGIN.bottom;
  const y1 = yOffset + MARGIN.top;

  const xs = spec.series.flatMap((s) => s.x);
  const ys = spec.series.flatMap((s) => s.y);
  const sx = makeScale(xs, !!spec.xLog, x0, x1);
  const sy = makeScale(ys, !!spec.yLog, y0, y1);

  const parts: string[] = [];
  parts.push(
    `<rect x="${x0}" y="${y1}" width="${x1 - x0}" height="${y0 - y1}" fill="white" stroke="black"/>`
  );
  for (const t of sx.ticks) {
    const px = sx(t);
    if (px < x0 - 0.5 || px > x1 + 0.5) continue;
    parts.push(`<line x1="${fmt(px)}" y1="${y0}" x2="${fmt(px)}" y2="${y0 + 5}" stroke="black"/>`);
    const label = spec.xLog ? `1e${Math.round(Math.log10(t))}` : fmt(t);
    parts.push(
      `<text x="${fmt(px)}" y="${y0 + 20}" text-anchor="middle" font-size="12">${label}</text>`
    );
  }
  for (const t of sy.ticks) {
    const py = sy(t);
    if (py > y0 + 0.5 || py < y1 - 0.5) continue;
    parts.push(`<line x1="${x0 - 5}" y1="${fmt(py)}" x2="${x0}" y2="${fmt(py)}" stroke="black"/>`);
    const label = spec.yLog ? `1e${Math.round(Math.log10(t))}` : fmt(t);
    parts.push(
      `<text x="${x0 - 8}" y="${fmt(py + 4)}" text-anchor="end" font-size="12">${label}</text>`
    );
  }
  parts.push(
    `<text x="${(x0 + x1) / 2}" y="${y0 + 42}" text-anchor="middle" font-size="14">${esc(spec.xLabel)}</text>`
  );
  parts.push(
    `<text x="${x0 - 60}" y="${(y0 + y1) / 2}" text-anchor="middle" font-size="14" ` +
      `transform="rotate(-90 ${x0 - 60} ${(y0 + y1) / 2})">${esc(spec.yLabel)}</text>`
  );
  if (spec.title) {
    parts.push(
      `<text x="${(x0 + x1) / 2}" y="${y1 - 10}" text-anchor="middle" font-size="15">${esc(spec.title)}</text>`
    );
  }

  spec.series.forEach((s, i) => {
    const pts = s.x
      .map((vx, k) => ({ vx, vy: s.y[k] }))
      .filter(({ vx, vy }) => (!spec.xLog || vx > 0) && (!spec.yLog || vy > 0))
      .map(({ vx, vy }) => `${fmt(sx(vx))},${fmt(sy(vy))}`)
      .join(" ");
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    parts.push(
      `<polyline points="${pts}" fill="none" stroke="${s.color}" stroke-width="1.5"${dash}/>`
    );
    const lx = x0 + 12;
    const ly = y1 + 18 + 18 * i;
    parts.push(
      `<line x1="${lx}" y1="${ly - 4}" x2="${lx + 26}" y2="${ly - 4}" stroke="${s.color}" stroke-width="1.5"${dash}/>`
    );
    parts.push(`<text x="${lx + 32}" y="${ly}" font-size="12">${esc(s.label)}</text>`);
  });
  return parts.join("\n");
}

export function renderFigure(panels: PanelSpec[]): string {
  const height = PANEL_HEIGHT * panels.length;
  const body = panels.map((p, i) => renderPanel(p, i * PANEL_HEIGHT)).join("\n");
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${height}" ` +
    `viewBox="0 0 ${WIDTH} ${height}" font-family="sans-serif">\n` +
    `<rect width="${WIDTH}" height="${height}" fill="white"/>\n${body}\n</svg>\n`
  );
}
