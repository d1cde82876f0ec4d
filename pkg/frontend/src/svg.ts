/**
 * Deterministic SVG renderer for semilog error-rate figures.
 *
 * Determinism contract: the output bytes are a pure function of the records
 * and the spec. No timestamps, no locale formatting, no object-iteration
 * ambiguity; every coordinate is fixed to two decimals.
 */

import { SweepRecord } from "./csv.js";
import { FigureSpec, SeriesData, SpecError, extractSeries } from "./figure.js";

const PALETTE = [
  "#1f5fa8", // blue
  "#c23b22", // red
  "#2e8b57", // green
  "#8a2be2", // violet
  "#b8860b", // dark gold
  "#007b8a", // teal
  "#d2477e", // magenta
  "#555555", // grey
];

const MARGIN = { top: 42, right: 24, bottom: 54, left: 78 };

function fmt(v: number): string {
  const s = v.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
}

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Tick step from the 1-2-5 ladder giving at most `maxTicks` intervals. */
function linearStep(span: number, maxTicks: number): number {
  const ladder = [1, 2, 5];
  for (let mag = -3; mag <= 6; mag++) {
    for (const base of ladder) {
      const step = base * 10 ** mag;
      if (span / step <= maxTicks) return step;
    }
  }
  return span;
}

function fmtTick(v: number): string {
  return Number.isInteger(v) ? String(v) : String(v);
}

function fmtDecade(exp: number): string {
  return exp === 0 ? "1" : `1e${exp}`;
}

export function renderFigure(records: SweepRecord[], spec: FigureSpec): string {
  const series = extractSeries(records, spec);
  const width = spec.width ?? 640;
  const height = spec.height ?? 480;
  const plotW = width - MARGIN.left - MARGIN.right;
  const plotH = height - MARGIN.top - MARGIN.bottom;
  if (plotW <= 0 || plotH <= 0) {
    throw new SpecError("figure dimensions leave no plot area");
  }

  const xs = series.flatMap((s) => s.points.map((p) => p[0]));
  const positives = series.flatMap((s) =>
    s.points.map((p) => p[1]).filter((v) => v > 0),
  );
  if (positives.length === 0) {
    throw new SpecError("no positive values to place on the log axis");
  }
  const [x0, x1] = spec.xRange ?? [Math.min(...xs), Math.max(...xs)];
  if (!(x1 > x0)) {
    throw new SpecError(`bad x range [${x0}, ${x1}]`);
  }
  let [y0, y1] = spec.yRange ?? [
    10 ** Math.floor(Math.log10(Math.min(...positives))),
    10 ** Math.ceil(Math.log10(Math.max(...positives))),
  ];
  if (!(y0 > 0 && y1 > y0)) {
    throw new SpecError(`bad y range [${y0}, ${y1}] (log axis needs 0 < min < max)`);
  }
  if (y0 === y1) y1 = 10 * y0;

  const lx0 = Math.log10(y0);
  const lx1 = Math.log10(y1);
  const px = (x: number) => MARGIN.left + ((x - x0) / (x1 - x0)) * plotW;
  const py = (v: number) =>
    MARGIN.top + ((lx1 - Math.log10(v)) / (lx1 - lx0)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" ` +
      `height="${height}" viewBox="0 0 ${width} ${height}" ` +
      `font-family="Helvetica, Arial, sans-serif">`,
  );
  parts.push(`<rect width="${width}" height="${height}" fill="#ffffff"/>`);
  parts.push(
    `<clipPath id="plot"><rect x="${fmt(MARGIN.left)}" y="${fmt(MARGIN.top)}" ` +
      `width="${fmt(plotW)}" height="${fmt(plotH)}"/></clipPath>`,
  );

  // gridlines and ticks
  const grid: string[] = [];
  const labels: string[] = [];
  const xstep = linearStep(x1 - x0, 10);
  for (let t = Math.ceil(x0 / xstep) * xstep; t <= x1 + 1e-9; t += xstep) {
    const gx = fmt(px(t));
    grid.push(
      `<line x1="${gx}" y1="${fmt(MARGIN.top)}" x2="${gx}" ` +
        `y2="${fmt(MARGIN.top + plotH)}" stroke="#dddddd" stroke-width="1"/>`,
    );
    labels.push(
      `<text x="${gx}" y="${fmt(MARGIN.top + plotH + 18)}" font-size="12" ` +
        `text-anchor="middle" fill="#333333">${fmtTick(t)}</text>`,
    );
  }
  for (let e = Math.ceil(lx0); e <= Math.floor(lx1) + 1e-9; e++) {
    const gy = fmt(py(10 ** e));
    grid.push(
      `<line x1="${fmt(MARGIN.left)}" y1="${gy}" x2="${fmt(MARGIN.left + plotW)}" ` +
        `y2="${gy}" stroke="#dddddd" stroke-width="1"/>`,
    );
    labels.push(
      `<text x="${fmt(MARGIN.left - 8)}" y="${fmt(Number(gy) + 4)}" ` +
        `font-size="12" text-anchor="end" fill="#333333">${fmtDecade(e)}</text>`,
    );
    // minor log gridlines 2..9 within the decade below e
    for (let m = 2; m <= 9; m++) {
      const v = m * 10 ** (e - 1);
      if (v <= y0 || v >= y1) continue;
      const my = fmt(py(v));
      grid.push(
        `<line x1="${fmt(MARGIN.left)}" y1="${my}" ` +
          `x2="${fmt(MARGIN.left + plotW)}" y2="${my}" stroke="#f2f2f2" ` +
          `stroke-width="1"/>`,
      );
    }
  }
  parts.push(...grid, ...labels);

  // frame and axis titles
  parts.push(
    `<rect x="${fmt(MARGIN.left)}" y="${fmt(MARGIN.top)}" width="${fmt(plotW)}" ` +
      `height="${fmt(plotH)}" fill="none" stroke="#333333" stroke-width="1"/>`,
  );
  parts.push(
    `<text x="${fmt(MARGIN.left + plotW / 2)}" y="${fmt(height - 14)}" ` +
      `font-size="14" text-anchor="middle" fill="#111111">` +
      `${esc(spec.xLabel ?? "SNR (dB)")}</text>`,
  );
  parts.push(
    `<text x="18" y="${fmt(MARGIN.top + plotH / 2)}" font-size="14" ` +
      `text-anchor="middle" fill="#111111" transform="rotate(-90 18 ` +
      `${fmt(MARGIN.top + plotH / 2)})">${esc(spec.yLabel ?? "BER")}</text>`,
  );
  if (spec.title) {
    parts.push(
      `<text x="${fmt(MARGIN.left + plotW / 2)}" y="24" font-size="15" ` +
        `text-anchor="middle" fill="#111111">${esc(spec.title)}</text>`,
    );
  }

  // series: simulated solid with markers, analytic dashed
  series.forEach((s: SeriesData, i: number) => {
    const color = PALETTE[i % PALETTE.length];
    const pts = s.points.filter(([, v]) => v > 0);
    const d = pts
      .map(([x, v], j) => `${j === 0 ? "M" : "L"}${fmt(px(x))} ${fmt(py(v))}`)
      .join(" ");
    const dash = s.source === "analytic" ? ` stroke-dasharray="7 4"` : "";
    parts.push(
      `<g clip-path="url(#plot)"><path d="${d}" fill="none" ` +
        `stroke="${color}" stroke-width="1.8"${dash}/>` +
        (s.source === "sim"
          ? pts
              .map(
                ([x, v]) =>
                  `<circle cx="${fmt(px(x))}" cy="${fmt(py(v))}" r="3" ` +
                  `fill="${color}"/>`,
              )
              .join("")
          : "") +
        `</g>`,
    );
  });

  // legend, top-right inside the plot
  const legendW = 8 + 28 + 6 + 8 * Math.max(...series.map((s) => s.label.length)) * 0.95;
  const lx = MARGIN.left + plotW - legendW - 10;
  const ly = MARGIN.top + 10;
  parts.push(
    `<rect x="${fmt(lx)}" y="${fmt(ly)}" width="${fmt(legendW)}" ` +
      `height="${fmt(series.length * 18 + 10)}" fill="#ffffff" ` +
      `fill-opacity="0.9" stroke="#999999" stroke-width="0.8"/>`,
  );
  series.forEach((s, i) => {
    const color = PALETTE[i % PALETTE.length];
    const cy = ly + 14 + i * 18;
    const dash = s.source === "analytic" ? ` stroke-dasharray="7 4"` : "";
    parts.push(
      `<line x1="${fmt(lx + 8)}" y1="${fmt(cy - 4)}" x2="${fmt(lx + 36)}" ` +
        `y2="${fmt(cy - 4)}" stroke="${color}" stroke-width="1.8"${dash}/>`,
    );
    parts.push(
      `<text x="${fmt(lx + 42)}" y="${fmt(cy)}" font-size="12" ` +
        `fill="#111111">${esc(s.label)}</text>`,
    );
  });

  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
