/**
 * Figure specification and series extraction.
 *
 * A figure is a single semilog panel: linear SNR (dB) on x, log-scaled
 * BER or SER on y. Series are selected out of one or more sweep CSVs by
 * (detector, lf, source); a selector that matches nothing is an error
 * (silently empty curves hide configuration typos).
 */

import { SweepRecord, Source } from "./csv.js";

export interface SeriesSelector {
  detector: string;
  lf: number;
  source: Source;
  /** Legend text; defaults to "detector (Lf=k)", analytic marked as such. */
  label?: string;
  /** Which column to plot; defaults to "ber". */
  metric?: "ber" | "ser";
}

export interface FigureSpec {
  /** Input CSV paths (resolved by the caller; render() takes records). */
  inputs: string[];
  series: SeriesSelector[];
  output: string;
  title?: string;
  xLabel?: string;
  yLabel?: string;
  /** [min, max] in dB; defaults to the data range. */
  xRange?: [number, number];
  /** [min, max], positive; defaults to the surrounding decades of the data. */
  yRange?: [number, number];
  width?: number;
  height?: number;
}

export class MissingSeries extends Error {
  constructor(sel: SeriesSelector) {
    super(
      `no rows match detector=${sel.detector} lf=${sel.lf} source=${sel.source}`,
    );
  }
}

export class SpecError extends Error {}

export interface SeriesData {
  label: string;
  source: Source;
  /** (snr_db, value) pairs sorted by SNR; zero values kept (dropped at draw). */
  points: Array<[number, number]>;
}

export function defaultLabel(sel: SeriesSelector): string {
  const base = `${sel.detector} (Lf=${sel.lf})`;
  return sel.source === "analytic" ? `${base}, analytic` : base;
}

export function extractSeries(
  records: SweepRecord[],
  spec: FigureSpec,
): SeriesData[] {
  if (spec.series.length === 0) {
    throw new SpecError("figure spec selects no series");
  }
  return spec.series.map((sel) => {
    const rows = records.filter(
      (r) =>
        r.detector === sel.detector &&
        r.lf === sel.lf &&
        r.source === sel.source,
    );
    if (rows.length === 0) {
      throw new MissingSeries(sel);
    }
    const metric = sel.metric ?? "ber";
    const points = rows
      .map((r): [number, number] => [r.snrDb, r[metric]])
      .sort((a, b) => a[0] - b[0]);
    return { label: sel.label ?? defaultLabel(sel), source: sel.source, points };
  });
}
