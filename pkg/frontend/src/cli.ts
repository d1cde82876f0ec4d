#!/usr/bin/env node
/**
 * CSV -> SVG figure tool for sweep results.
 *
 * Series are selected as detector:lf:source[:label], e.g.
 *
 *   equalab-figures --csv sweep.csv \
 *     --series mlse:10:sim --series amldfbe:10:sim --series amldfbe:10:analytic \
 *     --out fig.svg
 *
 * A JSON spec file (--spec) carries the same information as the flags;
 * flags extend/override the file. Rendering is deterministic: identical
 * inputs produce byte-identical SVG.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { parseArgs } from "node:util";

import { parseSweepCsv, SchemaError, SweepRecord } from "./csv.js";
import { FigureSpec, MissingSeries, SeriesSelector, SpecError } from "./figure.js";
import { renderFigure } from "./svg.js";

export function parseSelector(text: string): SeriesSelector {
  const parts = text.split(":");
  if (parts.length < 3 || parts.length > 4) {
    throw new SpecError(
      `bad series "${text}", expected detector:lf:source[:label]`,
    );
  }
  const lf = Number(parts[1]);
  if (!Number.isInteger(lf) || lf < 1) {
    throw new SpecError(`bad series "${text}": lf must be a positive integer`);
  }
  const source = parts[2];
  if (source !== "sim" && source !== "analytic") {
    throw new SpecError(`bad series "${text}": source must be sim or analytic`);
  }
  const sel: SeriesSelector = { detector: parts[0] as string, lf, source };
  if (parts[3] !== undefined) sel.label = parts[3];
  return sel;
}

function parseRange(text: string, what: string): [number, number] {
  const parts = text.split(":").map(Number);
  if (parts.length !== 2 || parts.some((v) => !Number.isFinite(v))) {
    throw new SpecError(`bad ${what} "${text}", expected min:max`);
  }
  return [parts[0] as number, parts[1] as number];
}

export function buildSpec(argv: string[]): FigureSpec {
  const { values } = parseArgs({
    args: argv,
    options: {
      csv: { type: "string", multiple: true },
      series: { type: "string", multiple: true },
      out: { type: "string" },
      metric: { type: "string" },
      title: { type: "string" },
      "x-label": { type: "string" },
      "y-label": { type: "string" },
      "x-range": { type: "string" },
      "y-range": { type: "string" },
      width: { type: "string" },
      height: { type: "string" },
      spec: { type: "string" },
    },
  });

  let spec: FigureSpec = { inputs: [], series: [], output: "figure.svg" };
  if (values.spec) {
    const raw = JSON.parse(readFileSync(values.spec, "utf8"));
    spec = { ...spec, ...raw };
  }
  if (values.csv) spec.inputs = [...spec.inputs, ...values.csv];
  if (values.series) {
    spec.series = [...spec.series, ...values.series.map(parseSelector)];
  }
  if (values.metric) {
    if (values.metric !== "ber" && values.metric !== "ser") {
      throw new SpecError(`bad metric "${values.metric}"`);
    }
    const metric = values.metric;
    spec.series = spec.series.map((s) => ({ metric, ...s }));
  }
  if (values.out) spec.output = values.out;
  if (values.title) spec.title = values.title;
  if (values["x-label"]) spec.xLabel = values["x-label"];
  if (values["y-label"]) spec.yLabel = values["y-label"];
  if (values["x-range"]) spec.xRange = parseRange(values["x-range"], "x range");
  if (values["y-range"]) spec.yRange = parseRange(values["y-range"], "y range");
  if (values.width) spec.width = Number(values.width);
  if (values.height) spec.height = Number(values.height);

  if (spec.inputs.length === 0) throw new SpecError("no input CSV given (--csv)");
  if (spec.series.length === 0) throw new SpecError("no series selected (--series)");
  return spec;
}

export function main(argv: string[]): number {
  let spec: FigureSpec;
  try {
    spec = buildSpec(argv);
  } catch (err) {
    process.stderr.write(`equalab-figures: ${(err as Error).message}\n`);
    return 2;
  }
  try {
    const records: SweepRecord[] = spec.inputs.flatMap((path) =>
      parseSweepCsv(readFileSync(path, "utf8"), path),
    );
    const svg = renderFigure(records, spec);
    writeFileSync(spec.output, svg);
    process.stdout.write(`wrote ${spec.output}\n`);
    return 0;
  } catch (err) {
    if (
      err instanceof MissingSeries ||
      err instanceof SchemaError ||
      err instanceof SpecError
    ) {
      process.stderr.write(`equalab-figures: ${err.message}\n`);
      return 2;
    }
    throw err;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
