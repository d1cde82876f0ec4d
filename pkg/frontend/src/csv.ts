/**
 * Reader for the sweep-harness CSV schema.
 *
 * The harness writes plain comma-separated values without quoting (detector
 * ids and numbers only), so a strict split-based parser is exact. The header
 * must match the schema verbatim; anything else is rejected up front.
 */

export const CSV_HEADER =
  "detector,lf,snr_db,frames,bits,bit_errors,symbol_errors,ber,ser," +
  "wall_seconds,source";

export type Source = "sim" | "analytic";

export interface SweepRecord {
  detector: string;
  lf: number;
  snrDb: number;
  frames: number;
  bits: number;
  bitErrors: number;
  symbolErrors: number;
  ber: number;
  ser: number;
  wallSeconds: number;
  source: Source;
}

export class SchemaError extends Error {}

export function parseSweepCsv(text: string, origin = "<csv>"): SweepRecord[] {
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0 || lines[0] !== CSV_HEADER) {
    throw new SchemaError(
      `${origin}: header does not match the sweep schema "${CSV_HEADER}"`,
    );
  }
  const out: SweepRecord[] = [];
  for (let i = 1; i < lines.length; i++) {
    const parts = (lines[i] as string).split(",");
    if (parts.length !== 11) {
      throw new SchemaError(`${origin}:${i + 1}: expected 11 fields, got ${parts.length}`);
    }
    const num = (j: number, what: string): number => {
      const v = Number(parts[j]);
      if (!Number.isFinite(v)) {
        throw new SchemaError(`${origin}:${i + 1}: bad ${what} "${parts[j]}"`);
      }
      return v;
    };
    const source = parts[10] as string;
    if (source !== "sim" && source !== "analytic") {
      throw new SchemaError(`${origin}:${i + 1}: bad source "${source}"`);
    }
    out.push({
      detector: parts[0] as string,
      lf: num(1, "lf"),
      snrDb: num(2, "snr_db"),
      frames: num(3, "frames"),
      bits: num(4, "bits"),
      bitErrors: num(5, "bit_errors"),
      symbolErrors: num(6, "symbol_errors"),
      ber: num(7, "ber"),
      ser: num(8, "ser"),
      wallSeconds: num(9, "wall_seconds"),
      source,
    });
  }
  return out;
}
