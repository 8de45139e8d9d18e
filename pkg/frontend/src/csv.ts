/** Parsing and validation of sweep CSV files produced by the rislink harness. */

export interface SweepRow {
    sweepVar: string;
    value: number;
    method: string;
    rateMean: number;
    rateCi95: number;
    trials: number;
    masterSeed: number;
}

export interface Series {
    method: string;
    points: { value: number; mean: number; ci95: number }[];
}

export interface SweepTable {
    sweepVar: string;
    rows: SweepRow[];
    series: Series[];
}

export const EXPECTED_HEADER =
    "sweep_var,value,method,rate_mbps_mean,rate_mbps_ci95,trials,master_seed";

export class CsvFormatError extends Error {}

function parseNumber(field: string, name: string, lineNo: number, line: string): number {
    const value = Number(field);
    if (field.trim() === "" || Number.isNaN(value)) {
        throw new CsvFormatError(
            `line ${lineNo}: field '${name}' is not a number in row: ${line}`
        );
    }
    return value;
}

export function parseSweepCsv(text: string): SweepTable {
    const lines = text.split(/\r?\n/).filter((line) => line.trim() !== "");
    if (lines.length === 0 || lines[0] !== EXPECTED_HEADER) {
        throw new CsvFormatError(
            `line 1: expected header '${EXPECTED_HEADER}', got '${lines[0] ?? ""}'`
        );
    }
    const rows: SweepRow[] = [];
    for (let i = 1; i < lines.length; i++) {
        const line = lines[i];
        const lineNo = i + 1;
        const fields = line.split(",");
        if (fields.length !== 7) {
            throw new CsvFormatError(
                `line ${lineNo}: expected 7 fields, got ${fields.length} in row: ${line}`
            );
        }
        rows.push({
            sweepVar: fields[0],
            value: parseNumber(fields[1], "value", lineNo, line),
            method: fields[2],
            rateMean: parseNumber(fields[3], "rate_mbps_mean", lineNo, line),
            rateCi95: parseNumber(fields[4], "rate_mbps_ci95", lineNo, line),
            trials: parseNumber(fields[5], "trials", lineNo, line),
            masterSeed: parseNumber(fields[6], "master_seed", lineNo, line),
        });
    }
    if (rows.length === 0) {
        throw new CsvFormatError("line 2: no data rows after the header");
    }
    const sweepVar = rows[0].sweepVar;
    const offending = rows.findIndex((row) => row.sweepVar !== sweepVar);
    if (offending !== -1) {
        throw new CsvFormatError(
            `line ${offending + 2}: sweep_var '${rows[offending].sweepVar}' differs from '${sweepVar}'`
        );
    }
    return { sweepVar, rows, series: groupSeries(rows) };
}

/** One series per method, points in ascending sweep-value order. */
export function groupSeries(rows: SweepRow[]): Series[] {
    const byMethod = new Map<string, Series>();
    for (const row of rows) {
        let series = byMethod.get(row.method);
        if (!series) {
            series = { method: row.method, points: [] };
            byMethod.set(row.method, series);
        }
        series.points.push({ value: row.value, mean: row.rateMean, ci95: row.rateCi95 });
    }
    const grouped = [...byMethod.values()];
    for (const series of grouped) {
        series.points.sort((a, b) => a.value - b.value);
    }
    grouped.sort((a, b) => (a.method < b.method ? -1 : a.method > b.method ? 1 : 0));
    return grouped;
}
