#!/usr/bin/env node
/**
 * rislink-plots render <csv> <out.svg> [--dump-json]
 *
 * Renders one rate-sweep CSV from the simulation harness into an SVG figure
 * (one series per method, 95% CI error bars).  --dump-json echoes the plotted
 * (value, mean, ci95) triples to stdout instead of describing the image, so
 * tests can verify the figure data without image diffing.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { pathToFileURL } from "node:url";
import { CsvFormatError, parseSweepCsv, type SweepTable } from "./csv.js";
import { renderFigure } from "./svg.js";

const X_LABELS: Record<string, string> = {
    subcarriers: "Number of subcarriers",
    elements: "Number of RIS elements",
    snr: "SNR [dB]",
};

export function xLabelFor(sweepVar: string): string {
    return X_LABELS[sweepVar] ?? sweepVar;
}

export function dumpJson(table: SweepTable): string {
    return JSON.stringify(
        {
            sweep_var: table.sweepVar,
            series: table.series.map((s) => ({
                method: s.method,
                points: s.points.map((p) => ({ value: p.value, mean: p.mean, ci95: p.ci95 })),
            })),
        },
        null,
        2
    );
}

export function renderFile(csvPath: string, outPath: string, dump: boolean): string | null {
    const table = parseSweepCsv(readFileSync(csvPath, "utf-8"));
    const xLabel = xLabelFor(table.sweepVar);
    const svg = renderFigure(table.series, {
        title: `Achievable data rate vs ${xLabel.toLowerCase()}`,
        xLabel,
        yLabel: "Achievable data rate [Mbps]",
    });
    writeFileSync(outPath, svg, "utf-8");
    return dump ? dumpJson(table) : null;
}

export function main(argv: string[]): number {
    const args = argv.filter((a) => a !== "--dump-json");
    const dump = args.length !== argv.length;
    if (args.length !== 3 || args[0] !== "render") {
        process.stderr.write("usage: rislink-plots render <csv> <out.svg> [--dump-json]\n");
        return 1;
    }
    const [, csvPath, outPath] = args;
    try {
        const echoed = renderFile(csvPath, outPath, dump);
        if (echoed !== null) {
            process.stdout.write(echoed + "\n");
        } else {
            process.stderr.write(`wrote ${outPath}\n`);
        }
        return 0;
    } catch (err) {
        if (err instanceof CsvFormatError) {
            process.stderr.write(`malformed CSV in ${csvPath}: ${err.message}\n`);
        } else {
            process.stderr.write(`error: ${(err as Error).message}\n`);
        }
        return 1;
    }
}

if (process.argv[1] && import.meta.url === pathToFileURL(process.argv[1]).href) {
    process.exit(main(process.argv.slice(2)));
}
