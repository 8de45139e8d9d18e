/** Minimal dependency-free SVG line chart with error bars and a legend. */

import type { Series } from "./csv.js";

export interface FigureOptions {
    title: string;
    xLabel: string;
    yLabel: string;
    width?: number;
    height?: number;
}

const MARGIN = { top: 44, right: 28, bottom: 52, left: 72 };
const PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"];

interface Scale {
    (v: number): number;
    domain: [number, number];
}

function linearScale(domain: [number, number], range: [number, number]): Scale {
    const [d0, d1] = domain;
    const [r0, r1] = range;
    const span = d1 - d0 === 0 ? 1 : d1 - d0;
    const scale = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale;
    scale.domain = domain;
    return scale;
}

/** Tick positions at a 1/2/5 step covering the domain. */
export function niceTicks(min: number, max: number, target = 6): number[] {
    if (min === max) {
        return [min];
    }
    const rawStep = (max - min) / target;
    const power = Math.pow(10, Math.floor(Math.log10(rawStep)));
    let step = power;
    for (const mult of [1, 2, 5, 10]) {
        step = mult * power;
        if ((max - min) / step <= target) break;
    }
    const ticks: number[] = [];
    for (let v = Math.ceil(min / step) * step; v <= max + step * 1e-9; v += step) {
        ticks.push(Math.abs(v) < step * 1e-9 ? 0 : v);
    }
    return ticks;
}

function formatTick(v: number): string {
    return Number(v.toFixed(10)).toString();
}

function escapeXml(text: string): string {
    return text
        .replace(/&/g, "&amp;")
        .replace(/</g, "&lt;")
        .replace(/>/g, "&gt;")
        .replace(/"/g, "&quot;");
}

export function renderFigure(series: Series[], options: FigureOptions): string {
    const width = options.width ?? 680;
    const height = options.height ?? 460;
    const plotW = width - MARGIN.left - MARGIN.right;
    const plotH = height - MARGIN.top - MARGIN.bottom;

    const xs = series.flatMap((s) => s.points.map((p) => p.value));
    const lows = series.flatMap((s) => s.points.map((p) => p.mean - p.ci95));
    const highs = series.flatMap((s) => s.points.map((p) => p.mean + p.ci95));
    const xMin = Math.min(...xs);
    const xMax = Math.max(...xs);
    const yPad = (Math.max(...highs) - Math.min(...lows)) * 0.06 || 1;
    const yMin = Math.min(0, Math.min(...lows) - yPad);
    const yMax = Math.max(...highs) + yPad;

    const x = linearScale([xMin, xMax], [MARGIN.left, MARGIN.left + plotW]);
    const y = linearScale([yMin, yMax], [MARGIN.top + plotH, MARGIN.top]);

    const parts: string[] = [];
    parts.push(
        `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
            `viewBox="0 0 ${width} ${height}" font-family="Helvetica, Arial, sans-serif">`
    );
    parts.push(`<rect width="${width}" height="${height}" fill="white"/>`);
    parts.push(
        `<text x="${width / 2}" y="24" text-anchor="middle" font-size="15" font-weight="bold">` +
            `${escapeXml(options.title)}</text>`
    );

    // gridlines and axis ticks
    for (const tick of niceTicks(yMin, yMax)) {
        const ty = y(tick);
        parts.push(
            `<line x1="${MARGIN.left}" y1="${ty}" x2="${MARGIN.left + plotW}" y2="${ty}" ` +
                `stroke="#dddddd" stroke-width="1"/>`
        );
        parts.push(
            `<text x="${MARGIN.left - 8}" y="${ty + 4}" text-anchor="end" font-size="11">` +
                `${formatTick(tick)}</text>`
        );
    }
    for (const tick of niceTicks(xMin, xMax)) {
        const tx = x(tick);
        parts.push(
            `<line x1="${tx}" y1="${MARGIN.top + plotH}" x2="${tx}" y2="${MARGIN.top + plotH + 5}" ` +
                `stroke="#333333" stroke-width="1"/>`
        );
        parts.push(
            `<text x="${tx}" y="${MARGIN.top + plotH + 20}" text-anchor="middle" font-size="11">` +
                `${formatTick(tick)}</text>`
        );
    }

    // axes
    parts.push(
        `<line x1="${MARGIN.left}" y1="${MARGIN.top}" x2="${MARGIN.left}" ` +
            `y2="${MARGIN.top + plotH}" stroke="#333333" stroke-width="1.5"/>`
    );
    parts.push(
        `<line x1="${MARGIN.left}" y1="${MARGIN.top + plotH}" x2="${MARGIN.left + plotW}" ` +
            `y2="${MARGIN.top + plotH}" stroke="#333333" stroke-width="1.5"/>`
    );
    parts.push(
        `<text x="${MARGIN.left + plotW / 2}" y="${height - 12}" text-anchor="middle" ` +
            `font-size="13">${escapeXml(options.xLabel)}</text>`
    );
    parts.push(
        `<text x="18" y="${MARGIN.top + plotH / 2}" text-anchor="middle" font-size="13" ` +
            `transform="rotate(-90 18 ${MARGIN.top + plotH / 2})">${escapeXml(options.yLabel)}</text>`
    );

    // one polyline + error bars + markers per method
    series.forEach((s, index) => {
        const color = PALETTE[index % PALETTE.length];
        const path = s.points.map((p) => `${x(p.value)},${y(p.mean)}`).join(" ");
        parts.push(
            `<polyline points="${path}" fill="none" stroke="${color}" stroke-width="2"/>`
        );
        for (const p of s.points) {
            const px = x(p.value);
            if (p.ci95 > 0) {
                const yLow = y(p.mean - p.ci95);
                const yHigh = y(p.mean + p.ci95);
                parts.push(
                    `<line x1="${px}" y1="${yLow}" x2="${px}" y2="${yHigh}" ` +
                        `stroke="${color}" stroke-width="1.2"/>`
                );
                for (const cap of [yLow, yHigh]) {
                    parts.push(
                        `<line x1="${px - 4}" y1="${cap}" x2="${px + 4}" y2="${cap}" ` +
                            `stroke="${color}" stroke-width="1.2"/>`
                    );
                }
            }
            parts.push(`<circle cx="${px}" cy="${y(p.mean)}" r="3.2" fill="${color}"/>`);
        }
    });

    // legend, top-left inside the plot area
    const legendX = MARGIN.left + 12;
    let legendY = MARGIN.top + 14;
    series.forEach((s, index) => {
        const color = PALETTE[index % PALETTE.length];
        parts.push(
            `<line x1="${legendX}" y1="${legendY - 4}" x2="${legendX + 22}" y2="${legendY - 4}" ` +
                `stroke="${color}" stroke-width="2"/>`
        );
        parts.push(
            `<text x="${legendX + 28}" y="${legendY}" font-size="12">${escapeXml(s.method)}</text>`
        );
        legendY += 18;
    });

    parts.push("</svg>");
    return parts.join("\n") + "\n";
}
