/**
 * Dependency-free SVG chart builders. Both return complete <svg> strings:
 * the loop chart draws m_mean against h with a +-stderr band, the
 * convergence chart draws the exchange-bias mean with error bars against
 * the finished-run count on a log-x axis.
 */

import { LoopPoint } from "./client.js";
import { ConvergencePoint } from "./dashboard.js";

const WIDTH = 560;
const HEIGHT = 340;
const MARGIN = { top: 18, right: 16, bottom: 36, left: 52 };

interface Scale {
  (value: number): number;
}

function linearScale(d0: number, d1: number, r0: number, r1: number): Scale {
  const span = d1 - d0 || 1;
  return (value) => r0 + ((value - d0) / span) * (r1 - r0);
}

function niceTicks(lo: number, hi: number, count = 5): number[] {
  const span = hi - lo || 1;
  const step = Math.pow(10, Math.floor(Math.log10(span / count)));
  const err = span / count / step;
  const factor = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
  const unit = step * factor;
  const ticks: number[] = [];
  for (let v = Math.ceil(lo / unit) * unit; v <= hi + unit / 1e6; v += unit) {
    ticks.push(Math.abs(v) < unit / 1e6 ? 0 : v);
  }
  return ticks;
}

function fmt(value: number): string {
  return Math.abs(value) >= 1000 || (value !== 0 && Math.abs(value) < 0.01)
    ? value.toExponential(1)
    : String(Math.round(value * 1000) / 1000);
}

function frame(
  xTicks: Array<[number, string]>,
  yTicks: Array<[number, string]>,
  body: string,
  xLabel: string,
  yLabel: string,
): string {
  const x0 = MARGIN.left;
  const x1 = WIDTH - MARGIN.right;
  const y0 = HEIGHT - MARGIN.bottom;
  const y1 = MARGIN.top;
  const grid = [
    ...xTicks.map(
      ([x, label]) =>
        `<line x1="${x}" y1="${y0}" x2="${x}" y2="${y1}" class="grid"/>` +
        `<text x="${x}" y="${y0 + 16}" class="tick" text-anchor="middle">${label}</text>`,
    ),
    ...yTicks.map(
      ([y, label]) =>
        `<line x1="${x0}" y1="${y}" x2="${x1}" y2="${y}" class="grid"/>` +
        `<text x="${x0 - 6}" y="${y + 4}" class="tick" text-anchor="end">${label}</text>`,
    ),
  ].join("");
  return (
    `<svg viewBox="0 0 ${WIDTH} ${HEIGHT}" xmlns="http://www.w3.org/2000/svg">` +
    `<style>.grid{stroke:#2b3a55;stroke-width:1}.tick{fill:#8aa0c0;font:11px sans-serif}` +
    `.axis{fill:#b9c6dc;font:12px sans-serif}.line{fill:none;stroke:#38bdf8;stroke-width:2}` +
    `.band{fill:#38bdf8;opacity:0.18}.pt{fill:#f59e0b}.err{stroke:#f59e0b;stroke-width:1.5}</style>` +
    grid +
    `<rect x="${x0}" y="${y1}" width="${x1 - x0}" height="${y0 - y1}" fill="none" stroke="#3b4c6e"/>` +
    body +
    `<text x="${(x0 + x1) / 2}" y="${HEIGHT - 6}" class="axis" text-anchor="middle">${xLabel}</text>` +
    `<text x="14" y="${(y0 + y1) / 2}" class="axis" text-anchor="middle" ` +
    `transform="rotate(-90 14 ${(y0 + y1) / 2})">${yLabel}</text>` +
    `</svg>`
  );
}

export function loopChartSvg(loop: LoopPoint[]): string {
  if (loop.length === 0) {
    return `<svg viewBox="0 0 ${WIDTH} ${HEIGHT}" xmlns="http://www.w3.org/2000/svg">` +
      `<text x="${WIDTH / 2}" y="${HEIGHT / 2}" fill="#8aa0c0" text-anchor="middle" ` +
      `font-family="sans-serif">no finished runs yet</text></svg>`;
  }
  const hs = loop.map((p) => p.h);
  const lows = loop.map((p) => p.mMean - p.mStderr);
  const highs = loop.map((p) => p.mMean + p.mStderr);
  const x = linearScale(Math.min(...hs), Math.max(...hs), MARGIN.left, WIDTH - MARGIN.right);
  const yLo = Math.min(-1, ...lows);
  const yHi = Math.max(1, ...highs);
  const y = linearScale(yLo, yHi, HEIGHT - MARGIN.bottom, MARGIN.top);

  const band =
    loop.map((p) => `${x(p.h)},${y(p.mMean + p.mStderr)}`).join(" ") +
    " " +
    loop.slice().reverse().map((p) => `${x(p.h)},${y(p.mMean - p.mStderr)}`).join(" ");
  const line = loop.map((p) => `${x(p.h)},${y(p.mMean)}`).join(" ");
  const body =
    `<polygon points="${band}" class="band"/>` +
    `<polyline points="${line}" class="line"/>`;
  const xTicks: Array<[number, string]> = niceTicks(Math.min(...hs), Math.max(...hs))
    .map((v) => [x(v), fmt(v)]);
  const yTicks: Array<[number, string]> = niceTicks(yLo, yHi).map((v) => [y(v), fmt(v)]);
  return frame(xTicks, yTicks, body, "external field h", "magnetization m");
}

export function convergenceChartSvg(points: ConvergencePoint[]): string {
  if (points.length === 0) {
    return `<svg viewBox="0 0 ${WIDTH} ${HEIGHT}" xmlns="http://www.w3.org/2000/svg">` +
      `<text x="${WIDTH / 2}" y="${HEIGHT / 2}" fill="#8aa0c0" text-anchor="middle" ` +
      `font-family="sans-serif">waiting for the first finished run</text></svg>`;
  }
  const logs = points.map((p) => Math.log2(Math.max(1, p.finished)));
  const x = linearScale(0, Math.max(1, ...logs), MARGIN.left, WIDTH - MARGIN.right);
  const lows = points.map((p) => p.ebMean - p.ebStderr);
  const highs = points.map((p) => p.ebMean + p.ebStderr);
  const pad = 0.1 * (Math.max(...highs) - Math.min(...lows) || 1);
  const y = linearScale(
    Math.min(...lows) - pad, Math.max(...highs) + pad,
    HEIGHT - MARGIN.bottom, MARGIN.top,
  );

  const line = points
    .map((p) => `${x(Math.log2(Math.max(1, p.finished)))},${y(p.ebMean)}`)
    .join(" ");
  const marks = points
    .map((p) => {
      const px = x(Math.log2(Math.max(1, p.finished)));
      return (
        `<line x1="${px}" y1="${y(p.ebMean - p.ebStderr)}" x2="${px}" ` +
        `y2="${y(p.ebMean + p.ebStderr)}" class="err"/>` +
        `<circle cx="${px}" cy="${y(p.ebMean)}" r="3.5" class="pt"/>`
      );
    })
    .join("");
  const body = `<polyline points="${line}" class="line"/>` + marks;

  const maxFinished = Math.max(...points.map((p) => p.finished));
  const xTicks: Array<[number, string]> = [];
  for (let n = 1; n <= maxFinished; n *= 2) {
    xTicks.push([x(Math.log2(n)), String(n)]);
  }
  const yTicks: Array<[number, string]> = niceTicks(
    Math.min(...lows) - pad, Math.max(...highs) + pad,
  ).map((v) => [y(v), fmt(v)]);
  return frame(xTicks, yTicks, body, "finished runs (log scale)", "exchange bias");
}
