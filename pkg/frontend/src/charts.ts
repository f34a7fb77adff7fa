/** Hand-rolled SVG charts rendered purely from StateView payloads.
 *
 * Bar chart for step counts, line+dots for the other numeric series,
 * vertical range marks for sleep, and aggregation plots (average tick plus
 * min-max whisker) for the comparison pages. Every day mark carries a
 * `data-date` attribute; days in the active query's result set also get
 * the `highlight` class, which paints them red.
 */

import {
  ChartRecord,
  MinuteTriple,
  NumericStats,
  RangeJson,
  SleepStats,
  Stats,
  isSleepRecord,
  isSleepStats,
} from "./api.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const WIDTH = 760;
const HEIGHT = 170;
const PAD = { left: 46, right: 10, top: 12, bottom: 22 };

function svgElement<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number>,
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, String(value));
  }
  return el;
}

function dayNumber(iso: string): number {
  return Date.parse(iso + "T00:00:00Z") / 86_400_000;
}

class DayScale {
  private readonly first: number;
  private readonly count: number;

  constructor(range: RangeJson) {
    this.first = dayNumber(range.start);
    this.count = dayNumber(range.end) - this.first + 1;
  }

  x(iso: string): number {
    const index = dayNumber(iso) - this.first;
    return PAD.left + ((index + 0.5) / this.count) * (WIDTH - PAD.left - PAD.right);
  }

  get slot(): number {
    return (WIDTH - PAD.left - PAD.right) / this.count;
  }
}

function linearY(lo: number, hi: number): (v: number) => number {
  const span = hi - lo || 1;
  return (v) =>
    HEIGHT - PAD.bottom - ((v - lo) / span) * (HEIGHT - PAD.top - PAD.bottom);
}

function axis(svg: SVGSVGElement, labels: [number, string][], y: (v: number) => number): void {
  for (const [value, text] of labels) {
    const label = svgElement("text", {
      x: 4,
      y: y(value) + 3,
      class: "axis-label",
    });
    label.textContent = text;
    svg.appendChild(label);
    svg.appendChild(
      svgElement("line", {
        x1: PAD.left,
        x2: WIDTH - PAD.right,
        y1: y(value),
        y2: y(value),
        class: "gridline",
      }),
    );
  }
}

function chartSvg(): SVGSVGElement {
  return svgElement("svg", {
    viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    class: "chart",
    role: "img",
  });
}

function markClass(base: string, iso: string, highlights: Set<string>): string {
  return highlights.has(iso) ? `${base} highlight` : base;
}

export function renderDailyChart(
  source: string,
  records: ChartRecord[],
  range: RangeJson,
  highlights: Set<string>,
): SVGSVGElement {
  if (source === "sleep_range") {
    return renderSleepChart(records.filter(isSleepRecord), range, highlights);
  }
  const numeric = records.filter((r): r is { date: string; value: number } => !isSleepRecord(r));
  return source === "step_count"
    ? renderBarChart(numeric, range, highlights)
    : renderLineChart(numeric, range, highlights);
}

function valueBounds(values: number[]): [number, number] {
  if (!values.length) return [0, 1];
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  const pad = (hi - lo) * 0.1 || Math.abs(hi) * 0.1 || 1;
  return [lo - pad, hi + pad];
}

function renderBarChart(
  records: { date: string; value: number }[],
  range: RangeJson,
  highlights: Set<string>,
): SVGSVGElement {
  const svg = chartSvg();
  const scale = new DayScale(range);
  const hi = Math.max(1, ...records.map((r) => r.value));
  const y = linearY(0, hi * 1.05);
  axis(svg, [[0, "0"], [hi, String(Math.round(hi))]], y);
  const barWidth = Math.max(1, Math.min(14, scale.slot * 0.7));
  for (const record of records) {
    const bar = svgElement("rect", {
      x: scale.x(record.date) - barWidth / 2,
      y: y(record.value),
      width: barWidth,
      height: Math.max(0, HEIGHT - PAD.bottom - y(record.value)),
      class: markClass("bar", record.date, highlights),
      "data-date": record.date,
    });
    svg.appendChild(bar);
  }
  return svg;
}

function renderLineChart(
  records: { date: string; value: number }[],
  range: RangeJson,
  highlights: Set<string>,
): SVGSVGElement {
  const svg = chartSvg();
  const scale = new DayScale(range);
  const [lo, hi] = valueBounds(records.map((r) => r.value));
  const y = linearY(lo, hi);
  axis(
    svg,
    [
      [lo, lo.toFixed(0)],
      [hi, hi.toFixed(0)],
    ],
    y,
  );
  if (records.length > 1) {
    const points = records
      .map((r) => `${scale.x(r.date).toFixed(1)},${y(r.value).toFixed(1)}`)
      .join(" ");
    svg.appendChild(svgElement("polyline", { points, class: "dataline" }));
  }
  for (const record of records) {
    svg.appendChild(
      svgElement("circle", {
        cx: scale.x(record.date),
        cy: y(record.value),
        r: 2.6,
        class: markClass("dot", record.date, highlights),
        "data-date": record.date,
      }),
    );
  }
  return svg;
}

function renderSleepChart(
  records: { date: string; bedtime: number; waketime: number }[],
  range: RangeJson,
  highlights: Set<string>,
): SVGSVGElement {
  const svg = chartSvg();
  const scale = new DayScale(range);
  // Minutes axis grows downward: earlier bedtimes sit higher on screen.
  const lo = Math.min(-120, ...records.map((r) => r.bedtime));
  const hi = Math.max(600, ...records.map((r) => r.waketime));
  const y = (v: number) =>
    PAD.top + ((v - lo) / (hi - lo || 1)) * (HEIGHT - PAD.top - PAD.bottom);
  axis(svg, [], () => 0);
  for (const value of [0, 360]) {
    svg.appendChild(
      svgElement("line", {
        x1: PAD.left,
        x2: WIDTH - PAD.right,
        y1: y(value),
        y2: y(value),
        class: "gridline",
      }),
    );
    const label = svgElement("text", { x: 4, y: y(value) + 3, class: "axis-label" });
    label.textContent = value === 0 ? "12am" : "6am";
    svg.appendChild(label);
  }
  const barWidth = Math.max(1.5, Math.min(8, scale.slot * 0.5));
  for (const record of records) {
    svg.appendChild(
      svgElement("rect", {
        x: scale.x(record.date) - barWidth / 2,
        y: y(record.bedtime),
        width: barWidth,
        height: Math.max(1, y(record.waketime) - y(record.bedtime)),
        rx: barWidth / 2,
        class: markClass("sleepmark", record.date, highlights),
        "data-date": record.date,
      }),
    );
  }
  return svg;
}

function minutesLabel(minutes: number): string {
  const wrapped = ((Math.round(minutes) % 1440) + 1440) % 1440;
  const hh = String(Math.floor(wrapped / 60)).padStart(2, "0");
  const mm = String(wrapped % 60).padStart(2, "0");
  return `${hh}:${mm}`;
}

/** Aggregation plot: average tick plus a min-to-max whisker. */
export function renderAggregationPlot(stats: Stats, caption: string): HTMLElement {
  const wrap = document.createElement("figure");
  wrap.className = "agg-plot";
  const svg = svgElement("svg", { viewBox: "0 0 120 150", class: "agg-svg" });
  if (isSleepStats(stats)) {
    renderSleepWhiskers(svg, stats);
  } else {
    renderNumericWhisker(svg, stats);
  }
  wrap.appendChild(svg);
  const figcaption = document.createElement("figcaption");
  figcaption.textContent = stats.n === 0 ? `${caption} (no data)` : caption;
  wrap.appendChild(figcaption);
  return wrap;
}

function renderNumericWhisker(svg: SVGSVGElement, stats: NumericStats): void {
  if (stats.n === 0 || stats.avg === null || stats.min === null || stats.max === null) {
    return;
  }
  const [lo, hi] = valueBounds([stats.min, stats.max]);
  const y = (v: number) => 140 - ((v - lo) / (hi - lo || 1)) * 130;
  svg.appendChild(
    svgElement("line", { x1: 60, x2: 60, y1: y(stats.min), y2: y(stats.max), class: "whisker" }),
  );
  for (const bound of [stats.min, stats.max]) {
    svg.appendChild(
      svgElement("line", { x1: 52, x2: 68, y1: y(bound), y2: y(bound), class: "whisker-cap" }),
    );
  }
  svg.appendChild(
    svgElement("line", { x1: 44, x2: 76, y1: y(stats.avg), y2: y(stats.avg), class: "avg-tick" }),
  );
  const label = svgElement("text", { x: 80, y: y(stats.avg) + 4, class: "avg-label" });
  label.textContent = stats.avg >= 100 ? String(Math.round(stats.avg)) : stats.avg.toFixed(1);
  svg.appendChild(label);
}

function renderSleepWhiskers(svg: SVGSVGElement, stats: SleepStats): void {
  if (stats.n === 0 || !stats.bedtime || !stats.waketime) return;
  const lo = Math.min(stats.bedtime.earliest, -60);
  const hi = Math.max(stats.waketime.latest, 540);
  const y = (v: number) => 10 + ((v - lo) / (hi - lo || 1)) * 130;
  const columns: [number, MinuteTriple][] = [
    [40, stats.bedtime],
    [80, stats.waketime],
  ];
  for (const [x, triple] of columns) {
    svg.appendChild(
      svgElement("line", {
        x1: x, x2: x, y1: y(triple.earliest), y2: y(triple.latest), class: "whisker",
      }),
    );
    svg.appendChild(
      svgElement("line", { x1: x - 8, x2: x + 8, y1: y(triple.avg), y2: y(triple.avg), class: "avg-tick" }),
    );
    const label = svgElement("text", { x: x - 14, y: y(triple.avg) - 6, class: "avg-label" });
    label.textContent = minutesLabel(triple.avg);
    svg.appendChild(label);
  }
}
