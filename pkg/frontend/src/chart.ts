import type { SeriesView } from "./types";

const WIDTH = 720;
const HEIGHT = 220;
const PAD = { left: 36, right: 10, top: 12, bottom: 28 };

export const PALETTE = [
  "#2563eb", "#dc2626", "#059669", "#d97706", "#7c3aed",
  "#db2777", "#0891b2", "#65a30d", "#9333ea", "#ea580c", "#64748b",
];

/**
 * Collapse to the top `limit` series by total and sum the remainder
 * into a trailing "other" series (bucket-wise).
 */
export function limitSeries(series: SeriesView[], limit: number): SeriesView[] {
  if (series.length <= limit) return series;
  const sorted = [...series].sort((a, b) => b.total - a.total || a.label.localeCompare(b.label));
  const kept = sorted.slice(0, limit);
  const rest = sorted.slice(limit);
  const other: SeriesView = {
    key: "other",
    label: "other",
    total: rest.reduce((sum, s) => sum + s.total, 0),
    buckets: rest[0].buckets.map((bucket, i) => ({
      day: bucket.day,
      count: rest.reduce((sum, s) => sum + s.buckets[i].count, 0),
    })),
  };
  return [...kept, other];
}

function svgEl<K extends keyof SVGElementTagNameMap>(tag: K): SVGElementTagNameMap[K] {
  return document.createElementNS("http://www.w3.org/2000/svg", tag);
}

/** 30-day multi-series line chart. Every plotted value is an API bucket count. */
export function renderChart(series: SeriesView[]): HTMLElement {
  const wrapper = document.createElement("div");
  wrapper.className = "chart";
  const svg = svgEl("svg");
  svg.setAttribute("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);
  svg.setAttribute("role", "img");

  const days = series[0]?.buckets.map((b) => b.day) ?? [];
  const max = Math.max(1, ...series.flatMap((s) => s.buckets.map((b) => b.count)));
  const plotW = WIDTH - PAD.left - PAD.right;
  const plotH = HEIGHT - PAD.top - PAD.bottom;
  const x = (i: number) => PAD.left + (days.length > 1 ? (i * plotW) / (days.length - 1) : plotW / 2);
  const y = (v: number) => PAD.top + plotH - (v / max) * plotH;

  for (const tick of [0, Math.ceil(max / 2), max]) {
    const line = svgEl("line");
    line.setAttribute("x1", String(PAD.left));
    line.setAttribute("x2", String(WIDTH - PAD.right));
    line.setAttribute("y1", String(y(tick)));
    line.setAttribute("y2", String(y(tick)));
    line.setAttribute("class", "gridline");
    svg.append(line);
    const label = svgEl("text");
    label.setAttribute("x", "4");
    label.setAttribute("y", String(y(tick) + 4));
    label.setAttribute("class", "axis");
    label.textContent = String(tick);
    svg.append(label);
  }
  if (days.length) {
    for (const i of [0, Math.floor(days.length / 2), days.length - 1]) {
      const label = svgEl("text");
      label.setAttribute("x", String(x(i)));
      label.setAttribute("y", String(HEIGHT - 8));
      label.setAttribute("text-anchor", "middle");
      label.setAttribute("class", "axis");
      label.textContent = days[i];
      svg.append(label);
    }
  }

  series.forEach((s, idx) => {
    const poly = svgEl("polyline");
    poly.setAttribute(
      "points",
      s.buckets.map((b, i) => `${x(i)},${y(b.count)}`).join(" "),
    );
    poly.setAttribute("fill", "none");
    poly.setAttribute("stroke", PALETTE[idx % PALETTE.length]);
    poly.setAttribute("stroke-width", "2");
    poly.setAttribute("data-series", s.label);
    poly.setAttribute("data-counts", JSON.stringify(s.buckets.map((b) => b.count)));
    svg.append(poly);
  });

  const legend = document.createElement("div");
  legend.className = "legend";
  series.forEach((s, idx) => {
    const item = document.createElement("span");
    item.className = "legend-item";
    const swatch = document.createElement("span");
    swatch.className = "swatch";
    swatch.style.background = PALETTE[idx % PALETTE.length];
    item.append(swatch, `${s.label} (${s.total})`);
    legend.append(item);
  });

  wrapper.append(svg, legend);
  return wrapper;
}
