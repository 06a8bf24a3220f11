// Renders the sizing answer: a scorecard plus three SVG time-series
// panels (altitude, climb rate, thrust) that share one time axis. Phase
// bands and their boundary lines are placed from the switch times in the
// payload, never recomputed locally.

import type { FeasiblePlan } from "./api";

export const PLOT = {
  width: 680,
  height: 160,
  left: 60,
  right: 14,
  top: 12,
  bottom: 24,
};

const SVG_NS = "http://www.w3.org/2000/svg";

export interface PanelDef {
  key: "altitude_m" | "climb_rate_mps" | "thrust_n";
  label: string;
  unit: string;
}

export const PANELS: PanelDef[] = [
  { key: "altitude_m", label: "Altitude", unit: "m" },
  { key: "climb_rate_mps", label: "Climb rate", unit: "m/s" },
  { key: "thrust_n", label: "Thrust", unit: "N" },
];

export function xScale(t: number, tMax: number): number {
  const span = PLOT.width - PLOT.left - PLOT.right;
  return PLOT.left + (tMax > 0 ? (t / tMax) * span : 0);
}

export function yScale(v: number, lo: number, hi: number): number {
  const span = PLOT.height - PLOT.top - PLOT.bottom;
  if (hi <= lo) return PLOT.top + span / 2;
  return PLOT.top + ((hi - v) / (hi - lo)) * span;
}

export function seriesPath(ts: number[], ys: number[], tMax: number,
                           lo: number, hi: number): string {
  const parts: string[] = [];
  for (let i = 0; i < ts.length; i++) {
    const x = xScale(ts[i], tMax).toFixed(2);
    const y = yScale(ys[i], lo, hi).toFixed(2);
    parts.push(`${i === 0 ? "M" : "L"}${x},${y}`);
  }
  return parts.join(" ");
}

export interface PhaseBand {
  name: string;
  t0: number;
  t1: number;
}

export function phaseBands(plan: FeasiblePlan): PhaseBand[] {
  const ts = plan.profile.t_s;
  const tEnd = ts.length > 0 ? ts[ts.length - 1] : plan.t_stop_s;
  return [
    { name: "boost", t0: 0, t1: plan.t_switch1_s },
    { name: "microgravity", t0: plan.t_switch1_s, t1: plan.t_switch2_s },
    { name: "brake", t0: plan.t_switch2_s, t1: plan.t_stop_s },
    { name: "parked", t0: plan.t_stop_s, t1: tEnd },
  ];
}

function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K, attrs: Record<string, string>): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) el.setAttribute(k, v);
  return el;
}

function scoreItem(label: string, field: string, value: number,
                   text: string): HTMLElement {
  const item = document.createElement("div");
  item.className = "score-item";
  const name = document.createElement("span");
  name.className = "score-label";
  name.textContent = label;
  const val = document.createElement("span");
  val.className = "score-value";
  val.dataset.field = field;
  val.dataset.value = String(value);
  val.textContent = text;
  item.append(name, val);
  return item;
}

function renderScorecard(plan: FeasiblePlan): HTMLElement {
  const card = document.createElement("div");
  card.className = "scorecard";
  card.append(
    scoreItem("Microgravity window", "microgravity_duration_s",
              plan.microgravity_duration_s,
              `${plan.microgravity_duration_s.toFixed(3)} s`),
    scoreItem("Apogee", "apogee_m", plan.apogee_m,
              `${plan.apogee_m.toFixed(2)} m`),
    scoreItem("Ceiling", "ceiling_m", plan.ceiling_m,
              `${plan.ceiling_m.toFixed(2)} m`),
    scoreItem("Peak climb", "max_climb_speed_mps", plan.max_climb_speed_mps,
              `${plan.max_climb_speed_mps.toFixed(1)} m/s`),
  );
  const badge = document.createElement("span");
  badge.className = plan.meets_min_duration ? "badge ok" : "badge warn";
  badge.dataset.field = "meets_min_duration";
  badge.textContent = plan.meets_min_duration
    ? "meets minimum duration" : "below minimum duration";
  card.append(badge);
  return card;
}

function renderPanel(plan: FeasiblePlan, def: PanelDef,
                     tMax: number): HTMLElement {
  const wrap = document.createElement("figure");
  wrap.className = "panel";
  const caption = document.createElement("figcaption");
  caption.textContent = def.unit ? `${def.label} (${def.unit})` : def.label;
  wrap.append(caption);

  const svg = svgEl("svg", {
    viewBox: `0 0 ${PLOT.width} ${PLOT.height}`,
    class: "panel-svg",
    "data-key": def.key,
    "data-tmax": String(tMax),
    role: "img",
  });

  const ys = plan.profile[def.key];
  let lo = Math.min(...ys);
  let hi = Math.max(...ys);
  if (hi - lo < 1e-9) { lo -= 1; hi += 1; }

  for (const band of phaseBands(plan)) {
    const x0 = xScale(band.t0, tMax);
    const x1 = xScale(band.t1, tMax);
    if (x1 <= x0) continue;
    svg.append(svgEl("rect", {
      class: `band band-${band.name}`,
      "data-phase": band.name,
      x: x0.toFixed(2),
      y: String(PLOT.top),
      width: (x1 - x0).toFixed(2),
      height: String(PLOT.height - PLOT.top - PLOT.bottom),
    }));
  }

  for (const t of [plan.t_switch1_s, plan.t_switch2_s, plan.t_stop_s]) {
    const x = xScale(t, tMax).toFixed(2);
    svg.append(svgEl("line", {
      class: "switch",
      "data-t": String(t),
      x1: x, x2: x,
      y1: String(PLOT.top),
      y2: String(PLOT.height - PLOT.bottom),
    }));
  }

  // frame and a few ticks
  svg.append(svgEl("line", {
    class: "axis",
    x1: String(PLOT.left), x2: String(PLOT.width - PLOT.right),
    y1: String(PLOT.height - PLOT.bottom),
    y2: String(PLOT.height - PLOT.bottom),
  }));
  for (let i = 0; i <= 5; i++) {
    const t = (tMax * i) / 5;
    const x = xScale(t, tMax);
    const label = svgEl("text", {
      class: "tick",
      x: x.toFixed(2),
      y: String(PLOT.height - 6),
      "text-anchor": "middle",
    });
    label.textContent = t.toFixed(1);
    svg.append(label);
  }
  for (const v of [lo, (lo + hi) / 2, hi]) {
    const label = svgEl("text", {
      class: "tick",
      x: String(PLOT.left - 6),
      y: (yScale(v, lo, hi) + 3).toFixed(2),
      "text-anchor": "end",
    });
    label.textContent = Math.abs(v) >= 100 ? v.toFixed(0) : v.toFixed(1);
    svg.append(label);
  }

  svg.append(svgEl("path", {
    class: "series",
    "data-key": def.key,
    d: seriesPath(plan.profile.t_s, ys, tMax, lo, hi),
    fill: "none",
  }));

  wrap.append(svg);
  return wrap;
}

export function renderProfile(container: HTMLElement,
                              plan: FeasiblePlan): void {
  container.replaceChildren();
  container.append(renderScorecard(plan));
  const ts = plan.profile.t_s;
  const tMax = ts.length > 0 ? ts[ts.length - 1] : plan.t_stop_s;
  const panels = document.createElement("div");
  panels.className = "panels";
  for (const def of PANELS) panels.append(renderPanel(plan, def, tMax));
  container.append(panels);

  const axisNote = document.createElement("p");
  axisNote.className = "axis-note";
  axisNote.textContent = `shared time axis: 0 to ${tMax.toFixed(2)} s`;
  container.append(axisNote);
}

export function renderInfeasible(container: HTMLElement,
                                 violated: string, message: string): void {
  container.replaceChildren();
  const box = document.createElement("div");
  box.className = "infeasible";
  const head = document.createElement("strong");
  head.textContent = `infeasible: ${violated}`;
  head.dataset.constraint = violated;
  const body = document.createElement("p");
  body.textContent = message;
  box.append(head, body);
  container.append(box);
}
