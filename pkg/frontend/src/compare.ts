// What-if support: stored runs, altitude overlay, parameter diff table.

import type { FeasiblePlan, SizeRequest } from "./api";
import { FIELDS } from "./form";
import { PLOT, seriesPath } from "./profile";

export interface RunRecord {
  id: number;
  label: string;
  request: SizeRequest;
  plan: FeasiblePlan;
}

export interface ParamDiff {
  path: string;
  base: number;
  other: number;
}

/** Fields whose values differ between two requests, in form order. */
export function paramDiffs(base: SizeRequest, other: SizeRequest): ParamDiff[] {
  const out: ParamDiff[] = [];
  for (const f of FIELDS) {
    const a = base[f.section][f.key];
    const b = other[f.section][f.key];
    if (a !== b) out.push({ path: f.id, base: a, other: b });
  }
  return out;
}

const SVG_NS = "http://www.w3.org/2000/svg";

export function renderCompare(container: HTMLElement,
                              runs: RunRecord[]): void {
  container.replaceChildren();
  if (runs.length < 2) return;

  const heading = document.createElement("h3");
  heading.textContent = `altitude overlay, ${runs.length} runs`;
  container.append(heading);

  let tMax = 0;
  let lo = Infinity;
  let hi = -Infinity;
  for (const run of runs) {
    const ts = run.plan.profile.t_s;
    if (ts.length > 0) tMax = Math.max(tMax, ts[ts.length - 1]);
    for (const h of run.plan.profile.altitude_m) {
      lo = Math.min(lo, h);
      hi = Math.max(hi, h);
    }
  }
  if (hi - lo < 1e-9) { lo -= 1; hi += 1; }

  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", `0 0 ${PLOT.width} ${PLOT.height * 1.6}`);
  svg.setAttribute("class", "overlay-svg");
  const frame = document.createElementNS(SVG_NS, "line");
  const yBase = PLOT.height * 1.6 - PLOT.bottom;
  frame.setAttribute("x1", String(PLOT.left));
  frame.setAttribute("x2", String(PLOT.width - PLOT.right));
  frame.setAttribute("y1", String(yBase));
  frame.setAttribute("y2", String(yBase));
  frame.setAttribute("class", "axis");
  svg.append(frame);

  const yStretch = (PLOT.height * 1.6 - PLOT.top - PLOT.bottom)
    / (PLOT.height - PLOT.top - PLOT.bottom);
  runs.forEach((run, i) => {
    const path = document.createElementNS(SVG_NS, "path");
    // reuse the panel scales, stretched vertically onto the taller canvas
    const raw = seriesPath(run.plan.profile.t_s, run.plan.profile.altitude_m,
                           tMax, lo, hi);
    path.setAttribute("d", raw);
    path.setAttribute("fill", "none");
    path.setAttribute("class", `overlay-series overlay-${i % 6}`);
    path.setAttribute("data-run", String(run.id));
    path.setAttribute(
      "transform",
      `translate(0 ${PLOT.top}) scale(1 ${yStretch}) translate(0 ${-PLOT.top})`);
    svg.append(path);
  });
  container.append(svg);

  const legend = document.createElement("ul");
  legend.className = "legend";
  runs.forEach((run, i) => {
    const item = document.createElement("li");
    item.className = `legend-item overlay-${i % 6}`;
    item.dataset.run = String(run.id);
    item.textContent = `${run.label}: ${run.plan.microgravity_duration_s.toFixed(3)} s, `
      + `apogee ${run.plan.apogee_m.toFixed(2)} m`;
    legend.append(item);
  });
  container.append(legend);

  const base = runs[0];
  const table = document.createElement("table");
  table.className = "diff-table";
  const head = table.createTHead().insertRow();
  for (const text of ["parameter", base.label,
                      ...runs.slice(1).map((r) => r.label)]) {
    const th = document.createElement("th");
    th.textContent = text;
    head.append(th);
  }
  const tbody = table.createTBody();
  const changed = new Set<string>();
  for (const run of runs.slice(1)) {
    for (const d of paramDiffs(base.request, run.request)) changed.add(d.path);
  }
  for (const f of FIELDS) {
    if (!changed.has(f.id)) continue;
    const row = tbody.insertRow();
    row.dataset.path = f.id;
    const name = row.insertCell();
    name.textContent = f.id;
    for (const run of runs) {
      const cell = row.insertCell();
      cell.textContent = String(run.request[f.section][f.key]);
    }
  }
  if (changed.size === 0) {
    const note = document.createElement("p");
    note.className = "diff-none";
    note.textContent = "runs share identical parameters";
    container.append(note);
  } else {
    container.append(table);
  }
}
