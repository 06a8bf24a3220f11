// Single-page wiring: preset picker, constraint form, submit flow, run
// history with overlay comparison. All numbers shown come from service
// payloads; this file only moves them around.

import { SizingClient } from "./api";
import type { PresetEntry } from "./api";
import { FIELDS, stateFromPreset, toRequest, validate } from "./form";
import type { FormState } from "./form";
import { renderInfeasible, renderProfile } from "./profile";
import { renderCompare } from "./compare";
import type { RunRecord } from "./compare";
import "./style.css";

interface AppState {
  presets: PresetEntry[];
  history: RunRecord[];
  nextRunId: number;
}

function fieldRow(spec: (typeof FIELDS)[number]): HTMLElement {
  const row = document.createElement("div");
  row.className = "field-row";

  const label = document.createElement("label");
  label.htmlFor = spec.id;
  label.textContent = spec.label;
  row.append(label);

  const input = document.createElement("input");
  input.type = "number";
  input.id = spec.id;
  input.name = spec.id;
  input.min = String(spec.lo);
  input.max = String(spec.hi);
  input.step = String(spec.step);
  row.append(input);

  if (spec.slider) {
    const slider = document.createElement("input");
    slider.type = "range";
    slider.min = String(spec.lo);
    slider.max = String(spec.hi);
    slider.step = String(spec.step);
    slider.dataset.sliderFor = spec.id;
    slider.addEventListener("input", () => { input.value = slider.value; });
    input.addEventListener("input", () => { slider.value = input.value; });
    row.append(slider);
  }

  const unit = document.createElement("span");
  unit.className = "unit";
  unit.textContent = spec.unit;
  row.append(unit);

  const err = document.createElement("span");
  err.className = "field-error";
  err.dataset.for = spec.id;
  err.setAttribute("role", "alert");
  row.append(err);

  return row;
}

function buildSkeleton(root: HTMLElement): void {
  root.replaceChildren();
  root.insertAdjacentHTML("beforeend", `
    <header class="app-header">
      <h1>zerog sizing</h1>
      <p>plan a microgravity parabola, then iterate on the vehicle</p>
    </header>
    <section class="controls">
      <div class="preset-row">
        <label for="preset-select">Preset</label>
        <select id="preset-select"></select>
      </div>
      <form id="sizing-form" novalidate></form>
      <div class="submit-row">
        <button id="submit-btn" type="submit" form="sizing-form">Size mission</button>
        <div id="status" role="status"></div>
      </div>
    </section>
    <section id="result"></section>
    <section class="history-wrap">
      <h2>Runs</h2>
      <ul id="history"></ul>
      <button id="compare-btn" type="button" disabled>Compare runs</button>
      <div id="compare"></div>
    </section>
  `);
  const form = root.querySelector<HTMLFormElement>("#sizing-form")!;
  for (const spec of FIELDS) form.append(fieldRow(spec));
}

function setFormState(root: HTMLElement, state: FormState): void {
  for (const spec of FIELDS) {
    const input = root.querySelector<HTMLInputElement>(
      `[id="${spec.id}"]`)!;
    input.value = String(state[spec.id]);
    const slider = root.querySelector<HTMLInputElement>(
      `[data-slider-for="${spec.id}"]`);
    if (slider) slider.value = input.value;
  }
}

function readFormState(root: HTMLElement): FormState {
  const state: FormState = {};
  for (const spec of FIELDS) {
    const input = root.querySelector<HTMLInputElement>(`[id="${spec.id}"]`)!;
    state[spec.id] = input.value.trim() === "" ? NaN : Number(input.value);
  }
  return state;
}

function clearFieldErrors(root: HTMLElement): void {
  for (const el of root.querySelectorAll<HTMLElement>(".field-error")) {
    el.textContent = "";
  }
}

function showFieldErrors(root: HTMLElement,
                         errors: Record<string, string>): string[] {
  const unmatched: string[] = [];
  for (const [path, message] of Object.entries(errors)) {
    const slot = root.querySelector<HTMLElement>(
      `.field-error[data-for="${path}"]`);
    if (slot) slot.textContent = message;
    else unmatched.push(`${path}: ${message}`);
  }
  return unmatched;
}

function setStatus(root: HTMLElement, text: string,
                   retry?: () => void): void {
  const box = root.querySelector<HTMLElement>("#status")!;
  box.replaceChildren();
  const span = document.createElement("span");
  span.textContent = text;
  box.append(span);
  if (retry) {
    const btn = document.createElement("button");
    btn.type = "button";
    btn.className = "retry";
    btn.textContent = "Retry";
    btn.addEventListener("click", retry);
    box.append(btn);
  }
}

function renderHistory(root: HTMLElement, app: AppState): void {
  const list = root.querySelector<HTMLElement>("#history")!;
  list.replaceChildren();
  for (const run of app.history) {
    const item = document.createElement("li");
    item.dataset.run = String(run.id);
    item.textContent =
      `${run.label}: window ${run.plan.microgravity_duration_s.toFixed(3)} s`;
    list.append(item);
  }
  const btn = root.querySelector<HTMLButtonElement>("#compare-btn")!;
  btn.disabled = app.history.length < 2;
}

export async function initApp(root: HTMLElement,
                              client: SizingClient): Promise<void> {
  buildSkeleton(root);
  const app: AppState = { presets: [], history: [], nextRunId: 1 };

  const select = root.querySelector<HTMLSelectElement>("#preset-select")!;

  async function loadPresets(): Promise<void> {
    setStatus(root, "loading presets...");
    try {
      app.presets = await client.presets();
    } catch (err) {
      setStatus(root, `cannot reach the sizing service (${String(err)})`,
                () => { void loadPresets(); });
      return;
    }
    select.replaceChildren();
    for (const p of app.presets) {
      const opt = document.createElement("option");
      opt.value = p.name;
      opt.textContent = `${p.name}: ${p.description}`;
      select.append(opt);
    }
    const start = app.presets.find((p) => p.name === "nominal")
      ?? app.presets[0];
    if (start) {
      select.value = start.name;
      setFormState(root, stateFromPreset(start));
    }
    setStatus(root, "ready");
  }

  select.addEventListener("change", () => {
    const preset = app.presets.find((p) => p.name === select.value);
    if (preset) {
      clearFieldErrors(root);
      setFormState(root, stateFromPreset(preset));
    }
  });

  async function submit(): Promise<void> {
    clearFieldErrors(root);
    const state = readFormState(root);
    const errors = validate(state);
    if (Object.keys(errors).length > 0) {
      showFieldErrors(root, errors);
      setStatus(root,
                `${Object.keys(errors).length} field(s) out of range, ` +
                "request not sent");
      return;
    }
    const request = toRequest(state);
    setStatus(root, "sizing...");
    const outcome = await client.size(request);
    const result = root.querySelector<HTMLElement>("#result")!;
    switch (outcome.kind) {
      case "plan": {
        renderProfile(result, outcome.plan);
        const run: RunRecord = {
          id: app.nextRunId,
          label: `run ${app.nextRunId} (${request.vehicle.engine_power_w} W)`,
          request,
          plan: outcome.plan,
        };
        app.nextRunId += 1;
        app.history.push(run);
        renderHistory(root, app);
        setStatus(root, "feasible");
        break;
      }
      case "infeasible":
        renderInfeasible(result, outcome.info.violated_constraint,
                         outcome.info.message);
        setStatus(root, "mission infeasible");
        break;
      case "invalid": {
        const unmatched = showFieldErrors(root, outcome.errors);
        setStatus(root, unmatched.length > 0
          ? `rejected: ${unmatched.join("; ")}`
          : "rejected by the service, see field messages");
        break;
      }
      case "transport":
        setStatus(root, `request failed: ${outcome.message}`,
                  () => { void submit(); });
        break;
      case "cancelled":
        break;
    }
  }

  root.querySelector<HTMLFormElement>("#sizing-form")!
    .addEventListener("submit", (e) => {
      e.preventDefault();
      void submit();
    });

  root.querySelector<HTMLButtonElement>("#compare-btn")!
    .addEventListener("click", () => {
      renderCompare(root.querySelector<HTMLElement>("#compare")!,
                    app.history);
    });

  await loadPresets();
}

const rootEl = document.getElementById("app");
if (rootEl) {
  void initApp(rootEl, new SizingClient());
}
