/**
 * Browser entry point: renders the batch form and the live dashboard,
 * wires both to a coordinator endpoint. All state flows one way: form ->
 * start call -> poller -> DashboardState -> render.
 */

import { CoordinatorClient, METRIC_LABELS } from "./client.js";
import { WireFault } from "./wire.js";
import {
  BatchFormValues,
  FORM_DEFAULTS,
  startParams,
  validateForm,
} from "./form.js";
import { DashboardState, Poller } from "./dashboard.js";
import { convergenceChartSvg, loopChartSvg } from "./charts.js";
import { exportCsv } from "./exporter.js";

const FIELDS: Array<{ key: keyof BatchFormValues; label: string; step?: string }> = [
  { key: "netSize", label: "lattice size" },
  { key: "steps", label: "field steps" },
  { key: "hmax", label: "h max", step: "any" },
  { key: "hmin", label: "h min", step: "any" },
  { key: "dlevel", label: "dilution level", step: "any" },
  { key: "econst", label: "exchange constant", step: "any" },
  { key: "sd", label: "field std dev", step: "any" },
  { key: "sd1", label: "alt std dev", step: "any" },
  { key: "pp", label: "pinned fraction", step: "any" },
  { key: "nofs", label: "number of runs" },
  { key: "runall", label: "run-all flag" },
  { key: "binName", label: "worker binary" },
  { key: "masterSeed", label: "master seed" },
  { key: "pollIntervalSec", label: "poll interval (s)", step: "any" },
];

function formHtml(): string {
  const rows = FIELDS.map(({ key, label, step }) => {
    const value = FORM_DEFAULTS[key];
    const type = typeof value === "number" ? "number" : "text";
    const stepAttr = step ? ` step="${step}"` : "";
    return (
      `<label class="field">` +
      `<span>${label}</span>` +
      `<input name="${key}" type="${type}"${stepAttr} value="${value}">` +
      `<span class="err" data-err="${key}"></span>` +
      `</label>`
    );
  }).join("");
  return (
    `<form id="batch-form">` +
    `<div class="grid">${rows}</div>` +
    `<div class="banner" id="banner" hidden></div>` +
    `<button type="submit" id="start-btn">start batch</button>` +
    `</form>`
  );
}

function dashboardHtml(): string {
  return (
    `<section id="dashboard">` +
    `<div class="stats">` +
    `<div class="stat"><span class="label">created</span><span id="n-created">0</span></div>` +
    `<div class="stat"><span class="label">finished</span><span id="n-finished">0</span></div>` +
    `<div class="stat"><span class="label">running</span><span id="n-running">0</span></div>` +
    `<div class="stat"><span class="label">link</span><span id="stale">live</span></div>` +
    `</div>` +
    `<table id="metrics"><thead><tr><th>metric</th><th>mean</th><th>stderr</th></tr></thead>` +
    `<tbody></tbody></table>` +
    `<div class="charts"><div id="loop-chart"></div><div id="conv-chart"></div></div>` +
    `<button id="export-btn" disabled>download CSV</button>` +
    `</section>`
  );
}

function metricsRows(state: DashboardState): string {
  return METRIC_LABELS.map((label, i) => {
    const stat = state.metrics ? state.metrics[i] : null;
    const mean = stat ? stat.mean.toFixed(6) : "&#8212;";
    const err = stat ? stat.stderr.toFixed(6) : "&#8212;";
    return `<tr><td>${label}</td><td>${mean}</td><td>${err}</td></tr>`;
  }).join("");
}

export function renderDashboard(root: ParentNode, state: DashboardState): void {
  const byId = (id: string) => root.querySelector(`#${id}`) as HTMLElement;
  byId("n-created").textContent = String(state.progress.created);
  byId("n-finished").textContent = String(state.progress.finished);
  byId("n-running").textContent = String(state.progress.running);
  const stale = byId("stale");
  stale.textContent = state.stale ? "stale" : "live";
  stale.className = state.stale ? "stale" : "live";
  (byId("metrics").querySelector("tbody") as HTMLElement).innerHTML = metricsRows(state);
  byId("loop-chart").innerHTML = loopChartSvg(state.loop);
  byId("conv-chart").innerHTML = convergenceChartSvg(state.convergence);
  (byId("export-btn") as HTMLButtonElement).disabled = state.progress.finished < 1;
}

export function faultMessage(fault: WireFault): string {
  if (fault.code === 1) return "A batch is already running; wait for it to finish.";
  if (fault.code === 2) return `The coordinator does not know that worker binary: ${fault.message}`;
  return `Coordinator fault ${fault.code}: ${fault.message}`;
}

export function readForm(form: HTMLFormElement): BatchFormValues {
  const values = { ...FORM_DEFAULTS };
  for (const { key } of FIELDS) {
    const input = form.elements.namedItem(key) as HTMLInputElement;
    if (typeof FORM_DEFAULTS[key] === "number") {
      (values as Record<string, unknown>)[key] = Number(input.value);
    } else {
      (values as Record<string, unknown>)[key] = input.value;
    }
  }
  return values;
}

export function initApp(root: HTMLElement, serverUrl: string): Poller {
  root.innerHTML = `<h1>RFIM batch control</h1>` + formHtml() + dashboardHtml();
  const client = new CoordinatorClient(serverUrl);
  const form = root.querySelector("#batch-form") as HTMLFormElement;
  const banner = root.querySelector("#banner") as HTMLElement;
  const startBtn = root.querySelector("#start-btn") as HTMLButtonElement;
  const poller = new Poller(client, (state) => renderDashboard(root, state));

  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    banner.hidden = true;
    const values = readForm(form);
    const errors = validateForm(values);
    for (const { key } of FIELDS) {
      const slot = root.querySelector(`[data-err="${key}"]`) as HTMLElement;
      slot.textContent = errors[key] ?? "";
    }
    if (Object.keys(errors).length > 0) return;

    startBtn.disabled = true;
    try {
      await client.start(startParams(values));
      poller.reset();
      poller.start(values.pollIntervalSec * 1000);
    } catch (exc) {
      banner.hidden = false;
      banner.textContent =
        exc instanceof WireFault ? faultMessage(exc) : `Request failed: ${String(exc)}`;
    } finally {
      startBtn.disabled = false;
    }
  });

  (root.querySelector("#export-btn") as HTMLButtonElement).addEventListener(
    "click",
    () => void exportCsv(client),
  );

  renderDashboard(root, poller.state);
  return poller;
}
