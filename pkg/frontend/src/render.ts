// Pure renderers: payload in, HTML string out.  No fetching, no decision
// math; every number shown comes straight off a service payload, so
// replaying a recorded payload reproduces the identical string.

import type {
  AssessmentPayload,
  HypothesisPayload,
  LoadAndGoPayload,
  ModelVariable,
  PlanPayload,
} from "./types.js";
import { validateAssessment } from "./types.js";

export function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function fmt(value: number, digits = 3): string {
  return value.toFixed(digits);
}

export function renderErrorBanner(message: string, path = ""): string {
  const where = path ? ` <code class="error-path">${esc(path)}</code>` : "";
  return `<div class="error-banner" role="alert">${esc(message)}${where}</div>`;
}

// Inline curve through the delay grid; thresholds here are presentation
// only (scale derived from the payload's own extremes).
function renderCurve(points: [number, number][]): string {
  if (points.length === 0) {
    return `<p class="curve-empty">no delay samples</p>`;
  }
  const maxT = Math.max(...points.map(([t]) => t), 1);
  const maxC = Math.max(...points.map(([, c]) => c), 1);
  const coords = points
    .map(([t, c]) => `${(100 * t) / maxT},${40 - (40 * c) / maxC}`)
    .join(" ");
  const ticks = points
    .map(
      ([t, c]) =>
        `<li data-delay="${t}">+${fmt(t, 0)} min: ${fmt(c)}</li>`,
    )
    .join("");
  return (
    `<figure class="ecda-curve">` +
    `<svg viewBox="0 0 100 40" preserveAspectRatio="none">` +
    `<polyline fill="none" points="${coords}"></polyline>` +
    `</svg>` +
    `<ul class="curve-points">${ticks}</ul>` +
    `</figure>`
  );
}

function criticalityBadge(rate: number): string {
  // Presentation bands for the badge colour; the number itself is verbatim.
  const band = rate >= 2.0 ? "high" : rate >= 0.5 ? "elevated" : "low";
  return `<span class="badge badge-${band}">${fmt(rate)}/min</span>`;
}

function renderVoi(hyp: HypothesisPayload): string {
  const fresh = hyp.voi.entries.filter((e) => !e.observed);
  if (fresh.length === 0) {
    return `<p class="voi-empty">no further findings recommended</p>`;
  }
  const items = fresh
    .map(
      (e) =>
        `<li class="voi-entry" data-variable="${esc(e.variable)}">` +
        `${esc(e.variable)} <span class="evi">${fmt(e.evi)}</span></li>`,
    )
    .join("");
  return `<ol class="voi-list">${items}</ol>`;
}

function renderHypothesis(hyp: HypothesisPayload): string {
  const rows = hyp.posterior.ranked
    .map(
      ([state, weight]) =>
        `<tr class="differential-row" data-state="${esc(state)}">` +
        `<td>${esc(state)}</td><td>${fmt(weight, 4)}</td></tr>`,
    )
    .join("");
  return (
    `<section class="hypothesis" data-variable="${esc(hyp.variable)}">` +
    `<h2>${esc(hyp.variable)}</h2>` +
    `<table class="differential"><tbody>${rows}</tbody></table>` +
    `<p class="recommendation">best action: <strong>${esc(hyp.best_action)}</strong>` +
    ` (EU* ${fmt(hyp.expected_utility)})` +
    ` criticality ${criticalityBadge(hyp.criticality)}</p>` +
    renderCurve(hyp.ecda) +
    `<h3>recommended findings</h3>` +
    renderVoi(hyp) +
    `</section>`
  );
}

export function renderLoadAndGo(report: LoadAndGoPayload): string {
  return (
    `<aside class="load-and-go">` +
    `<dl>` +
    `<dt>go now</dt><dd>${fmt(report.ecda_load_and_go)}</dd>` +
    `<dt>treat first</dt><dd>${fmt(report.ecda_with_treatment)}</dd>` +
    `</dl>` +
    `<p class="verdict">${esc(report.recommendation)}</p>` +
    `</aside>`
  );
}

export function renderAssessment(payload: unknown): string {
  const checked = validateAssessment(payload);
  if (!checked.ok) {
    // Malformed payload must still leave a visible panel.
    return renderErrorBanner(checked.message, checked.path);
  }
  const assessment: AssessmentPayload = checked.value;
  const blocks = assessment.hypotheses.map(renderHypothesis).join("");
  const evidence = assessment.evidence
    .map(
      ([variable, state, ts]) =>
        `<li>${esc(variable)} = ${esc(state)} <time>@${fmt(ts, 1)}</time></li>`,
    )
    .join("");
  const extras =
    (assessment.load_and_go ? renderLoadAndGo(assessment.load_and_go) : "") +
    (assessment.transport ? renderRoutes(assessment.transport) : "");
  return (
    `<div class="assessment" data-session="${esc(assessment.session)}" ` +
    `data-now="${assessment.now}">` +
    blocks +
    `<section class="findings"><h3>findings</h3>` +
    `<ul class="evidence">${evidence || "<li class='none'>none yet</li>"}</ul>` +
    `</section>` +
    extras +
    `</div>`
  );
}

function renderRoutes(routes: Record<string, number>): string {
  const rows = Object.entries(routes)
    .map(
      ([name, cost]) =>
        `<tr data-route="${esc(name)}"><td>${esc(name)}</td>` +
        `<td>${fmt(cost)}</td></tr>`,
    )
    .join("");
  return `<table class="routes"><tbody>${rows}</tbody></table>`;
}

export interface DelayReadout {
  delay: number;
  cost: number | null;
  action: string | null;
  pending: boolean;
  stale: boolean;
  warning: string | null;
}

export function renderDelayReadout(view: DelayReadout): string {
  if (view.pending) {
    return `<div class="what-if pending"><span class="spinner"></span> fetching…</div>`;
  }
  const classes = ["what-if", view.stale ? "stale" : ""].join(" ").trim();
  const cost = view.cost === null ? "—" : fmt(view.cost);
  const action = view.action ? ` best action: ${esc(view.action)}` : "";
  const warning = view.warning
    ? `<p class="warning">${esc(view.warning)}</p>`
    : "";
  return (
    `<div class="${classes}">` +
    `delay +${fmt(view.delay, 0)} min costs <output>${cost}</output>${action}` +
    warning +
    `</div>`
  );
}

// Plans arrive already ranked by the service; render them in payload
// order and flag the first row.  Re-sorting here would be local math.
export function renderPlanTable(plans: PlanPayload[]): string {
  if (plans.length === 0) {
    return renderErrorBanner("the service returned no plans", "plans");
  }
  const rows = plans
    .map((plan, index) => {
      const trips = Object.entries(plan.trips)
        .map(
          ([asset, legs]) =>
            `${esc(asset)}: ${legs
              .map(([patient, facility]) => `${esc(patient)}→${esc(facility)}`)
              .join(", ")}`,
        )
        .join("; ");
      const breakdown = Object.entries(plan.per_patient)
        .map(([patient, cost]) => `<li>${esc(patient)}: ${fmt(cost)}</li>`)
        .join("");
      const flag = index === 0 ? `<span class="recommended">recommended</span>` : "";
      return (
        `<tr class="plan-row${index === 0 ? " top" : ""}">` +
        `<td>${trips} ${flag}</td>` +
        `<td>${fmt(plan.total)}</td>` +
        `<td><details><summary>per patient</summary>` +
        `<ul>${breakdown}</ul></details></td>` +
        `</tr>`
      );
    })
    .join("");
  return (
    `<table class="plans">` +
    `<thead><tr><th>plan</th><th>total cost</th><th></th></tr></thead>` +
    `<tbody>${rows}</tbody></table>`
  );
}

export function renderFindingForm(
  variables: ModelVariable[],
  buffer: { variable: string; state: string },
  error: string | null,
): string {
  const options = variables
    .map((v) => {
      const states = v.states
        .map(
          (s) =>
            `<option value="${esc(s)}"${
              buffer.variable === v.name && buffer.state === s ? " selected" : ""
            }>${esc(s)}</option>`,
        )
        .join("");
      return (
        `<label class="finding-field" data-variable="${esc(v.name)}">` +
        `${esc(v.name)} <select name="${esc(v.name)}">` +
        `<option value=""></option>${states}</select></label>`
      );
    })
    .join("");
  const banner = error ? renderErrorBanner(error) : "";
  return `<form class="finding-form">${options}${banner}<button type="submit">record</button></form>`;
}
