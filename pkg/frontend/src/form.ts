/**
 * Batch form model: the twelve start parameters in wire order, a master
 * seed and a polling interval, with client-side validation mirroring the
 * server's parameter invariants so bad batches are blocked before any
 * wire traffic.
 */

import { WireParam, xdouble, xint, xstring } from "./wire.js";

export interface BatchFormValues {
  netSize: number;
  steps: number;
  hmax: number;
  hmin: number;
  dlevel: number;
  econst: number;
  sd: number;
  sd1: number;
  pp: number;
  nofs: number;
  runall: number;
  binName: string;
  masterSeed: number;
  pollIntervalSec: number;
}

export const FORM_DEFAULTS: BatchFormValues = {
  netSize: 70,
  steps: 300,
  hmax: 8.0,
  hmin: -5.0,
  dlevel: 0.1,
  econst: 10.0,
  sd: 1.5,
  sd1: 0.0,
  pp: 0.0,
  nofs: 8,
  runall: 0,
  binName: "rfim",
  masterSeed: 0,
  pollIntervalSec: 2,
};

/** Field name -> human-readable problem; empty object means submittable. */
export function validateForm(form: BatchFormValues): Record<string, string> {
  const problems: Record<string, string> = {};
  const intFields: Array<[keyof BatchFormValues, string]> = [
    ["netSize", "lattice size"],
    ["steps", "steps"],
    ["nofs", "number of simulations"],
    ["runall", "runall"],
    ["masterSeed", "master seed"],
  ];
  for (const [field, label] of intFields) {
    if (!Number.isInteger(form[field])) problems[field] = `${label} must be an integer`;
  }
  const floatFields: Array<keyof BatchFormValues> = [
    "hmax", "hmin", "dlevel", "econst", "sd", "sd1", "pp", "pollIntervalSec",
  ];
  for (const field of floatFields) {
    if (!Number.isFinite(form[field])) problems[field] = `${field} must be a number`;
  }
  if (Object.keys(problems).length > 0) return problems;

  if (form.netSize < 2) problems.netSize = "lattice size must be at least 2";
  if (form.steps < 4 || form.steps % 2 !== 0) {
    problems.steps = "steps must be even and at least 4";
  }
  if (!(form.hmax > form.hmin)) problems.hmax = "hmax must exceed hmin";
  if (form.dlevel < 0 || form.dlevel > 1) problems.dlevel = "dilution level must lie in [0, 1]";
  if (form.econst < 1) problems.econst = "exchange constant must be at least 1";
  if (form.sd < 0) problems.sd = "field spread must be non-negative";
  if (form.nofs < 1) problems.nofs = "need at least one simulation";
  if (form.runall < 0) problems.runall = "runall must be non-negative";
  if (form.masterSeed < 0) problems.masterSeed = "master seed must be non-negative";
  if (!form.binName || /[/\\]/.test(form.binName)) {
    problems.binName = "binary name must be a bare file name";
  }
  if (!(form.pollIntervalSec > 0)) problems.pollIntervalSec = "polling interval must be positive";
  return problems;
}

/** The twelve start parameters, typed, in wire order. */
export function startParams(form: BatchFormValues): WireParam[] {
  return [
    xint(form.netSize),
    xint(form.steps),
    xdouble(form.hmax),
    xdouble(form.hmin),
    xdouble(form.dlevel),
    xdouble(form.econst),
    xdouble(form.sd),
    xdouble(form.sd1),
    xdouble(form.pp),
    xint(form.nofs),
    xint(form.runall),
    xstring(form.binName),
  ];
}
