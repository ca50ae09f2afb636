/**
 * Criterion S1: submitting the batch form issues one XML-RPC start call
 * carrying the twelve parameters in wire order with correct scalar types.
 *
 * The submitted document is asserted byte-for-byte against expectations
 * written out by hand here, not against the production encoder, so an
 * encoder regression cannot silently rewrite the expectation.
 */

import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { CoordinatorClient } from "../src/client.js";
import { FORM_DEFAULTS, startParams, validateForm } from "../src/form.js";
import { faultMessage } from "../src/app.js";
import { WireFault } from "../src/wire.js";
import { FixtureServer, fixtures } from "./helpers.js";

const EXPECTED_DEFAULT_START =
  '<?xml version="1.0"?>\n' +
  "<methodCall><methodName>start</methodName><params>" +
  "<param><value><int>70</int></value></param>" +
  "<param><value><int>300</int></value></param>" +
  "<param><value><double>8</double></value></param>" +
  "<param><value><double>-5</double></value></param>" +
  "<param><value><double>0.1</double></value></param>" +
  "<param><value><double>10</double></value></param>" +
  "<param><value><double>1.5</double></value></param>" +
  "<param><value><double>0</double></value></param>" +
  "<param><value><double>0</double></value></param>" +
  "<param><value><int>8</int></value></param>" +
  "<param><value><int>0</int></value></param>" +
  "<param><value><string>rfim</string></value></param>" +
  "</params></methodCall>";

const CUSTOM_FORM = {
  ...FORM_DEFAULTS,
  netSize: 16,
  steps: 40,
  hmax: 4.5,
  hmin: -4.5,
  dlevel: 0,
  econst: 1,
  sd: 0.75,
  sd1: 0.2,
  pp: 0.05,
  nofs: 3,
  runall: 1,
  binName: "rfim-sim",
};

const EXPECTED_CUSTOM_START =
  '<?xml version="1.0"?>\n' +
  "<methodCall><methodName>start</methodName><params>" +
  "<param><value><int>16</int></value></param>" +
  "<param><value><int>40</int></value></param>" +
  "<param><value><double>4.5</double></value></param>" +
  "<param><value><double>-4.5</double></value></param>" +
  "<param><value><double>0</double></value></param>" +
  "<param><value><double>1</double></value></param>" +
  "<param><value><double>0.75</double></value></param>" +
  "<param><value><double>0.2</double></value></param>" +
  "<param><value><double>0.05</double></value></param>" +
  "<param><value><int>3</int></value></param>" +
  "<param><value><int>1</int></value></param>" +
  "<param><value><string>rfim-sim</string></value></param>" +
  "</params></methodCall>";

const results = {
  defaultBytes: false,
  customBytes: false,
  busySurfaced: false,
  blockedClientSide: false,
};

describe("criterion S1: form submit wire contract", () => {
  let server: FixtureServer;

  beforeAll(async () => {
    server = new FixtureServer().on("start", fixtures.start_ok);
    await server.start();
  });

  afterAll(async () => {
    await server.stop();
    const ok = Object.values(results).every(Boolean);
    console.log(
      `S1 form submit issues a typed 12-parameter start call: ${ok ? "PASS" : "FAIL"}`,
    );
  });

  it("submits the default form as the exact expected document", async () => {
    const client = new CoordinatorClient(server.url);
    expect(validateForm(FORM_DEFAULTS)).toEqual({});
    const ack = await client.start(startParams(FORM_DEFAULTS));
    expect(ack).toBe(0);
    const calls = server.callsTo("start");
    expect(calls.length).toBe(1);
    expect(calls[0].body).toBe(EXPECTED_DEFAULT_START);
    results.defaultBytes = calls[0].body === EXPECTED_DEFAULT_START;
  });

  it("keeps order and types for non-default values", async () => {
    const client = new CoordinatorClient(server.url);
    expect(validateForm(CUSTOM_FORM)).toEqual({});
    await client.start(startParams(CUSTOM_FORM));
    const calls = server.callsTo("start");
    expect(calls[calls.length - 1].body).toBe(EXPECTED_CUSTOM_START);
    results.customBytes = calls[calls.length - 1].body === EXPECTED_CUSTOM_START;
  });

  it("surfaces a busy coordinator as a readable message, without retrying", async () => {
    const busy = new FixtureServer().on("start", fixtures.fault_busy);
    await busy.start();
    try {
      const client = new CoordinatorClient(busy.url);
      let caught: unknown = null;
      try {
        await client.start(startParams(FORM_DEFAULTS));
      } catch (exc) {
        caught = exc;
      }
      expect(caught).toBeInstanceOf(WireFault);
      const fault = caught as WireFault;
      expect(fault.code).toBe(1);
      expect(busy.callsTo("start").length).toBe(1);
      const message = faultMessage(fault);
      expect(message).toBe("A batch is already running; wait for it to finish.");
      expect(faultMessage(new WireFault(2, "binary 'x' not found"))).toContain("worker binary");
      results.busySurfaced = fault.code === 1 && busy.callsTo("start").length === 1;
    } finally {
      await busy.stop();
    }
  });

  it("blocks an invalid form before any wire traffic", async () => {
    const silent = new FixtureServer().on("start", fixtures.start_ok);
    await silent.start();
    try {
      const client = new CoordinatorClient(silent.url);
      const bad = { ...FORM_DEFAULTS, nofs: 0 };
      const problems = validateForm(bad);
      expect(problems).toHaveProperty("nofs");
      // the submit handler only calls start when validation passes
      if (Object.keys(problems).length === 0) {
        await client.start(startParams(bad));
      }
      expect(silent.requests.length).toBe(0);
      results.blockedClientSide =
        "nofs" in problems && silent.requests.length === 0;
    } finally {
      await silent.stop();
    }
  });
});
