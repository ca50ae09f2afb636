/**
 * Test fixtures and a scripted coordinator stand-in.
 *
 * batch_script.json holds genuine wire documents captured from a live
 * coordinator (see fixtures/generate_fixtures.py), so decoder tests run
 * against real producer output, not hand-typed approximations. The
 * FixtureServer replays those documents over HTTP, routing each POST on
 * its <methodName> and answering scripted bodies in sequence (the last
 * one repeats), while recording every raw request body for assertions.
 */

import { createServer, type Server } from "node:http";
import type { AddressInfo } from "node:net";
import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

export interface StageFixture {
  progress: string;
  res_sum: string;
  loop_mean: string;
}

export interface WireFixtures {
  steps: number;
  runs: number;
  fault_badbin: string;
  start_ok: string;
  fault_busy: string;
  progress_initial: string;
  res_sum_initial: string;
  stages: StageFixture[];
  export_csv_xml: string;
  export_csv_text: string;
}

const here = dirname(fileURLToPath(import.meta.url));

export const fixtures: WireFixtures = JSON.parse(
  readFileSync(join(here, "fixtures", "batch_script.json"), "utf-8"),
);

export interface CapturedRequest {
  method: string;
  body: string;
}

function unknownMethodXml(method: string): string {
  return (
    '<?xml version="1.0"?>\n' +
    "<methodResponse><fault><value><struct>" +
    "<member><name>faultCode</name><value><int>-32601</int></value></member>" +
    `<member><name>faultString</name><value><string>method ${method} not found</string></value></member>` +
    "</struct></value></fault></methodResponse>"
  );
}

export class FixtureServer {
  readonly requests: CapturedRequest[] = [];
  url = "";
  private failuresRemaining = 0;
  private readonly scripts = new Map<string, { bodies: string[]; cursor: number }>();
  private readonly server: Server;

  constructor() {
    this.server = createServer((req, res) => {
      const chunks: Buffer[] = [];
      req.on("data", (chunk: Buffer) => chunks.push(chunk));
      req.on("end", () => {
        const body = Buffer.concat(chunks).toString("utf-8");
        const match = /<methodName>([^<]*)<\/methodName>/.exec(body);
        const method = match ? match[1] : "";
        this.requests.push({ method, body });
        if (this.failuresRemaining > 0) {
          this.failuresRemaining -= 1;
          res.writeHead(500, { "Content-Type": "text/plain" });
          res.end("injected failure");
          return;
        }
        const script = this.scripts.get(method);
        const xml = script
          ? script.bodies[Math.min(script.cursor++, script.bodies.length - 1)]
          : unknownMethodXml(method);
        res.writeHead(200, {
          "Content-Type": "text/xml",
          "Content-Length": Buffer.byteLength(xml),
        });
        res.end(xml);
      });
    });
  }

  /** Script responses for one method; replayed in order, last repeats. */
  on(method: string, ...bodies: string[]): this {
    this.scripts.set(method, { bodies, cursor: 0 });
    return this;
  }

  /** Answer the next n requests with HTTP 500 (scripts untouched). */
  failNextRequests(n: number): void {
    this.failuresRemaining = n;
  }

  callsTo(method: string): CapturedRequest[] {
    return this.requests.filter((request) => request.method === method);
  }

  async start(): Promise<string> {
    await new Promise<void>((resolve) => this.server.listen(0, "127.0.0.1", resolve));
    const address = this.server.address() as AddressInfo;
    this.url = `http://127.0.0.1:${address.port}/RPC2`;
    return this.url;
  }

  async stop(): Promise<void> {
    await new Promise<void>((resolve, reject) =>
      this.server.close((err) => (err ? reject(err) : resolve())),
    );
  }
}

/** First two <double> payloads of a wire document, read without the codec. */
export function firstTwoDoubles(xml: string): [number, number] {
  const values = [...xml.matchAll(/<double>([^<]+)<\/double>/g)].map((m) => Number(m[1]));
  if (values.length < 2) throw new Error("fixture has fewer than two doubles");
  return [values[0], values[1]];
}
