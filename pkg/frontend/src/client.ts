/**
 * Typed coordinator client: one POST text/xml per call, decoded through
 * the wire codec. Faults surface as WireFault, transport problems as
 * plain errors from fetch.
 */

import { WireFormatError, WireParam, WireValue, decodeResponse, encodeCall } from "./wire.js";

export interface Progress {
  created: number;
  finished: number;
  running: number;
}

export interface MetricStat {
  mean: number;
  stderr: number;
}

export interface LoopPoint {
  h: number;
  mMean: number;
  mStderr: number;
}

export const METRIC_LABELS = [
  "exchange bias",
  "coercivity",
  "crossing (desc)",
  "crossing (asc)",
] as const;

export class CoordinatorClient {
  constructor(
    private readonly url: string,
    private readonly fetchImpl: typeof fetch = fetch,
  ) {}

  async call(method: string, params: WireParam[] = []): Promise<WireValue> {
    const response = await this.fetchImpl(this.url, {
      method: "POST",
      headers: { "Content-Type": "text/xml" },
      body: encodeCall(method, params),
    });
    if (!response.ok) {
      throw new Error(`coordinator answered HTTP ${response.status}`);
    }
    return decodeResponse(await response.text());
  }

  async start(params: WireParam[]): Promise<number> {
    return asNumber(await this.call("start", params));
  }

  async progress(): Promise<Progress> {
    const value = await this.call("progress");
    if (typeof value !== "object" || value === null || Array.isArray(value)) {
      throw new WireFormatError("progress: expected a struct");
    }
    return {
      created: asNumber(value.created),
      finished: asNumber(value.finished),
      running: asNumber(value.running),
    };
  }

  async finAsFar(): Promise<number> {
    return asNumber(await this.call("fin_as_far"));
  }

  /** Empty before the first finish; otherwise one [mean, stderr] per metric. */
  async resSum(): Promise<MetricStat[]> {
    const value = await this.call("res_sum");
    if (!Array.isArray(value)) throw new WireFormatError("res_sum: expected an array");
    return value.map((row) => {
      if (!Array.isArray(row) || row.length !== 2) {
        throw new WireFormatError("res_sum: expected [mean, stderr] rows");
      }
      return { mean: asNumber(row[0]), stderr: asNumber(row[1]) };
    });
  }

  async loopMean(): Promise<LoopPoint[]> {
    const value = await this.call("loop_mean");
    if (!Array.isArray(value)) throw new WireFormatError("loop_mean: expected an array");
    return value.map((row) => {
      if (!Array.isArray(row) || row.length !== 3) {
        throw new WireFormatError("loop_mean: expected [h, mean, stderr] rows");
      }
      return { h: asNumber(row[0]), mMean: asNumber(row[1]), mStderr: asNumber(row[2]) };
    });
  }

  async exportCsv(): Promise<string> {
    const value = await this.call("export_csv");
    if (typeof value !== "string") {
      throw new WireFormatError("export_csv: expected a string");
    }
    return value;
  }
}

function asNumber(value: WireValue): number {
  if (typeof value !== "number") {
    throw new WireFormatError(`expected a number, got ${typeof value}`);
  }
  return value;
}
