/**
 * CSV export: pulls the aggregate table from the coordinator and hands it
 * to a sink. The default sink triggers a browser download; tests inject a
 * capturing sink instead.
 */

import { CoordinatorClient } from "./client.js";

export interface CsvSink {
  (filename: string, text: string): void;
}

/** Browser sink: wrap the text in a Blob and click a temporary anchor. */
export function downloadSink(filename: string, text: string): void {
  const blob = new Blob([text], { type: "text/csv" });
  const url = URL.createObjectURL(blob);
  const anchor = document.createElement("a");
  anchor.href = url;
  anchor.download = filename;
  anchor.click();
  URL.revokeObjectURL(url);
}

/** Fetch the CSV snapshot and deliver it unmodified to the sink. */
export async function exportCsv(
  client: CoordinatorClient,
  sink: CsvSink = downloadSink,
  filename = "batch_summary.csv",
): Promise<string> {
  const text = await client.exportCsv();
  sink(filename, text);
  return text;
}
