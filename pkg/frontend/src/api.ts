// Thin typed client for the inspector service. The UI talks to the
// backend exclusively through these four calls and never mutates clip
// data, only annotation sidecars.

import { Annotation, ClipSummary, MetricsReport, Signals } from "./model.js";

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

async function parseError(response: Response): Promise<never> {
  let detail = `${response.status} ${response.statusText}`;
  try {
    const body = await response.json();
    if (typeof body.detail === "string") detail = body.detail;
  } catch {
    // non-JSON error body; keep the status line
  }
  throw new ApiError(response.status, detail);
}

export class InspectorApi {
  constructor(private base: string = "") {}

  async listClips(): Promise<ClipSummary[]> {
    const response = await fetch(`${this.base}/clips`);
    if (!response.ok) await parseError(response);
    return (await response.json()).clips;
  }

  async signals(clipId: string): Promise<Signals> {
    const response = await fetch(`${this.base}/clips/${encodeURIComponent(clipId)}/signals`);
    if (!response.ok) await parseError(response);
    return response.json();
  }

  /** Metrics, or null when the service reports no analyzable segment. */
  async metrics(clipId: string): Promise<MetricsReport | null> {
    const response = await fetch(`${this.base}/clips/${encodeURIComponent(clipId)}/metrics`);
    if (response.status === 422) return null;
    if (!response.ok) await parseError(response);
    return response.json();
  }

  async saveAnnotations(clipId: string, annotation: Annotation): Promise<void> {
    const response = await fetch(
      `${this.base}/clips/${encodeURIComponent(clipId)}/annotations`,
      {
        method: "PUT",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(annotation),
      }
    );
    if (!response.ok) await parseError(response);
  }
}
