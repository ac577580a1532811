/** Headless client test against the live HTTP service.
 *
 * Spawns the Python service, uploads a two-spike fixture image, and
 * drives the same state machine the browser uses, asserting the wire
 * contract: N+1 swatches and the exact chosen segment set on extract.
 */

import { spawn, execFileSync, type ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { WorkbenchClient, type FetchLike } from "../src/api.js";
import {
  applySegmentResponse,
  beginRequest,
  initialState,
  selectedSegments,
  toggleSegment,
  type WorkbenchState,
} from "../src/state.js";

const PORT = 8473;
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;
let workdir: string;
let fixturePng: Uint8Array;

async function waitForServer(): Promise<void> {
  for (let i = 0; i < 100; i += 1) {
    try {
      const resp = await fetch(`${BASE}/sessions/probe/histograms`);
      if (resp.status === 404) return;
    } catch {
      /* not listening yet */
    }
    await new Promise((resolve) => setTimeout(resolve, 100));
  }
  throw new Error("service did not come up");
}

beforeAll(async () => {
  workdir = mkdtempSync(join(tmpdir(), "workbench-"));
  const pngPath = join(workdir, "spikes.png");
  execFileSync("python3", [
    "-c",
    [
      "import sys, numpy as np",
      "from histoseg import RgbImage, encode_png",
      "g = np.zeros((64, 64), dtype=np.uint8)",
      "g[:, :32] = 50; g[:, 32:] = 200",
      "rgb = RgbImage(np.stack([g, g, g], axis=-1))",
      `open(${JSON.stringify(pngPath)}, "wb").write(encode_png(rgb))`,
    ].join("\n"),
  ]);
  fixturePng = new Uint8Array(readFileSync(pngPath));

  server = spawn("python3", [
    "-c",
    [
      "import uvicorn",
      "from histoseg.service import create_app",
      `uvicorn.run(create_app(), host="127.0.0.1", port=${PORT}, log_level="warning")`,
    ].join("\n"),
  ], { stdio: "ignore" });
  await waitForServer();
}, 30000);

afterAll(() => {
  server?.kill();
  rmSync(workdir, { recursive: true, force: true });
});

describe("workbench against the live service", () => {
  it("renders N+1 swatches from a real segmentation response", async () => {
    const client = new WorkbenchClient(BASE);
    const id = await client.createSession(fixturePng);
    const resp = await client.segment(id, { method: "m1", n: 5, kappa1: 1, kappa2: 1 });

    const { state, seq } = beginRequest({ ...initialState(), sessionId: id });
    const s = applySegmentResponse(state, seq, resp);
    expect(s.swatches).toHaveLength(6);
    expect(s.swatches.map((w) => w.mean)).toEqual(resp.thresholds.segment_means);
  });

  it("submits exactly the chosen segment set on extract", async () => {
    const bodies: unknown[] = [];
    const recordingFetch: FetchLike = async (input, init) => {
      if (typeof init?.body === "string") bodies.push(JSON.parse(init.body));
      return fetch(input, init);
    };
    const client = new WorkbenchClient(BASE, recordingFetch);
    const id = await client.createSession(fixturePng);
    const resp = await client.segment(id, { method: "m2", n: 3, kappa1: 1, kappa2: 1 });

    const { state, seq } = beginRequest({ ...initialState(), sessionId: id });
    let s: WorkbenchState = applySegmentResponse(state, seq, resp);
    s = toggleSegment(s, 0);
    s = toggleSegment(s, 3);
    s = toggleSegment(s, 0); // change of mind: deselect again
    s = toggleSegment(s, 1);

    const chosen = selectedSegments(s);
    expect(chosen).toEqual([1, 3]);
    const extract = await client.extract(id, chosen, "black");
    expect(extract.extracted_png.length).toBeGreaterThan(0);

    const sent = bodies.find(
      (b): b is { segments: number[]; fill: string } =>
        typeof b === "object" && b !== null && "segments" in b,
    );
    expect(sent).toBeDefined();
    expect(sent!.segments).toEqual([1, 3]);
    expect(sent!.fill).toBe("black");
  });

  it("shows identical previews for both methodologies at n=1", async () => {
    const client = new WorkbenchClient(BASE);
    const id = await client.createSession(fixturePng);
    const a = await client.segment(id, { method: "m1", n: 1, kappa1: 1, kappa2: 1 });
    const b = await client.segment(id, { method: "m2", n: 1, kappa1: 1, kappa2: 1 });
    expect(a.preview_png).toBe(b.preview_png);
    expect(a.thresholds.thresholds).toEqual(b.thresholds.thresholds);
  });

  it("exposes the delta-spike histogram after segmenting", async () => {
    const client = new WorkbenchClient(BASE);
    const id = await client.createSession(fixturePng);
    const resp = await client.segment(id, { method: "m1", n: 5, kappa1: 1, kappa2: 1 });
    const hist = await client.histograms(id);
    expect(hist.original).toHaveLength(256);
    const populated = hist.segmented!
      .map((count, x) => ({ count, x }))
      .filter((s) => s.count > 0);
    expect(populated.length).toBeLessThanOrEqual(6);
    for (const spike of populated) {
      expect(resp.thresholds.segment_means).toContain(spike.x);
    }
  });

  it("rejects an even threshold count with a client error", async () => {
    const client = new WorkbenchClient(BASE);
    const id = await client.createSession(fixturePng);
    await expect(
      client.segment(id, { method: "m1", n: 4, kappa1: 1, kappa2: 1 }),
    ).rejects.toMatchObject({ status: 422 });
  });
});
