/** Browser entry point: wires the DOM to the state machine and client. */

import { WorkbenchClient } from "./api.js";
import {
  pngDataUrl,
  renderComparison,
  renderControls,
  renderHistogramPanel,
  renderSwatches,
} from "./render.js";
import {
  applyExtractResponse,
  applyHistograms,
  applySegmentResponse,
  beginRequest,
  canExtract,
  initialState,
  requestFailed,
  selectedSegments,
  setFill,
  setKappa,
  setMethod,
  stepN,
  toggleSegment,
  type WorkbenchState,
} from "./state.js";

const client = new WorkbenchClient("");
let state: WorkbenchState = initialState();

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function update(next: WorkbenchState): void {
  state = next;
  paint();
}

async function runSegment(): Promise<void> {
  if (!state.sessionId || state.inFlight) return;
  const { state: issued, seq } = beginRequest(state);
  update(issued);
  try {
    const resp = await client.segment(state.sessionId, state.params);
    update(applySegmentResponse(state, seq, resp));
    const hist = await client.histograms(state.sessionId);
    update(applyHistograms(state, hist));
  } catch (err) {
    update(requestFailed(state, seq));
    reportError(err);
  }
}

async function runExtract(): Promise<void> {
  if (!state.sessionId || !canExtract(state)) return;
  const { state: issued, seq } = beginRequest(state);
  update(issued);
  try {
    const resp = await client.extract(
      state.sessionId,
      selectedSegments(state),
      state.fill,
    );
    update(applyExtractResponse(state, seq, resp));
  } catch (err) {
    update(requestFailed(state, seq));
    reportError(err);
  }
}

function reportError(err: unknown): void {
  el<HTMLElement>("status").textContent = String(err);
}

function paint(): void {
  const controls = renderControls(state, canExtract(state));
  el<HTMLInputElement>("n-value").value = String(controls.n);
  el<HTMLInputElement>("kappa1").value = String(controls.kappa1);
  el<HTMLInputElement>("kappa2").value = String(controls.kappa2);
  el<HTMLOutputElement>("kappa1-out").textContent = controls.kappa1.toFixed(2);
  el<HTMLOutputElement>("kappa2-out").textContent = controls.kappa2.toFixed(2);
  for (const id of ["n-up", "n-down", "segment", "method"]) {
    el<HTMLButtonElement>(id).toggleAttribute("disabled", !controls.enabled);
  }
  el<HTMLButtonElement>("extract").toggleAttribute(
    "disabled",
    !controls.extractEnabled,
  );
  el<HTMLButtonElement>("method").textContent = controls.method;

  const swatchRow = el<HTMLElement>("swatches");
  swatchRow.replaceChildren(
    ...renderSwatches(state.swatches).map((view) => {
      const chip = document.createElement("button");
      chip.className = view.selected ? "swatch selected" : "swatch";
      chip.style.background = view.css;
      chip.title = view.label;
      chip.addEventListener("click", () =>
        update(toggleSegment(state, view.index)),
      );
      return chip;
    }),
  );

  const comparison = renderComparison(state);
  el<HTMLImageElement>("current-preview").src = comparison.current
    ? pngDataUrl(comparison.current.previewPng)
    : "";
  el<HTMLImageElement>("previous-preview").src = comparison.previous
    ? pngDataUrl(comparison.previous.previewPng)
    : "";
  el<HTMLElement>("current-score").textContent = comparison.current
    ? `MSSIM ${comparison.current.mssim.toFixed(4)}`
    : "";
  el<HTMLImageElement>("extracted-preview").src = state.extracted
    ? pngDataUrl(state.extracted.extracted_png)
    : "";

  paintHistogram();
}

function paintHistogram(): void {
  const panel = renderHistogramPanel(state);
  const canvas = el<HTMLCanvasElement>("histogram");
  const ctx = canvas.getContext("2d");
  if (!ctx || panel.original.length === 0) return;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const peak = Math.max(...panel.original, 1);
  ctx.fillStyle = "#999";
  panel.original.forEach((count, x) => {
    const h = (count / peak) * canvas.height;
    ctx.fillRect(x * (canvas.width / 256), canvas.height - h, 2, h);
  });
  if (panel.spikes) {
    ctx.fillStyle = "#d33";
    for (const spike of panel.spikes) {
      const h = (spike.count / peak) * canvas.height;
      ctx.fillRect(spike.x * (canvas.width / 256), canvas.height - h, 2, h);
    }
  }
}

function bind(): void {
  el<HTMLInputElement>("file").addEventListener("change", async (event) => {
    const input = event.target as HTMLInputElement;
    const file = input.files?.[0];
    if (!file) return;
    const bytes = new Uint8Array(await file.arrayBuffer());
    try {
      const id = await client.createSession(bytes);
      update({ ...initialState(), sessionId: id });
      await runSegment();
    } catch (err) {
      reportError(err);
    }
  });
  el<HTMLButtonElement>("n-up").addEventListener("click", () => {
    update(stepN(state, 1));
    void runSegment();
  });
  el<HTMLButtonElement>("n-down").addEventListener("click", () => {
    update(stepN(state, -1));
    void runSegment();
  });
  for (const which of ["kappa1", "kappa2"] as const) {
    el<HTMLInputElement>(which).addEventListener("change", (event) => {
      update(setKappa(state, which, Number((event.target as HTMLInputElement).value)));
      void runSegment();
    });
  }
  el<HTMLButtonElement>("method").addEventListener("click", () => {
    const order = ["m1", "m2", "otsu"] as const;
    const next = order[(order.indexOf(state.params.method) + 1) % order.length]!;
    update(setMethod(state, next));
    void runSegment();
  });
  el<HTMLSelectElement>("fill").addEventListener("change", (event) => {
    update(setFill(state, (event.target as HTMLSelectElement).value as "black" | "white"));
  });
  el<HTMLButtonElement>("segment").addEventListener("click", () => void runSegment());
  el<HTMLButtonElement>("extract").addEventListener("click", () => void runExtract());
}

bind();
paint();
