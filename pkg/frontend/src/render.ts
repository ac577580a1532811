/** Pure view-model builders for the workbench panels.
 *
 * Each function maps state to a plain descriptor the DOM layer paints,
 * which keeps the rendering logic testable without a browser.
 */

import type { StepRecord, Swatch, WorkbenchState } from "./state.js";

export interface SwatchView {
  index: number;
  mean: number;
  selected: boolean;
  /** Gray chip color, e.g. "rgb(127, 127, 127)". */
  css: string;
  label: string;
}

/** One clickable chip per segment: N thresholds yield N+1 swatches. */
export function renderSwatches(swatches: readonly Swatch[]): SwatchView[] {
  return swatches.map((s) => ({
    index: s.index,
    mean: s.mean,
    selected: s.selected,
    css: `rgb(${s.mean}, ${s.mean}, ${s.mean})`,
    label: `segment ${s.index} (mean ${s.mean})`,
  }));
}

export interface Spike {
  x: number;
  count: number;
}

export interface HistogramPanel {
  original: number[];
  /** Spike overlay of the segmented histogram; null before segmenting. */
  spikes: Spike[] | null;
}

/** Original curve plus the segmented spike overlay, one spike per
 * populated segment mean. */
export function renderHistogramPanel(state: WorkbenchState): HistogramPanel {
  if (!state.histograms) {
    return { original: [], spikes: null };
  }
  const { original, segmented } = state.histograms;
  if (!segmented) {
    return { original, spikes: null };
  }
  const spikes = segmented
    .map((count, x) => ({ x, count }))
    .filter((s) => s.count > 0);
  return { original, spikes };
}

export interface ComparisonPanel {
  previous: StepRecord | null;
  current: StepRecord | null;
}

/** Side-by-side previous vs current result for subjective comparison. */
export function renderComparison(state: WorkbenchState): ComparisonPanel {
  return { previous: state.previous, current: state.current };
}

export interface ControlsView {
  n: number;
  kappa1: number;
  kappa2: number;
  method: string;
  enabled: boolean;
  extractEnabled: boolean;
}

export function renderControls(
  state: WorkbenchState,
  extractEnabled: boolean,
): ControlsView {
  return {
    n: state.params.n,
    kappa1: state.params.kappa1,
    kappa2: state.params.kappa2,
    method: state.params.method,
    enabled: !state.inFlight,
    extractEnabled,
  };
}

export function pngDataUrl(base64: string): string {
  return `data:image/png;base64,${base64}`;
}
