/** Workbench state and its pure transitions.
 *
 * The state is a projection of the last service responses plus the
 * control values being edited. Nothing here recomputes segmentation
 * math; previews and histograms always come from the server verbatim.
 */

import type {
  ExtractResponse,
  Fill,
  HistogramsResponse,
  Method,
  SegmentParams,
  SegmentResponse,
} from "./api.js";

export const N_MIN = 1;
export const N_MAX = 15;
export const KAPPA_MIN = 0;
export const KAPPA_MAX = 4;
export const KAPPA_STEP = 0.05;

export interface Swatch {
  index: number;
  mean: number;
  selected: boolean;
}

export interface StepRecord {
  params: SegmentParams;
  mssim: number;
  previewPng: string;
  segmentMeans: number[];
}

export interface WorkbenchState {
  sessionId: string | null;
  params: SegmentParams;
  fill: Fill;
  swatches: Swatch[];
  current: StepRecord | null;
  previous: StepRecord | null;
  extracted: ExtractResponse | null;
  histograms: HistogramsResponse | null;
  inFlight: boolean;
  issuedSeq: number;
  appliedSeq: number;
}

export function initialState(): WorkbenchState {
  return {
    sessionId: null,
    params: { method: "m1", n: 1, kappa1: 1, kappa2: 1 },
    fill: "black",
    swatches: [],
    current: null,
    previous: null,
    extracted: null,
    histograms: null,
    inFlight: false,
    issuedSeq: 0,
    appliedSeq: 0,
  };
}

/** Step the threshold count by 2 in either direction, staying odd. */
export function stepN(state: WorkbenchState, direction: 1 | -1): WorkbenchState {
  const next = Math.min(N_MAX, Math.max(N_MIN, state.params.n + 2 * direction));
  return { ...state, params: { ...state.params, n: next } };
}

/** Clamp to [0, 4] and snap to the 0.05 slider grid. */
export function snapKappa(value: number): number {
  const clamped = Math.min(KAPPA_MAX, Math.max(KAPPA_MIN, value));
  return Math.round(clamped / KAPPA_STEP) * KAPPA_STEP;
}

export function setKappa(
  state: WorkbenchState,
  which: "kappa1" | "kappa2",
  value: number,
): WorkbenchState {
  return { ...state, params: { ...state.params, [which]: snapKappa(value) } };
}

export function setMethod(state: WorkbenchState, method: Method): WorkbenchState {
  return { ...state, params: { ...state.params, method } };
}

export function setFill(state: WorkbenchState, fill: Fill): WorkbenchState {
  return { ...state, fill };
}

export function toggleSegment(state: WorkbenchState, index: number): WorkbenchState {
  return {
    ...state,
    swatches: state.swatches.map((s) =>
      s.index === index ? { ...s, selected: !s.selected } : s,
    ),
  };
}

export function selectedSegments(state: WorkbenchState): number[] {
  return state.swatches.filter((s) => s.selected).map((s) => s.index);
}

/** Extraction needs at least one chosen segment. */
export function canExtract(state: WorkbenchState): boolean {
  return !state.inFlight && state.current !== null && selectedSegments(state).length > 0;
}

/** Controls are disabled while a request is in flight. */
export function controlsEnabled(state: WorkbenchState): boolean {
  return !state.inFlight;
}

/** Issue a new request ticket; any earlier unanswered request becomes stale. */
export function beginRequest(state: WorkbenchState): {
  state: WorkbenchState;
  seq: number;
} {
  const seq = state.issuedSeq + 1;
  return { state: { ...state, issuedSeq: seq, inFlight: true }, seq };
}

function isStale(state: WorkbenchState, seq: number): boolean {
  return seq !== state.issuedSeq || seq <= state.appliedSeq;
}

/** Fold a segmentation response into the state; stale responses are dropped. */
export function applySegmentResponse(
  state: WorkbenchState,
  seq: number,
  response: SegmentResponse,
): WorkbenchState {
  if (isStale(state, seq)) {
    return state;
  }
  const record: StepRecord = {
    params: {
      method: response.thresholds.method,
      n: response.thresholds.n,
      kappa1: response.thresholds.kappa1,
      kappa2: response.thresholds.kappa2,
    },
    mssim: response.mssim,
    previewPng: response.preview_png,
    segmentMeans: response.thresholds.segment_means,
  };
  return {
    ...state,
    inFlight: false,
    appliedSeq: seq,
    previous: state.current,
    current: record,
    extracted: null,
    swatches: response.thresholds.segment_means.map((mean, index) => ({
      index,
      mean,
      selected: false,
    })),
  };
}

export function applyExtractResponse(
  state: WorkbenchState,
  seq: number,
  response: ExtractResponse,
): WorkbenchState {
  if (isStale(state, seq)) {
    return state;
  }
  return { ...state, inFlight: false, appliedSeq: seq, extracted: response };
}

export function applyHistograms(
  state: WorkbenchState,
  histograms: HistogramsResponse,
): WorkbenchState {
  return { ...state, histograms };
}

/** A failed or aborted request re-enables the controls without data. */
export function requestFailed(state: WorkbenchState, seq: number): WorkbenchState {
  if (seq !== state.issuedSeq) {
    return state;
  }
  return { ...state, inFlight: false };
}
