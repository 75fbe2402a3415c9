/** Playground state and its pure transitions.
 *
 * Rendering derives entirely from (mesh, viewMode, camera); responses are
 * tagged with a sequence number so a slow earlier run can never overwrite a
 * newer one.
 */

import {
  DiagnosticPayload,
  HttpClient,
  MeshPayload,
  RunRequestBody,
  RunResponse,
  runProgram,
} from "./api.js";

export type ViewMode = "solid" | "wireframe";

export interface Camera {
  azimuth: number;
  elevation: number;
  distance: number;
}

export interface PlaygroundState {
  source: string;
  mesh: MeshPayload | null;
  diagnostics: DiagnosticPayload[];
  banner: string | null;
  viewMode: ViewMode;
  camera: Camera;
  /** Sequence number of the most recently issued run. */
  runSeq: number;
}

export const initialState: PlaygroundState = {
  source: "",
  mesh: null,
  diagnostics: [],
  banner: null,
  viewMode: "solid",
  camera: { azimuth: 0.6, elevation: 0.4, distance: 40 },
  runSeq: 0,
};

export function setSource(state: PlaygroundState, source: string): PlaygroundState {
  return { ...state, source };
}

export function beginRun(state: PlaygroundState): [PlaygroundState, number] {
  const seq = state.runSeq + 1;
  return [{ ...state, runSeq: seq }, seq];
}

export function applyRunResponse(
  state: PlaygroundState,
  seq: number,
  response: RunResponse,
): PlaygroundState {
  if (seq < state.runSeq) {
    return state; // stale response, a newer run is in flight or displayed
  }
  if (response.ok) {
    return { ...state, mesh: response.mesh, diagnostics: [], banner: null };
  }
  // Diagnostics replace the gutter, but the previous mesh stays on screen
  // and the editor content is untouched.
  return { ...state, diagnostics: response.diagnostics, banner: null };
}

export function applyNetworkFailure(
  state: PlaygroundState,
  seq: number,
  message: string,
): PlaygroundState {
  if (seq < state.runSeq) {
    return state;
  }
  return { ...state, banner: message };
}

export function clearScene(state: PlaygroundState): PlaygroundState {
  return { ...state, mesh: null, diagnostics: [], banner: null };
}

export function toggleView(state: PlaygroundState): PlaygroundState {
  return { ...state, viewMode: state.viewMode === "solid" ? "wireframe" : "solid" };
}

export function orbitCamera(
  state: PlaygroundState,
  dAzimuth: number,
  dElevation: number,
  dDistance = 0,
): PlaygroundState {
  const elevation = Math.max(-1.5, Math.min(1.5, state.camera.elevation + dElevation));
  const distance = Math.max(0.1, state.camera.distance + dDistance);
  return {
    ...state,
    camera: { azimuth: state.camera.azimuth + dAzimuth, elevation, distance },
  };
}

export function triangleCount(state: PlaygroundState): number {
  return state.mesh ? state.mesh.triangles.length / 3 : 0;
}

export interface Store {
  get(): PlaygroundState;
  set(state: PlaygroundState): void;
}

export interface RunOptions {
  mode?: RunRequestBody["mode"];
  tube?: RunRequestBody["tube"];
  grid?: RunRequestBody["grid"];
}

/** Run the current editor text; empty source just clears the scene. */
export async function runCurrent(
  store: Store,
  http: HttpClient,
  baseUrl: string,
  options: RunOptions = {},
): Promise<void> {
  const state = store.get();
  if (state.source.trim() === "") {
    store.set(clearScene(state));
    return;
  }
  const [started, seq] = beginRun(state);
  store.set(started);
  try {
    const response = await runProgram(http, baseUrl, {
      source: state.source,
      mode: options.mode ?? "polyline",
      tube: options.tube,
      grid: options.grid,
    });
    store.set(applyRunResponse(store.get(), seq, response));
  } catch (error) {
    const message = error instanceof Error ? error.message : String(error);
    store.set(applyNetworkFailure(store.get(), seq, message));
  }
}

export function makeStore(state: PlaygroundState = initialState): Store & {
  subscribe(listener: (s: PlaygroundState) => void): void;
} {
  let current = state;
  const listeners: ((s: PlaygroundState) => void)[] = [];
  return {
    get: () => current,
    set(next) {
      current = next;
      for (const listener of listeners) listener(next);
    },
    subscribe(listener) {
      listeners.push(listener);
    },
  };
}
