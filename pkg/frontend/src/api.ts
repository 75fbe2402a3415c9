/** Wire types and HTTP client for the compile-and-mesh service. */

export interface MeshPayload {
  positions: number[];
  triangles: number[];
  normals: number[];
  path: number[];
}

export interface DiagnosticPayload {
  message: string;
  line: number;
  column: number;
}

export type RunResponse =
  | { ok: true; mesh: MeshPayload }
  | { ok: false; diagnostics: DiagnosticPayload[] };

export interface TubeSpec {
  sides?: number;
  radius?: number;
  closure_epsilon?: number;
}

export interface GridSpec {
  rows: number;
  cols: number;
  wrap_rows?: boolean;
  wrap_cols?: boolean;
}

export interface RunRequestBody {
  source: string;
  mode?: "polyline" | "parametric" | "triangles";
  tube?: TubeSpec;
  grid?: GridSpec;
  limits?: { max_steps?: number; max_vertices?: number };
}

/** Minimal structural fetch so tests can inject fakes. */
export interface HttpResponse {
  status: number;
  json(): Promise<unknown>;
}

export type HttpClient = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<HttpResponse>;

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
  }
}

export async function runProgram(
  http: HttpClient,
  baseUrl: string,
  body: RunRequestBody,
): Promise<RunResponse> {
  const response = await http(`${baseUrl}/api/run`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(body),
  });
  if (response.status !== 200 && response.status !== 422) {
    throw new ApiError(response.status, `run failed with HTTP ${response.status}`);
  }
  return (await response.json()) as RunResponse;
}

export interface LessonMovieWire {
  version: number;
  initial: string;
  audio_ref: string | null;
  deltas: { t: number; o: number; d: number; i: string }[];
}

export async function fetchLesson(
  http: HttpClient,
  baseUrl: string,
  id: string,
): Promise<LessonMovieWire> {
  const response = await http(`${baseUrl}/api/lessons/${encodeURIComponent(id)}`);
  if (response.status !== 200) {
    throw new ApiError(response.status, `lesson ${id} not found`);
  }
  return (await response.json()) as LessonMovieWire;
}
