/** Software renderer: turns (mesh, view mode, camera) into 2-D draw commands.
 *
 * Keeping projection and shading as pure functions makes the render path
 * testable without a canvas; main.ts only replays the command list.
 */

import { MeshPayload } from "./api.js";
import { Camera, ViewMode } from "./state.js";

export interface Viewport {
  width: number;
  height: number;
}

export type DrawCommand =
  | { kind: "line"; points: [number, number][]; color: string; width: number }
  | { kind: "polygon"; points: [number, number][]; fill: string; stroke: string };

type Vec3 = [number, number, number];

/** Undirected, deduplicated edges of an indexed triangle list. */
export function uniqueEdges(triangles: number[]): [number, number][] {
  const seen = new Set<number>();
  const edges: [number, number][] = [];
  for (let t = 0; t < triangles.length; t += 3) {
    const tri = [triangles[t], triangles[t + 1], triangles[t + 2]];
    for (let e = 0; e < 3; e++) {
      const a = tri[e];
      const b = tri[(e + 1) % 3];
      const lo = Math.min(a, b);
      const hi = Math.max(a, b);
      const key = lo * 0x100000 + hi;
      if (!seen.has(key)) {
        seen.add(key);
        edges.push([lo, hi]);
      }
    }
  }
  return edges;
}

export function meshCenter(mesh: MeshPayload): Vec3 {
  const source = mesh.positions.length ? mesh.positions : mesh.path;
  const n = source.length / 3;
  if (n === 0) {
    return [0, 0, 0];
  }
  const c: Vec3 = [0, 0, 0];
  for (let i = 0; i < source.length; i += 3) {
    c[0] += source[i];
    c[1] += source[i + 1];
    c[2] += source[i + 2];
  }
  return [c[0] / n, c[1] / n, c[2] / n];
}

interface Projected {
  screen: [number, number][];
  depth: number[];
}

function project(
  positions: number[],
  center: Vec3,
  camera: Camera,
  viewport: Viewport,
): Projected {
  const { azimuth, elevation, distance } = camera;
  const eye: Vec3 = [
    center[0] + distance * Math.cos(elevation) * Math.sin(azimuth),
    center[1] - distance * Math.cos(elevation) * Math.cos(azimuth),
    center[2] + distance * Math.sin(elevation),
  ];
  const forward = normalize(sub(center, eye));
  let right = cross(forward, [0, 0, 1]);
  if (length(right) < 1e-9) {
    right = cross(forward, [0, 1, 0]);
  }
  right = normalize(right);
  const up = cross(right, forward);

  const focal = 1.2;
  const scale = Math.min(viewport.width, viewport.height) / 2;
  const cx = viewport.width / 2;
  const cy = viewport.height / 2;

  const screen: [number, number][] = [];
  const depth: number[] = [];
  for (let i = 0; i < positions.length; i += 3) {
    const d = sub([positions[i], positions[i + 1], positions[i + 2]], eye);
    const z = dot(d, forward);
    const safe = Math.max(z, 0.05);
    screen.push([
      cx + (dot(d, right) / safe) * focal * scale,
      cy - (dot(d, up) / safe) * focal * scale,
    ]);
    depth.push(z);
  }
  return { screen, depth };
}

export function buildScene(
  mesh: MeshPayload | null,
  viewMode: ViewMode,
  camera: Camera,
  viewport: Viewport,
): DrawCommand[] {
  if (mesh === null || mesh.positions.length === 0) {
    return [];
  }
  const center = meshCenter(mesh);
  const { screen, depth } = project(mesh.positions, center, camera, viewport);

  if (viewMode === "wireframe") {
    return uniqueEdges(mesh.triangles).map(([a, b]) => ({
      kind: "line" as const,
      points: [screen[a], screen[b]],
      color: "#9ecbff",
      width: 1,
    }));
  }

  // Painter's algorithm: farthest triangles first, flat shading from the
  // exported vertex normals.
  const light = normalize([0.4, -0.6, 0.7]);
  const order: { index: number; z: number }[] = [];
  for (let t = 0; t < mesh.triangles.length; t += 3) {
    const z =
      (depth[mesh.triangles[t]] +
        depth[mesh.triangles[t + 1]] +
        depth[mesh.triangles[t + 2]]) / 3;
    order.push({ index: t, z });
  }
  order.sort((a, b) => b.z - a.z);

  return order.map(({ index }) => {
    const ia = mesh.triangles[index];
    const ib = mesh.triangles[index + 1];
    const ic = mesh.triangles[index + 2];
    const normal = normalize([
      mesh.normals[3 * ia] + mesh.normals[3 * ib] + mesh.normals[3 * ic],
      mesh.normals[3 * ia + 1] + mesh.normals[3 * ib + 1] + mesh.normals[3 * ic + 1],
      mesh.normals[3 * ia + 2] + mesh.normals[3 * ib + 2] + mesh.normals[3 * ic + 2],
    ]);
    const shade = 0.35 + 0.65 * Math.abs(dot(normal, light));
    return {
      kind: "polygon" as const,
      points: [screen[ia], screen[ib], screen[ic]],
      fill: shadeColor(shade),
      stroke: "rgba(20,40,60,0.25)",
    };
  });
}

/** The traced polyline, drawn over the mesh with the same projection. */
export function buildPathOverlay(
  mesh: MeshPayload,
  camera: Camera,
  viewport: Viewport,
): DrawCommand[] {
  if (mesh.path.length < 6) {
    return [];
  }
  const center = meshCenter(mesh);
  const { screen } = project(mesh.path, center, camera, viewport);
  return [{ kind: "line", points: screen, color: "#ff7b72", width: 1.5 }];
}

function shadeColor(shade: number): string {
  const r = Math.round(70 + 110 * shade);
  const g = Math.round(95 + 120 * shade);
  const b = Math.round(130 + 125 * shade);
  return `rgb(${r},${g},${b})`;
}

function sub(a: Vec3, b: Vec3): Vec3 {
  return [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
}

function dot(a: Vec3, b: Vec3): number {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

function cross(a: Vec3, b: Vec3): Vec3 {
  return [
    a[1] * b[2] - a[2] * b[1],
    a[2] * b[0] - a[0] * b[2],
    a[0] * b[1] - a[1] * b[0],
  ];
}

function length(v: Vec3): number {
  return Math.sqrt(dot(v, v));
}

function normalize(v: Vec3): Vec3 {
  const n = length(v);
  return [v[0] / n, v[1] / n, v[2] / n];
}
