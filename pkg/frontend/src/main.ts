/** DOM glue: wires the editor, viewer, palette, and lesson player together.
 *
 * All behavior lives in the pure modules; this file only moves values
 * between them and the page.
 */

import { HttpClient } from "./api.js";
import { fetchLesson } from "./api.js";
import {
  forkForEditing,
  frameTimes,
  lessonDuration,
  LessonPlayerState,
  loadLesson,
  playPause,
  resumeTimeline,
  seek,
  tick,
} from "./lessonPlayer.js";
import { insertAtCaret, OPERATOR_PALETTE } from "./palette.js";
import { buildPathOverlay, buildScene, DrawCommand } from "./renderer.js";
import {
  makeStore,
  orbitCamera,
  runCurrent,
  RunOptions,
  setSource,
  toggleView,
  triangleCount,
} from "./state.js";

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

const editor = $<HTMLTextAreaElement>("editor");
const gutter = $("gutter");
const canvas = $<HTMLCanvasElement>("viewport");
const diagnosticsPanel = $("diagnostics");
const banner = $("banner");
const triCount = $("tri-count");
const serverInput = $<HTMLInputElement>("server");
const modeSelect = $<HTMLSelectElement>("mode");
const sidesInput = $<HTMLInputElement>("sides");
const rowsInput = $<HTMLInputElement>("rows");
const colsInput = $<HTMLInputElement>("cols");
const lessonInput = $<HTMLInputElement>("lesson-id");
const scrubber = $<HTMLInputElement>("scrubber");
const playPauseBtn = $<HTMLButtonElement>("play-pause");
const lessonTime = $("lesson-time");

const http: HttpClient = (url, init) => fetch(url, init);
const store = makeStore();
let player: LessonPlayerState | null = null;
let lastTick = 0;

serverInput.value = localStorage.getItem("madeup-server") ?? "http://127.0.0.1:8373";
serverInput.addEventListener("change", () => {
  localStorage.setItem("madeup-server", serverInput.value);
});

editor.value = 'repeat 4\n  move 10\n  yaw 90\nend\n';
store.set(setSource(store.get(), editor.value));

// ── editor + gutter ──────────────────────────────────────────────────

function refreshGutter(): void {
  const lines = editor.value.split("\n").length;
  const marked = new Set(store.get().diagnostics.map((d) => d.line));
  gutter.innerHTML = "";
  for (let i = 1; i <= lines; i++) {
    const row = document.createElement("div");
    row.textContent = String(i);
    if (marked.has(i)) {
      row.className = "gutter-error";
    }
    gutter.appendChild(row);
  }
}

editor.addEventListener("input", () => {
  store.set(setSource(store.get(), editor.value));
  if (player && !player.forked) {
    player = forkForEditing(player);
    syncPlayerControls();
  }
});
editor.addEventListener("scroll", () => {
  gutter.scrollTop = editor.scrollTop;
});

// ── running ─────────────────────────────────────────────────────────

function runOptions(): RunOptions {
  const mode = modeSelect.value as RunOptions["mode"];
  const options: RunOptions = { mode, tube: { sides: sidesInput.valueAsNumber || 8 } };
  if (mode === "parametric") {
    options.grid = {
      rows: rowsInput.valueAsNumber || 2,
      cols: colsInput.valueAsNumber || 2,
    };
  }
  return options;
}

$("run").addEventListener("click", () => {
  void runCurrent(store, http, serverInput.value, runOptions());
});
$("toggle-view").addEventListener("click", () => {
  store.set(toggleView(store.get()));
});

// ── palette ─────────────────────────────────────────────────────────

const paletteBox = $("palette");
for (const symbol of OPERATOR_PALETTE) {
  const button = document.createElement("button");
  button.textContent = symbol;
  button.addEventListener("click", () => {
    const edit = insertAtCaret(
      editor.value, editor.selectionStart, editor.selectionEnd, symbol,
    );
    editor.value = edit.text;
    editor.setSelectionRange(edit.caret, edit.caret);
    editor.focus();
    editor.dispatchEvent(new Event("input"));
  });
  paletteBox.appendChild(button);
}

// ── viewer ──────────────────────────────────────────────────────────

function draw(commands: DrawCommand[]): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  for (const cmd of commands) {
    ctx.beginPath();
    cmd.points.forEach(([x, y], i) => (i ? ctx.lineTo(x, y) : ctx.moveTo(x, y)));
    if (cmd.kind === "polygon") {
      ctx.closePath();
      ctx.fillStyle = cmd.fill;
      ctx.fill();
      ctx.strokeStyle = cmd.stroke;
      ctx.stroke();
    } else {
      ctx.strokeStyle = cmd.color;
      ctx.lineWidth = cmd.width;
      ctx.stroke();
    }
  }
}

function render(): void {
  const state = store.get();
  const viewport = { width: canvas.width, height: canvas.height };
  const commands = buildScene(state.mesh, state.viewMode, state.camera, viewport);
  if (state.mesh) {
    commands.push(...buildPathOverlay(state.mesh, state.camera, viewport));
  }
  draw(commands);

  triCount.textContent = `${triangleCount(state)} triangles`;
  $("toggle-view").textContent = state.viewMode === "solid" ? "wireframe" : "solid";
  banner.textContent = state.banner ?? "";
  banner.style.display = state.banner ? "block" : "none";
  diagnosticsPanel.innerHTML = "";
  for (const diag of state.diagnostics) {
    const row = document.createElement("div");
    row.textContent = `${diag.line}:${diag.column} ${diag.message}`;
    diagnosticsPanel.appendChild(row);
  }
  refreshGutter();
}

store.subscribe(render);

let dragging = false;
let lastPointer: [number, number] = [0, 0];
canvas.addEventListener("pointerdown", (e) => {
  dragging = true;
  lastPointer = [e.clientX, e.clientY];
  canvas.setPointerCapture(e.pointerId);
});
canvas.addEventListener("pointermove", (e) => {
  if (!dragging) return;
  const dx = e.clientX - lastPointer[0];
  const dy = e.clientY - lastPointer[1];
  lastPointer = [e.clientX, e.clientY];
  store.set(orbitCamera(store.get(), dx * 0.01, dy * 0.01));
});
canvas.addEventListener("pointerup", () => (dragging = false));
canvas.addEventListener("wheel", (e) => {
  e.preventDefault();
  store.set(orbitCamera(store.get(), 0, 0, e.deltaY * 0.05));
});

// ── lesson player ───────────────────────────────────────────────────

function setEditorText(text: string): void {
  editor.value = text;
  store.set(setSource(store.get(), text));
}

function syncPlayerControls(): void {
  if (!player) return;
  scrubber.max = String(lessonDuration(player.movie));
  scrubber.value = String(player.playheadMs);
  playPauseBtn.textContent = player.playing ? "pause" : "play";
  lessonTime.textContent = player.forked
    ? "edited (press play to return to the lesson)"
    : `${(player.playheadMs / 1000).toFixed(1)}s`;
}

$("load-lesson").addEventListener("click", async () => {
  try {
    const movie = await fetchLesson(http, serverInput.value, lessonInput.value);
    player = loadLesson(movie);
    const [state, text] = seek(player, 0);
    player = state;
    setEditorText(text);
    syncPlayerControls();
  } catch (error) {
    banner.textContent = error instanceof Error ? error.message : String(error);
    banner.style.display = "block";
  }
});

scrubber.addEventListener("input", () => {
  if (!player) return;
  const [state, text] = seek(player, Number(scrubber.value));
  player = state;
  setEditorText(text);
  syncPlayerControls();
});

playPauseBtn.addEventListener("click", () => {
  if (!player) return;
  if (player.forked) {
    if (!confirm("Discard your edits and return to the lesson timeline?")) {
      return;
    }
    const [state, text] = resumeTimeline(player);
    player = state;
    setEditorText(text);
  }
  player = playPause(player);
  lastTick = performance.now();
  syncPlayerControls();
});

function playbackLoop(now: number): void {
  if (player && player.playing) {
    const [state, text] = tick(player, now - lastTick);
    player = state;
    if (text !== null) {
      setEditorText(text);
    }
    syncPlayerControls();
  }
  lastTick = now;
  requestAnimationFrame(playbackLoop);
}
requestAnimationFrame(playbackLoop);

// Jump buttons: previous/next recorded frame.
$("prev-frame").addEventListener("click", () => jumpFrame(-1));
$("next-frame").addEventListener("click", () => jumpFrame(1));

function jumpFrame(direction: 1 | -1): void {
  if (!player) return;
  const times = frameTimes(player.movie);
  const current = player.playheadMs;
  const target =
    direction === 1
      ? times.find((t) => t > current)
      : [...times].reverse().find((t) => t < current);
  if (target === undefined) return;
  const [state, text] = seek(player, target);
  player = state;
  setEditorText(text);
  syncPlayerControls();
}

render();
