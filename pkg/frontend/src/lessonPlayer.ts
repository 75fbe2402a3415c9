/** Client-side lesson playback: reconstruct editor text at any playhead.
 *
 * The movie is never mutated. Editing while a lesson is loaded pauses
 * playback and forks the text; resuming restores the movie timeline.
 */

import { LessonMovieWire } from "./api.js";

export class CorruptLessonError extends Error {
  constructor(readonly deltaIndex: number, message: string) {
    super(`delta ${deltaIndex}: ${message}`);
  }
}

export function playbackAt(movie: LessonMovieWire, tMs: number): string {
  let text = movie.initial;
  for (let i = 0; i < movie.deltas.length; i++) {
    const delta = movie.deltas[i];
    if (delta.t > tMs) {
      break;
    }
    if (delta.o < 0 || delta.d < 0 || delta.o + delta.d > text.length) {
      throw new CorruptLessonError(i, `splice [${delta.o}, ${delta.o + delta.d}) ` +
        `exceeds text length ${text.length}`);
    }
    text = text.slice(0, delta.o) + delta.i + text.slice(delta.o + delta.d);
  }
  return text;
}

export function lessonDuration(movie: LessonMovieWire): number {
  return movie.deltas.length
    ? movie.deltas[movie.deltas.length - 1].t
    : 0;
}

/** Every timestamp at which the text changes (0 plus each delta time). */
export function frameTimes(movie: LessonMovieWire): number[] {
  const times = [0];
  for (const delta of movie.deltas) {
    if (times[times.length - 1] !== delta.t) {
      times.push(delta.t);
    }
  }
  return times;
}

export interface LessonPlayerState {
  movie: LessonMovieWire;
  playheadMs: number;
  playing: boolean;
  /** The learner edited the text; playback is paused on their fork. */
  forked: boolean;
}

export function loadLesson(movie: LessonMovieWire): LessonPlayerState {
  return { movie, playheadMs: 0, playing: false, forked: false };
}

export function seek(
  state: LessonPlayerState,
  tMs: number,
): [LessonPlayerState, string] {
  const playheadMs = Math.max(0, Math.min(tMs, lessonDuration(state.movie)));
  return [
    { ...state, playheadMs, forked: false },
    playbackAt(state.movie, playheadMs),
  ];
}

export function playPause(state: LessonPlayerState): LessonPlayerState {
  if (state.forked) {
    return state; // resuming from a fork needs an explicit confirmation first
  }
  const atEnd = state.playheadMs >= lessonDuration(state.movie);
  return {
    ...state,
    playing: !state.playing,
    playheadMs: !state.playing && atEnd ? 0 : state.playheadMs,
  };
}

/** Advance during playback; returns the new text when the frame changed. */
export function tick(
  state: LessonPlayerState,
  elapsedMs: number,
): [LessonPlayerState, string | null] {
  if (!state.playing) {
    return [state, null];
  }
  const duration = lessonDuration(state.movie);
  const next = Math.min(state.playheadMs + elapsedMs, duration);
  const before = playbackAt(state.movie, state.playheadMs);
  const after = playbackAt(state.movie, next);
  const done = next >= duration;
  return [
    { ...state, playheadMs: next, playing: !done && state.playing },
    after !== before || done ? after : null,
  ];
}

/** The learner typed into the editor: pause and fork. */
export function forkForEditing(state: LessonPlayerState): LessonPlayerState {
  return { ...state, playing: false, forked: true };
}

/** Confirmed return to the movie timeline: text snaps back to the playhead. */
export function resumeTimeline(
  state: LessonPlayerState,
): [LessonPlayerState, string] {
  return [
    { ...state, forked: false },
    playbackAt(state.movie, state.playheadMs),
  ];
}
