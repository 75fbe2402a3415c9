"""Lesson "text movies": a full initial snapshot plus timestamped edit deltas.

Each frame stores a single splice (offset, delete count, inserted text)
computed from the longest common prefix and suffix against the previous
frame, so a recorded session stays a small fraction of the concatenated
snapshots while remaining plain, editable text. Offsets count Unicode code
points, never bytes.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass

from .diagnostics import MadeupError

LESSON_VERSION = 1


class CorruptMovieError(MadeupError):
    """A delta does not fit the text it is being applied to."""

    def __init__(self, message: str, delta_index: int):
        self.delta_index = delta_index
        super().__init__(f"delta {delta_index}: {message}")


@dataclass(frozen=True)
class EditDelta:
    t_ms: int
    offset: int
    delete_count: int
    insert: str


@dataclass(frozen=True)
class LessonMovie:
    version: int
    initial: str
    deltas: tuple[EditDelta, ...]
    audio_ref: str | None = None


def diff_snapshots(prev: str, next_text: str) -> EditDelta | None:
    """Compute the single splice turning prev into next, or None if equal.

    The returned delta's timestamp is unset (0); record() stamps it.
    """
    if prev == next_text:
        return None
    prefix = 0
    max_prefix = min(len(prev), len(next_text))
    while prefix < max_prefix and prev[prefix] == next_text[prefix]:
        prefix += 1
    suffix = 0
    max_suffix = min(len(prev), len(next_text)) - prefix
    while suffix < max_suffix and prev[len(prev) - 1 - suffix] == next_text[len(next_text) - 1 - suffix]:
        suffix += 1
    return EditDelta(
        t_ms=0,
        offset=prefix,
        delete_count=len(prev) - prefix - suffix,
        insert=next_text[prefix:len(next_text) - suffix],
    )


def apply_delta(text: str, delta: EditDelta, index: int = 0) -> str:
    if delta.offset < 0 or delta.delete_count < 0:
        raise CorruptMovieError("negative offset or delete count", index)
    if delta.offset + delta.delete_count > len(text):
        raise CorruptMovieError(
            f"splice [{delta.offset}, {delta.offset + delta.delete_count}) "
            f"exceeds text length {len(text)}",
            index,
        )
    return text[:delta.offset] + delta.insert + text[delta.offset + delta.delete_count:]


def record(snapshots: list[tuple[int, str]],
           audio_ref: str | None = None) -> LessonMovie:
    """Build a movie from (t_ms, text) snapshots; unchanged frames are dropped."""
    if not snapshots:
        return LessonMovie(LESSON_VERSION, "", (), audio_ref)
    times = [t for t, _ in snapshots]
    for earlier, later in zip(times, times[1:]):
        if later < earlier:
            raise ValueError(f"snapshot timestamps decrease: {earlier} -> {later}")
    if times[0] < 0:
        raise ValueError("timestamps must be non-negative")

    initial = snapshots[0][1]
    deltas: list[EditDelta] = []
    current = initial
    for t_ms, text in snapshots[1:]:
        delta = diff_snapshots(current, text)
        if delta is not None:
            deltas.append(dataclasses.replace(delta, t_ms=t_ms))
            current = text
    return LessonMovie(LESSON_VERSION, initial, tuple(deltas), audio_ref)


def playback_at(movie: LessonMovie, t_ms: int) -> str:
    """Reconstruct the text at playback time t_ms."""
    if t_ms < 0:
        raise ValueError("playback time must be non-negative")
    text = movie.initial
    for index, delta in enumerate(movie.deltas):
        if delta.t_ms > t_ms:
            break
        text = apply_delta(text, delta, index)
    return text


def content_bytes(movie: LessonMovie) -> int:
    """Raw text payload of the movie: the initial frame plus all insertions."""
    return len(movie.initial.encode()) + sum(
        len(d.insert.encode()) for d in movie.deltas
    )


# ── serialization (.muplesson) ───────────────────────────────────────


def dumps(movie: LessonMovie) -> str:
    payload = {
        "version": movie.version,
        "initial": movie.initial,
        "audio_ref": movie.audio_ref,
        "deltas": [
            {"t": d.t_ms, "o": d.offset, "d": d.delete_count, "i": d.insert}
            for d in movie.deltas
        ],
    }
    return json.dumps(payload, separators=(",", ":"), ensure_ascii=False)


def loads(text: str) -> LessonMovie:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorruptMovieError(f"not valid JSON: {exc}", -1) from None
    if not isinstance(payload, dict):
        raise CorruptMovieError("movie must be a JSON object", -1)
    try:
        deltas = tuple(
            EditDelta(int(d["t"]), int(d["o"]), int(d["d"]), str(d["i"]))
            for d in payload.get("deltas", [])
        )
        movie = LessonMovie(
            version=int(payload["version"]),
            initial=str(payload["initial"]),
            deltas=deltas,
            audio_ref=payload.get("audio_ref"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptMovieError(f"malformed movie: {exc}", -1) from None
    for index, (earlier, later) in enumerate(zip(movie.deltas, movie.deltas[1:])):
        if later.t_ms < earlier.t_ms:
            raise CorruptMovieError("timestamps decrease", index + 1)
    return movie
