"""
io.py
=====
Trace files (JSON Lines, one timestep per line) and vocabulary files.

Line format::

    [{"src":"CPU0","dest":"L2","cmd":"WrReq","addr":10}, ...]
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import IO, Any, Union

from ..errors import TraceParseError
from ..flows.core import EventType
from .core import EventInstance, Trace, Vocabulary

PathLike = Union[str, Path]

_EVENT_FIELDS = ("src", "dest", "cmd", "addr")


def _parse_event(obj: Any, line_no: int) -> EventInstance:
    if not isinstance(obj, dict):
        raise TraceParseError(line_no, f"event must be an object, got {type(obj).__name__}")
    unknown = set(obj) - set(_EVENT_FIELDS)
    if unknown:
        raise TraceParseError(line_no, f"unknown field(s) {sorted(unknown)}")
    for key in ("src", "dest", "cmd"):
        if key not in obj:
            raise TraceParseError(line_no, f"missing field '{key}'")
    addr = obj.get("addr")
    try:
        return EventInstance(EventType(obj["src"], obj["dest"], obj["cmd"]), addr)
    except ValueError as exc:
        raise TraceParseError(line_no, str(exc)) from exc


def parse_step(line: str, line_no: int) -> tuple:
    try:
        raw = json.loads(line)
    except json.JSONDecodeError as exc:
        raise TraceParseError(line_no, f"malformed line ({exc.msg})") from exc
    if not isinstance(raw, list):
        raise TraceParseError(line_no, "malformed line (a timestep is a JSON array)")
    if not raw:
        raise TraceParseError(line_no, "empty timestep")
    return tuple(_parse_event(obj, line_no) for obj in raw)


def read_trace(source: IO[bytes]) -> Trace:
    """Parse a trace from a binary stream."""
    steps = []
    for line_no, raw in enumerate(source, start=1):
        try:
            line = raw.decode("utf-8") if isinstance(raw, bytes) else raw
        except UnicodeDecodeError as exc:
            raise TraceParseError(line_no, "line is not valid UTF-8") from exc
        line = line.rstrip("\r\n")
        if not line.strip():
            raise TraceParseError(line_no, "malformed line (blank)")
        steps.append(parse_step(line, line_no))
    return Trace(tuple(steps))


def dumps_step(step: tuple) -> str:
    return json.dumps([e.to_dict() for e in step], separators=(",", ":"))


def write_trace(trace: Trace, sink: IO[bytes]) -> None:
    """Write ``trace`` in canonical form (events of a step sorted by ``(src, dest, cmd, addr)``)."""
    for step in trace.steps:
        sink.write((dumps_step(step) + "\n").encode("utf-8"))


def load_trace(path: PathLike) -> Trace:
    with open(path, "rb") as f:
        return read_trace(f)


def save_trace(trace: Trace, path: PathLike) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        write_trace(trace, f)


def save_vocabulary(vocab: Vocabulary, path: PathLike) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(vocab.to_list(), f, indent=1)
        f.write("\n")


def load_vocabulary(path: PathLike) -> Vocabulary:
    with open(path, encoding="utf-8") as f:
        return Vocabulary.from_list(json.load(f))
