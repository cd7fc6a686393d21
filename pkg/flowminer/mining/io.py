"""Pattern files: JSON Lines of ``{"events", "step_probs", "length"}``."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Union

from ..errors import MiningError
from .core import Pattern

PathLike = Union[str, Path]


def save_patterns(patterns: Iterable[Pattern], path: PathLike) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        for p in patterns:
            f.write(json.dumps(p.to_dict(), separators=(",", ":")) + "\n")


def load_patterns(path: PathLike) -> list[Pattern]:
    patterns = []
    try:
        with open(path, encoding="utf-8") as f:
            for line_no, line in enumerate(f, start=1):
                if not line.strip():
                    continue
                try:
                    patterns.append(Pattern.from_dict(json.loads(line)))
                except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                    raise MiningError(f"{path}, line {line_no}: malformed pattern ({exc})") from exc
    except FileNotFoundError:
        raise MiningError(f"pattern file not found: {path}") from None
    return patterns
