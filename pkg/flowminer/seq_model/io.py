"""Model files: one JSON document per pattern length."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Mapping, Union

from ..errors import ModelError
from .base import SequenceModel
from .count import CountModel
from .lstm import LstmModel

PathLike = Union[str, Path]

_KINDS = {"count": CountModel, "lstm": LstmModel}


def model_path(directory: PathLike, w: int) -> Path:
    return Path(directory) / f"model_w{w}.json"


def model_from_dict(d: Mapping) -> SequenceModel:
    kind = d.get("kind")
    if kind not in _KINDS:
        raise ModelError(f"unknown model kind {kind!r} (expected one of {sorted(_KINDS)})")
    try:
        return _KINDS[kind].from_dict(d)
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelError(f"malformed {kind} model: {exc}") from exc


def save_model(model: SequenceModel, path: PathLike) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(model.to_dict(), f)
        f.write("\n")


def load_model(path: PathLike) -> SequenceModel:
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except FileNotFoundError:
        raise ModelError(f"model file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ModelError(f"model file {path} is not valid JSON: {exc.msg}") from exc
    return model_from_dict(data)


def save_models(models: Mapping[int, SequenceModel], directory: PathLike) -> list[Path]:
    paths = []
    for w in sorted(models):
        path = model_path(directory, w)
        save_model(models[w], path)
        paths.append(path)
    return paths


def load_models(directory: PathLike) -> dict[int, SequenceModel]:
    """Every ``model_w*.json`` of ``directory``, keyed by pattern length."""
    models: dict[int, SequenceModel] = {}
    for path in sorted(Path(directory).glob("model_w*.json")):
        model = load_model(path)
        models[model.pattern_length] = model
    return models
