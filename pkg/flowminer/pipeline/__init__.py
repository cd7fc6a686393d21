"""
End-to-end pipeline: simulate → slice → train → mine → eval.

Typical usage::

    from flowminer.pipeline import load_config, cmd_run

    cfg = load_config("configs/quickstart.json", out="out/quickstart")
    print(cmd_run(cfg).summary())
"""

from .commands import (
    cmd_eval,
    cmd_mine,
    cmd_run,
    cmd_simulate,
    cmd_slice,
    cmd_train,
    write_manifest,
)
from .config import MODEL_KINDS, PipelineConfig, load_config

__all__ = [
    "cmd_eval",
    "cmd_mine",
    "cmd_run",
    "cmd_simulate",
    "cmd_slice",
    "cmd_train",
    "write_manifest",
    "MODEL_KINDS",
    "PipelineConfig",
    "load_config",
]
