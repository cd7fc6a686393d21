"""
commands.py
===========
Pipeline stages over an output directory.

Layout of ``cfg.out``::

    manifest.json                      config hash, seed, tool version
    traces/trace_NNNN.jsonl            simulated traces
    traces/provenance_NNNN.jsonl       which instance emitted each event
    sliced/sub_TTTT_KKKK.jsonl         sub-traces, listed in sliced/index.json
    models/vocabulary.json
    models/model_w{w}.json             one model per pattern length
    initiating.json                    detected initiating events
    patterns.jsonl                     mined patterns
    report.csv                         V_F / IV_F / V_NF per length

Every stage overwrites its own outputs, so re-running a stage with the same
config reproduces the same bytes.
"""

from __future__ import annotations

import json
import multiprocessing
from pathlib import Path
from typing import Optional, Sequence

from .. import __version__
from ..errors import DataError, TrainingError
from ..evaluation.core import build_ground_truth, classify
from ..evaluation.result import MiningReport
from ..flows.core import EventType
from ..mining.core import detect_initiating_events, mine
from ..mining.io import load_patterns, save_patterns
from ..seq_model.base import SequenceModel, TrainingWindow, windows_from_sequences
from ..seq_model.count import CountModel, fit_count_model
from ..seq_model.io import load_models, save_models
from ..seq_model.training import LstmHyperparameters, train_lstm
from ..simulation.engine import simulate_corpus, spawn_seeds
from ..simulation.result import save_provenance
from ..slicing.core import slice_traces
from ..slicing.io import load_sliced, save_sliced
from ..traces.core import Trace, Vocabulary, build_vocabulary, linearize
from ..traces.io import load_trace, load_vocabulary, save_trace, save_vocabulary
from ..utils.logging import get_logger, timed
from .config import PipelineConfig

logger = get_logger(__name__)


# ── Layout ────────────────────────────────────────────────────────────────────

def traces_dir(cfg: PipelineConfig) -> Path:
    return cfg.out_dir / "traces"


def sliced_dir(cfg: PipelineConfig) -> Path:
    return cfg.out_dir / "sliced"


def models_dir(cfg: PipelineConfig) -> Path:
    return cfg.out_dir / "models"


def patterns_path(cfg: PipelineConfig) -> Path:
    return cfg.out_dir / "patterns.jsonl"


def report_path(cfg: PipelineConfig) -> Path:
    return cfg.out_dir / "report.csv"


def write_manifest(cfg: PipelineConfig) -> Path:
    """``manifest.json``: config hash, seed, version and the effective config."""
    path = cfg.out_dir / "manifest.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    manifest = {
        "config_hash": cfg.config_hash(),
        "seed": cfg.seed,
        "version": __version__,
        "config": cfg.to_dict(),
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")
    return path


def load_traces(directory: Path) -> list[Trace]:
    paths = sorted(Path(directory).glob("trace_*.jsonl"))
    if not paths:
        raise DataError(f"no trace files in {directory} (run 'simulate' first)")
    return [load_trace(p) for p in paths]


# ── Stages ────────────────────────────────────────────────────────────────────

@timed
def cmd_simulate(cfg: PipelineConfig) -> list[Path]:
    """Simulate ``cfg.n_traces`` traces and write them with their provenance."""
    flows = cfg.load_flows()
    sim = cfg.sim_config(flows)
    results = simulate_corpus(flows, sim, cfg.n_traces)

    directory = traces_dir(cfg)
    directory.mkdir(parents=True, exist_ok=True)
    for stale in list(directory.glob("trace_*.jsonl")) + list(directory.glob("provenance_*.jsonl")):
        stale.unlink()

    paths = []
    for i, result in enumerate(results):
        path = directory / f"trace_{i:04d}.jsonl"
        save_trace(result.trace, path)
        save_provenance(result.provenance, directory / f"provenance_{i:04d}.jsonl")
        paths.append(path)
    write_manifest(cfg)
    logger.info("wrote %d traces to %s", len(paths), directory)
    return paths


@timed
def cmd_slice(cfg: PipelineConfig, trace_dir: Optional[Path] = None) -> list[dict]:
    """Slice every trace with ``cfg.slicing``; returns the index entries."""
    source = Path(trace_dir) if trace_dir is not None else traces_dir(cfg)
    paths = sorted(source.glob("trace_*.jsonl"))
    traces = load_traces(source)
    slices = slice_traces(traces, method=cfg.slicing, addr_policy=cfg.addr_policy)
    entries = save_sliced(slices, sliced_dir(cfg), cfg.slicing, sources=[p.name for p in paths])
    write_manifest(cfg)
    return entries


def _train_one(
    w: int,
    windows: Sequence[TrainingWindow],
    vocab: Vocabulary,
    kind: str,
    hp: LstmHyperparameters,
    seed: int,
) -> SequenceModel:
    if kind == "count":
        if not windows:
            logger.warning("w=%d: no training windows, every prefix will be unseen", w)
            return CountModel(w, vocab, {})
        return fit_count_model(windows, vocab)
    if not windows:
        raise TrainingError(f"w={w}: no sub-trace is long enough to train a model of this length")
    return train_lstm(windows, vocab, hp, seed=seed)


def _train_worker(args: tuple) -> tuple[int, SequenceModel]:
    """Multiprocessing worker: one pattern length end-to-end."""
    w = args[0]
    return w, _train_one(*args)


@timed
def cmd_train(cfg: PipelineConfig, sub_trace_dir: Optional[Path] = None) -> dict[int, Path]:
    """Train one model per pattern length ``2..max_len`` on the sliced corpus."""
    source = Path(sub_trace_dir) if sub_trace_dir is not None else sliced_dir(cfg)
    subtraces = load_sliced(source)
    if not subtraces:
        raise DataError(f"no sub-traces listed in {source} (run 'slice' first)")
    vocab = build_vocabulary(subtraces)
    encoded = [vocab.encode_sequence(linearize(t)) for t in subtraces]

    seeds = spawn_seeds(cfg.seed, cfg.max_len + 1)
    tasks = [
        (w, windows_from_sequences(encoded, w), vocab, cfg.model, cfg.seq_model, seeds[w])
        for w in range(2, cfg.max_len + 1)
    ]
    for task in tasks:
        logger.info("w=%d: %d training windows", task[0], len(task[1]))

    if cfg.jobs > 1 and cfg.model == "lstm":
        workers = min(cfg.jobs, len(tasks))
        logger.info("training %d models in parallel (%d workers)", len(tasks), workers)
        with multiprocessing.Pool(processes=workers) as pool:
            models = dict(pool.map(_train_worker, tasks))
    else:
        models = dict(_train_worker(task) for task in tasks)

    directory = models_dir(cfg)
    directory.mkdir(parents=True, exist_ok=True)
    for stale in directory.glob("model_w*.json"):
        stale.unlink()
    save_vocabulary(vocab, directory / "vocabulary.json")
    paths = save_models(models, directory)
    write_manifest(cfg)
    return {w: p for w, p in zip(sorted(models), paths)}


def _save_initiating(events: set, path: Path) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump([e.to_dict() for e in sorted(events)], f, indent=1)
        f.write("\n")


@timed
def cmd_mine(
    cfg: PipelineConfig,
    model_dir: Optional[Path] = None,
    trace_dir: Optional[Path] = None,
) -> Path:
    """
    Mine patterns with ``cfg.miner`` from the trained models.

    With the initiating filter on, initiating events are detected on the
    traces in ``trace_dir`` (default ``<out>/traces``).
    """
    source = Path(model_dir) if model_dir is not None else models_dir(cfg)
    if not (source / "vocabulary.json").exists():
        raise DataError(f"no vocabulary.json in {source} (run 'train' first)")
    vocab = load_vocabulary(source / "vocabulary.json")
    models = load_models(source)

    initiating: Optional[set[EventType]] = None
    if cfg.miner.initiating_filter:
        traces = load_traces(Path(trace_dir) if trace_dir is not None else traces_dir(cfg))
        initiating = detect_initiating_events(traces)
        _save_initiating(initiating, cfg.out_dir / "initiating.json")

    patterns = mine(models, vocab, cfg.miner, initiating)
    path = patterns_path(cfg)
    save_patterns(patterns, path)
    write_manifest(cfg)
    logger.info("mined %d patterns into %s", len(patterns), path)
    return path


@timed
def cmd_eval(cfg: PipelineConfig, pattern_file: Optional[Path] = None) -> MiningReport:
    """Classify mined patterns against the flows' executions and write ``report.csv``."""
    patterns = load_patterns(Path(pattern_file) if pattern_file is not None else patterns_path(cfg))
    gt = build_ground_truth(cfg.load_flows(), max_len=cfg.max_len)
    report = classify(patterns, gt, max_len=cfg.max_len)
    report.to_csv(report_path(cfg))
    write_manifest(cfg)
    return report


@timed
def cmd_run(cfg: PipelineConfig) -> MiningReport:
    """simulate → slice → train → mine → eval."""
    cmd_simulate(cfg)
    cmd_slice(cfg)
    cmd_train(cfg)
    cmd_mine(cfg)
    return cmd_eval(cfg)
