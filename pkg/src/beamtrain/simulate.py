"""Monte Carlo sweep engine and result serialization.

A sweep is a grid of cells, one per (quantizer bits, path count, grid
size, SNR) combination. Every trial inside a cell draws a fresh channel,
runs the full two-phase training and scores it. Per-trial seeds are a
stable 64-bit hash of (base seed, cell coordinates, trial index), so runs
are reproducible byte for byte and adding cells to a sweep never perturbs
the streams of existing cells.
"""

import csv
import hashlib
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, TextIO

from .arrays import ArrayConfig
from .channel import GAIN_DISTRIBUTIONS, ChannelInstance, sample_channel
from .protocol import TrainingOutcome, baseline_slots, run_training
from .quantizer import QuantizerSpec

SCORE_MODES = ("pairs", "perpath")

CSV_COLUMNS = (
    "snr_db",
    "bits",
    "L",
    "g_az",
    "g_el",
    "n_az",
    "n_el",
    "trials",
    "successes",
    "success_rate",
    "ci_lo",
    "ci_hi",
    "seed",
)

# 97.5th normal percentile, for two-sided 95% Wilson intervals.
_Z95 = 1.959963984540054


@dataclass(frozen=True)
class SweepConfig:
    """Full description of one sweep.

    snr_db_list, bits_list, l_list and grid_sizes span the cell grid;
    array_size is the per-axis antenna count shared by both ends, and each
    grid size applies per axis to both ends as well. bits entries use None
    for the unquantized reference. score selects how trials are counted:
    "pairs" scores a trial as one success when the recovered
    (arrival, departure) pairing matches the ground truth exactly,
    "perpath" counts each correctly paired path as its own Bernoulli
    trial (the trials column then holds trials * L).
    """

    snr_db_list: tuple[float, ...]
    bits_list: tuple[int | None, ...]
    l_list: tuple[int, ...]
    grid_sizes: tuple[int, ...]
    array_size: int = 16
    trials: int = 1000
    base_seed: int = 0
    spacing_over_wavelength: float = 0.5
    gain_dist: str = "unit"
    score: str = "pairs"

    def __post_init__(self) -> None:
        for name in ("snr_db_list", "bits_list", "l_list", "grid_sizes"):
            if not getattr(self, name):
                raise ValueError(f"{name} must not be empty")
        for bits in self.bits_list:
            QuantizerSpec(bits=bits)  # validates the sentinel set
        if any(l < 1 for l in self.l_list):
            raise ValueError("path counts must be >= 1")
        if any(g < 1 for g in self.grid_sizes):
            raise ValueError("grid sizes must be >= 1")
        if self.array_size < 1:
            raise ValueError("array_size must be >= 1")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.gain_dist not in GAIN_DISTRIBUTIONS:
            raise ValueError(f"gain_dist must be one of {GAIN_DISTRIBUTIONS}")
        if self.score not in SCORE_MODES:
            raise ValueError(f"score must be one of {SCORE_MODES}")

    def cells(self) -> list[tuple[int | None, int, int, float]]:
        """Cell coordinates (bits, L, g, snr) in canonical report order."""
        out = [
            (bits, l, g, float(snr))
            for bits in self.bits_list
            for l in self.l_list
            for g in self.grid_sizes
            for snr in self.snr_db_list
        ]
        out.sort(key=lambda c: (_bits_sort_key(c[0]), c[1], c[2], c[3]))
        return out


@dataclass
class CellResult:
    """Aggregated statistics of one sweep cell."""

    snr_db: float
    bits: int | None
    num_paths: int
    g_az: int
    g_el: int
    n_az: int
    n_el: int
    trials: int
    successes: int
    success_rate: float
    ci_lo: float
    ci_hi: float
    seed: int
    mean_wall_time: float


@dataclass
class SkippedCell:
    """A cell the engine refused to run, with the reason."""

    snr_db: float
    bits: int | None
    num_paths: int
    g: int
    reason: str


@dataclass
class SweepResult:
    config: SweepConfig
    cells: list[CellResult] = field(default_factory=list)
    skipped: list[SkippedCell] = field(default_factory=list)


def _bits_sort_key(bits: int | None) -> float:
    return float("inf") if bits is None else float(bits)


def _bits_label(bits: int | None) -> str:
    return "inf" if bits is None else str(bits)


def _mix64(*parts) -> int:
    """Stable 64-bit mix of arbitrary hashable coordinates."""
    digest = hashlib.blake2b(digest_size=8)
    for part in parts:
        digest.update(repr(part).encode())
        digest.update(b"\x1f")
    return int.from_bytes(digest.digest(), "big")


def wilson_interval(successes: int, trials: int, z: float = _Z95) -> tuple[float, float]:
    """Two-sided Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0 <= successes <= trials:
        raise ValueError("successes must lie in [0, trials]")
    p = successes / trials
    z2 = z * z
    center = (p + z2 / (2 * trials)) / (1 + z2 / trials)
    half = (z / (1 + z2 / trials)) * ((p * (1 - p) / trials + z2 / (4 * trials * trials)) ** 0.5)
    return max(0.0, center - half), min(1.0, center + half)


def score_trial(outcome: TrainingOutcome, truth: ChannelInstance) -> bool:
    """Exact-match scoring: every path found and paired correctly.

    Compares the recovered ((aoa), (aod)) pair set against the channel's
    ground truth as sets, so the arrival-to-departure pairing matters but
    the path order does not.
    """
    if len(outcome.pairs) != truth.num_paths:
        raise ValueError("outcome and ground truth disagree on the path count")
    return set(outcome.pairs) == truth.truth_pairs()


def count_correct_pairs(outcome: TrainingOutcome, truth: ChannelInstance) -> int:
    """Number of recovered pairs that appear in the ground truth."""
    if len(outcome.pairs) != truth.num_paths:
        raise ValueError("outcome and ground truth disagree on the path count")
    return len(set(outcome.pairs) & truth.truth_pairs())


def _cell_seed(cfg: SweepConfig, bits: int | None, num_paths: int, g: int, snr_db: float) -> int:
    return _mix64(cfg.base_seed, _bits_label(bits), num_paths, g, float(snr_db))


def trial_seeds(
    base_seed: int,
    bits: int | None,
    num_paths: int,
    g: int,
    snr_db: float,
    trial: int,
) -> tuple[int, int]:
    """Channel and training seeds of one trial, stable across runs.

    The pair depends only on the base seed, the cell coordinates and the
    trial index. A demo run with the same coordinates therefore reproduces
    trial 0 of the matching sweep cell exactly.
    """
    token = (base_seed, _bits_label(bits), num_paths, g, float(snr_db), trial)
    return _mix64(*token, "channel"), _mix64(*token, "training")


def _run_cell(
    cfg: SweepConfig,
    bits: int | None,
    num_paths: int,
    g: int,
    snr_db: float,
) -> CellResult:
    n = cfg.array_size
    arr_cfg = ArrayConfig(
        n_az=n, n_el=n, g_az=g, g_el=g,
        spacing_over_wavelength=cfg.spacing_over_wavelength,
    )
    qspec = QuantizerSpec(bits=bits)
    successes = 0
    started = time.perf_counter()
    for t in range(cfg.trials):
        channel_seed, training_seed = trial_seeds(cfg.base_seed, bits, num_paths, g, snr_db, t)
        ch = sample_channel(num_paths, arr_cfg, arr_cfg, channel_seed, cfg.gain_dist)
        outcome = run_training(ch, qspec, snr_db, training_seed)
        if cfg.score == "pairs":
            successes += int(score_trial(outcome, ch))
        else:
            successes += count_correct_pairs(outcome, ch)
    elapsed = time.perf_counter() - started
    trials = cfg.trials if cfg.score == "pairs" else cfg.trials * num_paths
    ci_lo, ci_hi = wilson_interval(successes, trials)
    return CellResult(
        snr_db=float(snr_db),
        bits=bits,
        num_paths=num_paths,
        g_az=g,
        g_el=g,
        n_az=n,
        n_el=n,
        trials=trials,
        successes=successes,
        success_rate=successes / trials,
        ci_lo=ci_lo,
        ci_hi=ci_hi,
        seed=_cell_seed(cfg, bits, num_paths, g, snr_db),
        mean_wall_time=elapsed / cfg.trials,
    )


def run_sweep(
    cfg: SweepConfig,
    progress_cb: Callable[[int, int], None] | None = None,
) -> SweepResult:
    """Run every cell of the sweep sequentially and deterministically.

    Cells whose path count exceeds the grid capacity are recorded as
    skipped instead of aborting the run. progress_cb, when given, is called
    with (finished cells, total cells) after each cell.
    """
    result = SweepResult(config=cfg)
    cells = cfg.cells()
    for done, (bits, num_paths, g, snr_db) in enumerate(cells, start=1):
        if num_paths > g * g:
            result.skipped.append(
                SkippedCell(
                    snr_db=snr_db, bits=bits, num_paths=num_paths, g=g,
                    reason=f"path count {num_paths} exceeds {g * g} distinct grid pairs",
                )
            )
        else:
            result.cells.append(_run_cell(cfg, bits, num_paths, g, snr_db))
        if progress_cb is not None:
            progress_cb(done, len(cells))
    return result


def _format_float(value: float) -> str:
    return repr(float(value))


def _csv_row(cell: CellResult) -> list[str]:
    return [
        _format_float(cell.snr_db),
        _bits_label(cell.bits),
        str(cell.num_paths),
        str(cell.g_az),
        str(cell.g_el),
        str(cell.n_az),
        str(cell.n_el),
        str(cell.trials),
        str(cell.successes),
        _format_float(cell.success_rate),
        _format_float(cell.ci_lo),
        _format_float(cell.ci_hi),
        str(cell.seed),
    ]


def emit_csv(result: SweepResult, dest) -> None:
    """Write the per-cell statistics as CSV (RFC 4180 quoting, CRLF rows).

    dest is a path or an open text file. Output depends only on the sweep
    statistics, never on wall time, so a repeated run of the same config
    produces byte-identical files. Skipped cells are not emitted.
    """
    if hasattr(dest, "write"):
        _write_csv(result, dest)
        return
    with open(dest, "w", newline="", encoding="utf-8") as fh:
        _write_csv(result, fh)


def _write_csv(result: SweepResult, fh: TextIO) -> None:
    writer = csv.writer(fh)
    writer.writerow(CSV_COLUMNS)
    for cell in result.cells:
        writer.writerow(_csv_row(cell))


def result_to_dict(result: SweepResult) -> dict:
    """JSON-ready summary: config echo plus the same fields as the CSV."""
    cfg = result.config
    return {
        "config": {
            "snr_db": list(cfg.snr_db_list),
            "bits": [_bits_label(b) for b in cfg.bits_list],
            "paths": list(cfg.l_list),
            "grid": list(cfg.grid_sizes),
            "array": cfg.array_size,
            "trials": cfg.trials,
            "seed": cfg.base_seed,
            "spacing_over_wavelength": cfg.spacing_over_wavelength,
            "gain_dist": cfg.gain_dist,
            "score": cfg.score,
        },
        "cells": [
            {
                "snr_db": cell.snr_db,
                "bits": _bits_label(cell.bits),
                "L": cell.num_paths,
                "g_az": cell.g_az,
                "g_el": cell.g_el,
                "n_az": cell.n_az,
                "n_el": cell.n_el,
                "trials": cell.trials,
                "successes": cell.successes,
                "success_rate": cell.success_rate,
                "ci_lo": cell.ci_lo,
                "ci_hi": cell.ci_hi,
                "seed": cell.seed,
            }
            for cell in result.cells
        ],
        "skipped": [
            {
                "snr_db": s.snr_db,
                "bits": _bits_label(s.bits),
                "L": s.num_paths,
                "g": s.g,
                "reason": s.reason,
            }
            for s in result.skipped
        ],
    }


def timing_rows(l_list: Iterable[int], sectors: int, g_t: int) -> list[dict]:
    """Slot-count comparison rows: one per path count, plus the baseline."""
    rows = [
        {"method": f"proposed (L={l})", "slots": l + 1}
        for l in l_list
    ]
    rows.append(
        {
            "method": f"hierarchical sweep (K={sectors}, G={g_t})",
            "slots": baseline_slots(sectors, g_t),
        }
    )
    return rows


def emit_timing_table(l_list: Iterable[int], sectors: int, g_t: int) -> str:
    """Plain-text table of training slot counts, one row per method."""
    rows = timing_rows(l_list, sectors, g_t)
    width = max(len(r["method"]) for r in rows)
    lines = [f"{'method'.ljust(width)}  slots"]
    lines.extend(f"{r['method'].ljust(width)}  {r['slots']}" for r in rows)
    return "\n".join(lines)
