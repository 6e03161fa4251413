"""Request execution shared by the HTTP endpoints and the in-process CLI."""

import io
from typing import Callable

from ..arrays import ArrayConfig
from ..channel import sample_channel
from ..protocol import run_training
from ..quantizer import QuantizerSpec
from ..simulate import (
    SweepResult,
    emit_csv,
    emit_timing_table,
    result_to_dict,
    run_sweep,
    score_trial,
    timing_rows,
    trial_seeds,
)
from .schemas import (
    DemoRequest,
    DemoResponse,
    SweepRequest,
    SweepSummary,
    TimingRequest,
    TimingResponse,
)


def execute_sweep(
    req: SweepRequest,
    progress_cb: Callable[[int, int], None] | None = None,
) -> tuple[SweepResult, SweepSummary]:
    """Run the sweep now and return both the raw result and its summary."""
    result = run_sweep(req.to_config(), progress_cb=progress_cb)
    return result, SweepSummary.model_validate(result_to_dict(result))


def sweep_csv_text(result: SweepResult) -> str:
    buffer = io.StringIO()
    emit_csv(result, buffer)
    return buffer.getvalue()


def execute_demo(req: DemoRequest) -> DemoResponse:
    """One fully reported training trial (trial 0 of the matching sweep cell)."""
    arr_cfg = ArrayConfig(n_az=req.array, n_el=req.array, g_az=req.grid, g_el=req.grid)
    channel_seed, training_seed = trial_seeds(
        req.seed, req.bits, req.paths, req.grid, req.snr_db, trial=0
    )
    ch = sample_channel(req.paths, arr_cfg, arr_cfg, channel_seed, req.gain_dist)
    outcome = run_training(ch, QuantizerSpec(bits=req.bits), req.snr_db, training_seed)
    return DemoResponse(
        snr_db=req.snr_db,
        bits="inf" if req.bits is None else str(req.bits),
        paths=req.paths,
        grid=req.grid,
        array=req.array,
        seed=req.seed,
        gain_dist=req.gain_dist,
        truth_pairs=sorted(ch.truth_pairs()),
        s_aoa=list(outcome.s_aoa),
        s_aod=list(outcome.s_aod),
        pairs=list(outcome.pairs),
        slots_used=outcome.slots_used,
        success=score_trial(outcome, ch),
    )


def execute_timing(req: TimingRequest) -> TimingResponse:
    rows = timing_rows(req.paths, req.sectors, req.gt)
    text = emit_timing_table(req.paths, req.sectors, req.gt)
    return TimingResponse(rows=rows, text=text)
