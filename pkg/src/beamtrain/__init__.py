"""Simulator for two-phase beam training on planar arrays with coarse ADCs.

Core pieces: steering vectors and Kronecker beam dictionaries (arrays),
on-grid sparse channel synthesis (channel), scalar AGC quantizers
(quantizer), matching-pursuit recovery (recovery), the two-phase training
protocol itself (protocol), and the Monte Carlo sweep engine (simulate).
An HTTP service (service) and a CLI (cli) wrap the same entry points.
"""

__version__ = "0.1.0"

from .arrays import ArrayConfig, axis_steering, flat_index_to_angles, make_dictionary, make_grid, upa_steering
from .channel import ChannelInstance, PathSpec, sample_channel, to_angular, to_matrix
from .protocol import NoiseSpec, TrainingOutcome, baseline_slots, run_training
from .quantizer import QuantizerSpec, quantize
from .recovery import SparseEstimate, omp, onecol_matched
from .simulate import SweepConfig, SweepResult, emit_csv, emit_timing_table, run_sweep

__all__ = [
    "ArrayConfig",
    "ChannelInstance",
    "NoiseSpec",
    "PathSpec",
    "QuantizerSpec",
    "SparseEstimate",
    "SweepConfig",
    "SweepResult",
    "TrainingOutcome",
    "axis_steering",
    "baseline_slots",
    "emit_csv",
    "emit_timing_table",
    "flat_index_to_angles",
    "make_dictionary",
    "make_grid",
    "omp",
    "onecol_matched",
    "quantize",
    "run_sweep",
    "run_training",
    "sample_channel",
    "to_angular",
    "to_matrix",
    "upa_steering",
]
