"""The two-phase beam training protocol.

Phase 1 (downlink, one slot): the transmit side fires the sum of all its
dictionary beams at once; the receive side observes one coarse-quantized
snapshot and recovers the L strongest arrival directions by matching
pursuit over its own dictionary.

Phase 2 (uplink, L slots): the terminal answers with one slot per
recovered arrival direction, transmitting the conjugated receive beam for
that direction. Each base-station snapshot is then 1-sparse in the
conjugated transmit dictionary, so a single matched-filter pick per slot
yields the departure direction paired with that arrival direction.

Total training cost is therefore L + 1 slots, against K^2 * log_K(G)
slots for a K-ary hierarchical sector sweep over G transmit beams.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelInstance, to_matrix
from .arrays import flat_to_pair, make_dictionary, pair_to_flat
from .quantizer import QuantizerSpec, quantize
from .recovery import omp, onecol_matched

logger = logging.getLogger(__name__)

DIRECTIONS = ("downlink", "uplink")


@dataclass(frozen=True)
class NoiseSpec:
    """Operating SNR in dB for one link direction.

    snr_db may be +inf, which switches the noise off entirely (the
    noiseless reference case). NaN is rejected. The noise variance is
    calibrated per transmission from the realized signal norm, see
    `_noise_variance`.
    """

    snr_db: float
    direction: str

    def __post_init__(self) -> None:
        if math.isnan(self.snr_db):
            raise ValueError("snr_db must not be NaN")
        if self.direction not in DIRECTIONS:
            raise ValueError(f"direction must be one of {DIRECTIONS}, got {self.direction!r}")


@dataclass(frozen=True)
class TrainingOutcome:
    """Result of one full training run.

    s_aoa and s_aod hold (az_index, el_index) grid pairs; entry l of s_aod
    is the departure direction matched to arrival direction l. pairs zips
    the two. slots_used counts training slots, always len(s_aoa) + 1.
    """

    s_aoa: tuple[tuple[int, int], ...]
    s_aod: tuple[tuple[int, int], ...]
    pairs: tuple[tuple[tuple[int, int], tuple[int, int]], ...]
    slots_used: int


def _noise_variance(signal: np.ndarray, snr_db: float, norm_antennas: int) -> float:
    # Per-sample complex noise variance such that
    # snr_db = 10*log10(||signal||^2 / (norm_antennas * variance)).
    if math.isinf(snr_db) and snr_db > 0:
        return 0.0
    return float(np.linalg.norm(signal) ** 2 / (norm_antennas * 10.0 ** (snr_db / 10.0)))


def _complex_noise(rng: np.random.Generator, variance: float, shape) -> np.ndarray:
    if variance == 0.0:
        return np.zeros(shape, dtype=complex)
    scale = np.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def phase1(
    ch: ChannelInstance,
    q: QuantizerSpec,
    noise: NoiseSpec,
    rng_seed: int,
) -> list[tuple[int, int]]:
    """Recover the arrival directions from the one downlink broadcast slot.

    Returns num_paths (az_index, el_index) grid pairs on the receive grid,
    sorted by descending recovered coefficient magnitude (index order
    breaks ties). The downlink noise variance is set from the realized
    receive signal norm divided by the transmit antenna count.
    """
    if noise.direction != "downlink":
        raise ValueError("phase1 runs on the downlink")
    rng = np.random.default_rng(rng_seed)
    tx_dict = make_dictionary(ch.tx_cfg)
    rx_dict = make_dictionary(ch.rx_cfg)

    # All transmit beams at once; one receive snapshot.
    x_dl = tx_dict.matrix @ np.ones(ch.tx_cfg.g_total)
    y_sig = to_matrix(ch) @ x_dl
    variance = _noise_variance(y_sig, noise.snr_db, ch.tx_cfg.n_total)
    received = quantize(y_sig + _complex_noise(rng, variance, y_sig.shape), q)

    est = omp(received, rx_dict.matrix, ch.num_paths)
    order = np.argsort(-np.abs(est.coefficients), kind="stable")
    return [flat_to_pair(int(est.support[i]), ch.rx_cfg.g_el) for i in order]


def phase2(
    ch: ChannelInstance,
    s_aoa: list[tuple[int, int]],
    q: QuantizerSpec,
    noise: NoiseSpec,
    rng_seed: int,
) -> list[tuple[int, int]]:
    """Match one departure direction to each recovered arrival direction.

    The terminal transmits one uplink slot per arrival direction, beamformed
    as the conjugate of that direction's receive-dictionary column. All
    slots are quantized in one pass (the snapshots are stacked column-wise
    before the AGC), then each slot is matched against the conjugated
    transmit dictionary. Returns the departure grid pairs in s_aoa order.
    """
    if noise.direction != "uplink":
        raise ValueError("phase2 runs on the uplink")
    if not s_aoa:
        raise ValueError("s_aoa must not be empty")
    rng = np.random.default_rng(rng_seed)
    tx_dict = make_dictionary(ch.tx_cfg)
    rx_dict = make_dictionary(ch.rx_cfg)

    h_ul = to_matrix(ch).T
    flat_aoa = [pair_to_flat(az, el, ch.rx_cfg.g_el) for az, el in s_aoa]
    x_ul = np.conj(rx_dict.matrix[:, flat_aoa])
    y_sig = h_ul @ x_ul
    # Per-slot noise calibration; the uplink SNR normalizes by the
    # terminal's antenna count.
    y = np.empty_like(y_sig)
    for l in range(y_sig.shape[1]):
        variance = _noise_variance(y_sig[:, l], noise.snr_db, ch.rx_cfg.n_total)
        y[:, l] = y_sig[:, l] + _complex_noise(rng, variance, y_sig.shape[0])
    quantized = quantize(y.flatten(order="F"), q).reshape(y.shape, order="F")

    sensing = np.conj(tx_dict.matrix)
    result = []
    for l in range(quantized.shape[1]):
        flat, _ = onecol_matched(quantized[:, l], sensing)
        result.append(flat_to_pair(flat, ch.tx_cfg.g_el))
    return result


def run_training(
    ch: ChannelInstance,
    q: QuantizerSpec,
    snr_db: float,
    rng_seed: int,
) -> TrainingOutcome:
    """Run both phases at the same SNR and pair the recovered directions.

    The seed is split deterministically into independent phase seeds, so a
    fixed (channel, spec, snr_db, rng_seed) always reproduces the same
    outcome.
    """
    seed1, seed2 = (int(s) for s in np.random.SeedSequence(rng_seed).generate_state(2, np.uint64))
    s_aoa = phase1(ch, q, NoiseSpec(snr_db=snr_db, direction="downlink"), seed1)
    s_aod = phase2(ch, s_aoa, q, NoiseSpec(snr_db=snr_db, direction="uplink"), seed2)
    return TrainingOutcome(
        s_aoa=tuple(s_aoa),
        s_aod=tuple(s_aod),
        pairs=tuple(zip(s_aoa, s_aod)),
        slots_used=len(s_aoa) + 1,
    )


def baseline_slots(sectors: int, g_t: int) -> int:
    """Slot count of a K-ary hierarchical sweep over g_t transmit beams.

    Evaluates sectors^2 * log_sectors(g_t). Exact when g_t is a positive
    power of the sector count; otherwise the real-valued expression is
    rounded up to whole slots and a warning is logged.
    """
    if not isinstance(sectors, int) or sectors < 2:
        raise ValueError(f"sector count must be an integer >= 2, got {sectors!r}")
    if not isinstance(g_t, int) or g_t < 1:
        raise ValueError(f"g_t must be a positive integer, got {g_t!r}")
    levels = 0
    power = 1
    while power < g_t:
        power *= sectors
        levels += 1
    if power == g_t:
        return sectors * sectors * levels
    logger.warning("g_t=%d is not a power of %d, rounding slot count up", g_t, sectors)
    return math.ceil(sectors * sectors * math.log(g_t, sectors))
