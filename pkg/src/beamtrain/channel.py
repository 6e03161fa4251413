"""On-grid sparse multipath channel synthesis.

A channel instance is a list of L propagation paths. Each path carries a
complex gain and four grid indices: arrival azimuth/elevation at the
receive side and departure azimuth/elevation at the transmit side. Angles
live exactly on the beam grids, so the angular-domain representation of
the channel has exactly L nonzero entries and the dense matrix and the
angular matrix describe the same object without leakage.

Conventions: `to_matrix` returns the downlink matrix (receive side of the
downlink on the rows). The uplink matrix is its plain transpose.
"""

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from .arrays import ArrayConfig, flat_to_pair, make_dictionary, pair_to_flat

GAIN_DISTRIBUTIONS = ("unit", "cn")


@dataclass(frozen=True)
class PathSpec:
    """One propagation path: complex gain plus on-grid arrival/departure indices."""

    gain: complex
    aoa_az_idx: int
    aoa_el_idx: int
    aod_az_idx: int
    aod_el_idx: int


@dataclass(frozen=True)
class ChannelInstance:
    """A fixed realization of the multipath channel between two arrays.

    tx_cfg describes the transmit side of the downlink (the base station),
    rx_cfg the receive side (the terminal). Arrival indices refer to
    rx_cfg's grid, departure indices to tx_cfg's grid.
    """

    paths: tuple[PathSpec, ...]
    tx_cfg: ArrayConfig
    rx_cfg: ArrayConfig

    def __post_init__(self) -> None:
        if not self.paths:
            raise ValueError("channel must have at least one path")
        aoa_pairs = [(p.aoa_az_idx, p.aoa_el_idx) for p in self.paths]
        aod_pairs = [(p.aod_az_idx, p.aod_el_idx) for p in self.paths]
        if len(set(aoa_pairs)) != len(aoa_pairs):
            raise ValueError("duplicate arrival grid pair across paths")
        if len(set(aod_pairs)) != len(aod_pairs):
            raise ValueError("duplicate departure grid pair across paths")
        for p in self.paths:
            if not (0 <= p.aoa_az_idx < self.rx_cfg.g_az and 0 <= p.aoa_el_idx < self.rx_cfg.g_el):
                raise ValueError(f"arrival indices out of grid range: {p}")
            if not (0 <= p.aod_az_idx < self.tx_cfg.g_az and 0 <= p.aod_el_idx < self.tx_cfg.g_el):
                raise ValueError(f"departure indices out of grid range: {p}")
            if not np.isfinite(p.gain) or p.gain == 0:
                raise ValueError(f"path gain must be finite and nonzero: {p.gain!r}")

    @property
    def num_paths(self) -> int:
        return len(self.paths)

    def truth_pairs(self) -> set[tuple[tuple[int, int], tuple[int, int]]]:
        """Ground-truth ((aoa_az, aoa_el), (aod_az, aod_el)) pairings."""
        return {
            ((p.aoa_az_idx, p.aoa_el_idx), (p.aod_az_idx, p.aod_el_idx))
            for p in self.paths
        }


def sample_channel(
    num_paths: int,
    tx_cfg: ArrayConfig,
    rx_cfg: ArrayConfig,
    rng_seed: int,
    gain_dist: str = "unit",
) -> ChannelInstance:
    """Draw a random on-grid channel.

    Arrival grid pairs are drawn uniformly without replacement from the
    receive grid, departure pairs likewise from the transmit grid, so the
    per-path marginals stay uniform while the distinctness invariant holds.
    Gains are i.i.d.: uniform phase on the unit circle for gain_dist
    "unit", standard circular complex normal for "cn".
    """
    if gain_dist not in GAIN_DISTRIBUTIONS:
        raise ValueError(f"gain_dist must be one of {GAIN_DISTRIBUTIONS}, got {gain_dist!r}")
    capacity = min(rx_cfg.g_total, tx_cfg.g_total)
    if not 1 <= num_paths <= capacity:
        raise ValueError(f"need 1 <= num_paths <= {capacity} distinct grid pairs, got {num_paths}")
    rng = np.random.default_rng(rng_seed)
    aoa_flat = rng.choice(rx_cfg.g_total, size=num_paths, replace=False)
    aod_flat = rng.choice(tx_cfg.g_total, size=num_paths, replace=False)
    if gain_dist == "unit":
        gains = np.exp(2j * np.pi * rng.random(num_paths))
    else:
        gains = (rng.standard_normal(num_paths) + 1j * rng.standard_normal(num_paths)) / np.sqrt(2.0)
    paths = []
    for l in range(num_paths):
        aoa_az, aoa_el = flat_to_pair(int(aoa_flat[l]), rx_cfg.g_el)
        aod_az, aod_el = flat_to_pair(int(aod_flat[l]), tx_cfg.g_el)
        paths.append(
            PathSpec(
                gain=complex(gains[l]),
                aoa_az_idx=aoa_az,
                aoa_el_idx=aoa_el,
                aod_az_idx=aod_az,
                aod_el_idx=aod_el,
            )
        )
    return ChannelInstance(paths=tuple(paths), tx_cfg=tx_cfg, rx_cfg=rx_cfg)


def _path_scale(ch: ChannelInstance) -> float:
    # Normalization keeps the expected squared Frobenius norm at
    # n_rx_total * n_tx_total for unit-variance gains.
    return float(np.sqrt(ch.rx_cfg.n_total * ch.tx_cfg.n_total / ch.num_paths))


def to_matrix(ch: ChannelInstance) -> npt.NDArray[np.complex128]:
    """Dense downlink channel matrix, shape (rx n_total, tx n_total).

    Sum over paths of scale * gain * a_rx a_tx^H with a_rx, a_tx the
    dictionary columns at the path's grid indices and
    scale = sqrt(n_rx * n_tx / L).
    """
    rx_dict = make_dictionary(ch.rx_cfg)
    tx_dict = make_dictionary(ch.tx_cfg)
    scale = _path_scale(ch)
    h = np.zeros((ch.rx_cfg.n_total, ch.tx_cfg.n_total), dtype=complex)
    for p in ch.paths:
        a_rx = rx_dict.matrix[:, pair_to_flat(p.aoa_az_idx, p.aoa_el_idx, ch.rx_cfg.g_el)]
        a_tx = tx_dict.matrix[:, pair_to_flat(p.aod_az_idx, p.aod_el_idx, ch.tx_cfg.g_el)]
        h += scale * p.gain * np.outer(a_rx, a_tx.conj())
    return h


def to_angular(ch: ChannelInstance) -> npt.NDArray[np.complex128]:
    """Angular-domain channel, shape (rx g_total, tx g_total), L nonzeros.

    Entry (arrival flat index, departure flat index) of path l holds
    scale * gain_l; everything else is zero. For square grids the dense
    matrix equals rx_dictionary @ angular @ tx_dictionary^H exactly.
    """
    scale = _path_scale(ch)
    h_a = np.zeros((ch.rx_cfg.g_total, ch.tx_cfg.g_total), dtype=complex)
    for p in ch.paths:
        i = pair_to_flat(p.aoa_az_idx, p.aoa_el_idx, ch.rx_cfg.g_el)
        j = pair_to_flat(p.aod_az_idx, p.aod_el_idx, ch.tx_cfg.g_el)
        h_a[i, j] = scale * p.gain
    return h_a
