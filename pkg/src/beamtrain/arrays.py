"""Steering vectors, angular grids and beam dictionaries for planar arrays.

A uniform planar array factors into two uniform linear arrays (azimuth and
elevation axes), so every planar steering vector is a Kronecker product of
two axis steering vectors and every beam dictionary is a Kronecker product
of two axis dictionaries.

Two angle parameterizations meet here. `axis_steering` takes the angle
measured from broadside, the usual phased-array convention, so its phase
progression goes with sin(angle). Grid angles from `make_grid` are measured
from the array axis instead: they are laid out uniformly in the directional
cosine, cos(grid[i]) = 2*i/g - 1, which is what makes a square dictionary
(one grid point per element) unitary. `make_dictionary` bridges the two by
evaluating the steering vector at the broadside complement pi/2 - angle.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import numpy.typing as npt


@dataclass(frozen=True)
class ArrayConfig:
    """Geometry of one array side together with its beam grid.

    Attributes
    ----------
    n_az, n_el : int
        Antenna elements along the azimuth and elevation axes.
    g_az, g_el : int
        Beam grid points along the azimuth and elevation axes.
    spacing_over_wavelength : float
        Element spacing d divided by carrier wavelength. Half-wavelength
        spacing is the default and the only value the unitarity guarantee
        applies to.
    """

    n_az: int
    n_el: int
    g_az: int
    g_el: int
    spacing_over_wavelength: float = 0.5

    def __post_init__(self) -> None:
        for name in ("n_az", "n_el", "g_az", "g_el"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")
        if not (self.spacing_over_wavelength > 0 and np.isfinite(self.spacing_over_wavelength)):
            raise ValueError("spacing_over_wavelength must be finite and positive")

    @property
    def n_total(self) -> int:
        """Total element count n_az * n_el."""
        return self.n_az * self.n_el

    @property
    def g_total(self) -> int:
        """Total grid size g_az * g_el."""
        return self.g_az * self.g_el


@dataclass(frozen=True, eq=False)
class Dictionary:
    """Beam dictionary for one array side.

    Attributes
    ----------
    matrix : complex ndarray, shape (n_az*n_el, g_az*g_el)
        Unit-norm steering columns, azimuth-major flat ordering.
    grid_az, grid_el : float ndarray
        Axis-referenced grid angles the columns point at.
    config : ArrayConfig
    """

    matrix: npt.NDArray[np.complex128]
    grid_az: npt.NDArray[np.float64]
    grid_el: npt.NDArray[np.float64]
    config: ArrayConfig


def axis_steering(angle: float, n: int, spacing_over_wavelength: float = 0.5) -> npt.NDArray[np.complex128]:
    """Steering vector of an n-element uniform linear array.

    Parameters
    ----------
    angle : float
        Angle in radians measured from broadside.
    n : int
        Number of elements, n >= 1.
    spacing_over_wavelength : float
        Element spacing over wavelength.

    Returns
    -------
    complex ndarray, shape (n,)
        Entry k equals exp(j*2*pi*spacing*k*sin(angle)) / sqrt(n), so the
        vector always has unit 2-norm.
    """
    if n < 1:
        raise ValueError(f"element count must be >= 1, got {n}")
    if not np.isfinite(angle):
        raise ValueError(f"angle must be finite, got {angle}")
    k = np.arange(n)
    phase = 2.0 * np.pi * spacing_over_wavelength * np.sin(angle)
    return np.exp(1j * phase * k) / np.sqrt(n)


def upa_steering(az: float, el: float, cfg: ArrayConfig) -> npt.NDArray[np.complex128]:
    """Planar-array steering vector, Kronecker product of the two axes.

    Both angles are broadside-referenced, matching `axis_steering`. The
    returned vector has length cfg.n_total and unit 2-norm, with the
    azimuth factor on the slow (outer) index.
    """
    s = cfg.spacing_over_wavelength
    return np.kron(axis_steering(az, cfg.n_az, s), axis_steering(el, cfg.n_el, s))


def make_grid(g: int) -> npt.NDArray[np.float64]:
    """Angular grid of g beams, uniform in the directional cosine.

    Element i (0-based) is arccos(2*i/g - 1), so angles run from pi down
    toward 0 without reaching it, and cos over the grid is uniformly spaced
    with step 2/g. Angles are measured from the array axis.
    """
    if g < 1:
        raise ValueError(f"grid size must be >= 1, got {g}")
    return np.arccos(2.0 * np.arange(g) / g - 1.0)


def _axis_dictionary(n: int, g: int, spacing_over_wavelength: float) -> npt.NDArray[np.complex128]:
    # Grid angles are axis-referenced; axis_steering wants broadside angles.
    # The complement turns sin into cos so column phases step uniformly by
    # 2*pi*spacing*2/g, which for the square half-wavelength case makes the
    # columns an orthonormal (DFT-like) set.
    grid = make_grid(g)
    cols = [axis_steering(np.pi / 2.0 - t, n, spacing_over_wavelength) for t in grid]
    return np.stack(cols, axis=1)


@lru_cache(maxsize=32)
def make_dictionary(cfg: ArrayConfig) -> Dictionary:
    """Build the beam dictionary for one array side.

    The matrix is kron(azimuth axis dictionary, elevation axis dictionary):
    the column at flat index i*g_el + j is the planar steering vector for
    grid pair (grid_az[i], grid_el[j]). Columns are unit norm; when
    g_az == n_az and g_el == n_el (half-wavelength spacing) the matrix is
    unitary.

    Results are cached per config and returned with read-only arrays, so
    callers must not write into them.
    """
    a_az = _axis_dictionary(cfg.n_az, cfg.g_az, cfg.spacing_over_wavelength)
    a_el = _axis_dictionary(cfg.n_el, cfg.g_el, cfg.spacing_over_wavelength)
    matrix = np.kron(a_az, a_el)
    grid_az = make_grid(cfg.g_az)
    grid_el = make_grid(cfg.g_el)
    for arr in (matrix, grid_az, grid_el):
        arr.setflags(write=False)
    return Dictionary(matrix=matrix, grid_az=grid_az, grid_el=grid_el, config=cfg)


def flat_index_to_angles(flat: int, g_az: int, g_el: int) -> tuple[float, float]:
    """Map a flat dictionary column index to its (azimuth, elevation) angles.

    The flat ordering is azimuth-major: flat = az_index * g_el + el_index.
    """
    if not 0 <= flat < g_az * g_el:
        raise IndexError(f"flat index {flat} out of range for grid {g_az}x{g_el}")
    az_idx, el_idx = divmod(flat, g_el)
    return float(make_grid(g_az)[az_idx]), float(make_grid(g_el)[el_idx])


def pair_to_flat(az_idx: int, el_idx: int, g_el: int) -> int:
    """Inverse of the azimuth-major flat ordering used by the dictionary."""
    return az_idx * g_el + el_idx


def flat_to_pair(flat: int, g_el: int) -> tuple[int, int]:
    """Split a flat dictionary index into (az_index, el_index)."""
    az_idx, el_idx = divmod(flat, g_el)
    return az_idx, el_idx
