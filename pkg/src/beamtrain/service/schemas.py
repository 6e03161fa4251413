"""Request and response models of the HTTP service.

The CLI builds these same models and either executes them in process or
posts them to a running service, so the schema is the single source of
truth for what a sweep, demo or timing request looks like.
"""

from typing import Literal

from pydantic import BaseModel, Field, field_validator

from ..simulate import SweepConfig


def _normalize_bits(value):
    if value in (None, "inf", "none"):
        return None
    return int(value)


class SweepRequest(BaseModel):
    """One Monte Carlo sweep over (SNR, bits, paths, grid) cells."""

    snr_db: list[float] = Field(default=[-20.0, -15.0, -10.0, -5.0, 0.0], min_length=1)
    bits: list[int | None] = Field(default=[1, 2], min_length=1)
    paths: list[int] = Field(default=[1, 2], min_length=1)
    grid: list[int] = Field(default=[16], min_length=1)
    array: int = 16
    trials: int = 1000
    seed: int = 0
    gain_dist: Literal["unit", "cn"] = "unit"
    score: Literal["pairs", "perpath"] = "pairs"
    wait: bool = False

    @field_validator("bits", mode="before")
    @classmethod
    def _coerce_bits(cls, value):
        if isinstance(value, list):
            return [_normalize_bits(v) for v in value]
        return value

    def to_config(self) -> SweepConfig:
        return SweepConfig(
            snr_db_list=tuple(float(s) for s in self.snr_db),
            bits_list=tuple(self.bits),
            l_list=tuple(self.paths),
            grid_sizes=tuple(self.grid),
            array_size=self.array,
            trials=self.trials,
            base_seed=self.seed,
            gain_dist=self.gain_dist,
            score=self.score,
        )


class SweepCellModel(BaseModel):
    snr_db: float
    bits: str
    L: int
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


class SkippedCellModel(BaseModel):
    snr_db: float
    bits: str
    L: int
    g: int
    reason: str


class SweepSummary(BaseModel):
    config: dict
    cells: list[SweepCellModel]
    skipped: list[SkippedCellModel]


class JobInfo(BaseModel):
    """State of a submitted sweep job."""

    job_id: str
    state: Literal["queued", "running", "done", "error"]
    done_cells: int = 0
    total_cells: int = 0
    error: str | None = None
    result: SweepSummary | None = None


class DemoRequest(BaseModel):
    """One verbose training trial."""

    snr_db: float = 0.0
    bits: int | None = 1
    paths: int = 2
    grid: int = 16
    array: int = 16
    seed: int = 0
    gain_dist: Literal["unit", "cn"] = "unit"

    @field_validator("bits", mode="before")
    @classmethod
    def _coerce_bits(cls, value):
        return _normalize_bits(value)


class DemoResponse(BaseModel):
    snr_db: float
    bits: str
    paths: int
    grid: int
    array: int
    seed: int
    gain_dist: str
    truth_pairs: list[tuple[tuple[int, int], tuple[int, int]]]
    s_aoa: list[tuple[int, int]]
    s_aod: list[tuple[int, int]]
    pairs: list[tuple[tuple[int, int], tuple[int, int]]]
    slots_used: int
    success: bool


class TimingRequest(BaseModel):
    """Slot-count comparison between this protocol and a hierarchical sweep."""

    paths: list[int] = Field(default=[1, 2], min_length=1)
    sectors: int = 2
    gt: int = 32


class TimingRow(BaseModel):
    method: str
    slots: int


class TimingResponse(BaseModel):
    rows: list[TimingRow]
    text: str


class HealthResponse(BaseModel):
    status: str
    version: str
