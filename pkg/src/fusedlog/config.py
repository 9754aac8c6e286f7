"""Run configuration shared by the pipeline and the CLI."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from fusedlog.design_space import DEFAULT_MAX_NONZERO, DEFAULT_RADIUS, DEFAULT_SEARCH_CAP
from fusedlog.hw_model import MAX_WIDTH, MIN_WIDTH, Datapath
from fusedlog.segmentation import N_SUB, Scheme

DEFAULT_WIDTH = {Scheme.RECURSIVE: 14, Scheme.FLATTENED: 13}
SEARCHES = ("min-hw", "min-error")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    split_threshold_lsb: float = 1.5
    flatten_threshold: float = 0.25
    segments: int = 8
    max_iters: int = 1000
    width_m: int | None = None  # None: per-scheme default
    radius: float = DEFAULT_RADIUS
    max_nonzero: int = DEFAULT_MAX_NONZERO
    search: str = "min-hw"
    search_cap: int = DEFAULT_SEARCH_CAP
    error_budget: int | None = None
    rounding: str = "truncate"
    overflow: str = "saturate"

    def __post_init__(self):
        checks = [
            (self.split_threshold_lsb > 0, "split_threshold_lsb must be > 0"),
            (self.flatten_threshold > 0, "flatten_threshold must be > 0"),
            (2 <= self.segments <= N_SUB, f"segments must be in [2, {N_SUB}]"),
            (self.max_iters >= 0, "max_iters must be >= 0"),
            (self.width_m is None or MIN_WIDTH <= self.width_m <= MAX_WIDTH, f"width_m must be in [{MIN_WIDTH}, {MAX_WIDTH}]"),
            (0 <= self.radius < 2 and math.isfinite(self.radius), "radius must be in [0, 2)"),
            (1 <= self.max_nonzero <= 8, "max_nonzero must be in [1, 8]"),
            (self.search in SEARCHES, f"search must be one of {SEARCHES}"),
            (self.search_cap >= 1, "search_cap must be >= 1"),
            (self.error_budget is None or self.error_budget >= 0, "error_budget must be >= 0"),
        ]
        for ok, msg in checks:
            if not ok:
                raise ConfigError(msg)
        try:
            self.datapath
        except ValueError as e:
            raise ConfigError(str(e)) from None

    @property
    def datapath(self) -> Datapath:
        return Datapath(self.rounding, self.overflow)

    def width_for(self, scheme: Scheme | str) -> int:
        return self.width_m if self.width_m is not None else DEFAULT_WIDTH[Scheme(scheme)]

    def as_dict(self) -> dict:
        return asdict(self)
