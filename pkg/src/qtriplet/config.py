from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields
from typing import Optional, Union


@dataclass(frozen=True)
class AnalysisConfig:
    """Every tunable of the triplet pipeline; echoed verbatim in reports."""

    min_length: int = 256
    seed: int = 0
    # q_stat
    qstat_grid: tuple = (1.01, 2.99, 0.01)
    bins: Union[int, str] = 41
    range_iqr: Optional[float] = 3.0
    fold: bool = True
    qstat_boot: int = 100
    # q_rel
    qrel_grid: tuple = (1.01, 4.0, 0.01)
    max_lag: Optional[int] = None
    lag_floor: float = 0.02
    min_lags: int = 5
    mean_subtracted: bool = False
    qrel_boot: int = 100
    block: int = 50
    # mfdfa
    eta_range: tuple = (-5.0, 5.0, 0.25)
    n_scales: int = 20
    min_scale: int = 10
    scale_grid: str = "log"
    detrend_order: int = 2
    poly_degree: int = 4
    refine: bool = True

    def to_dict(self) -> dict:
        d = asdict(self)
        return {k: list(v) if isinstance(v, tuple) else v for k, v in d.items()}

    @classmethod
    def from_dict(cls, d: dict) -> "AnalysisConfig":
        known = {f.name for f in fields(cls)}
        kw = {k: tuple(v) if isinstance(v, list) else v for k, v in d.items() if k in known}
        return cls(**kw)
