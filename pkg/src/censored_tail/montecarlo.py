"""
Seeded replication harness for the log-gamma simulation study.

Each (beta, replication) work unit draws a fresh censored sample from its own
random stream, keyed by ``(master_seed, case_id, n, beta_index, replication)``
through ``numpy.random.SeedSequence``.  Units can therefore run in any order on
any number of threads, and growing the beta grid or the replication count
leaves existing draws untouched.
"""

from __future__ import annotations

import math
import os
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .distributions import CensorModel, TailModel, simulate_censored
from .estimators import TuningError, derive_tuning, estimate_gamma_x

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "ReplicationRecord",
    "BetaSummary",
    "SweepSummary",
    "BUILTIN_CASES",
    "builtin_cases",
    "get_case",
    "default_beta_grid",
    "replication_seed",
    "run_case",
    "run_sweep",
    "summary_stats",
]


class ConfigError(ValueError):
    """An experiment configuration is inconsistent."""


# case -> (gamma_X, gamma_Y, beta_X, beta_Y, gamma_0, n, reported average censor rate)
BUILTIN_CASES = {
    "1": (2.0, 2.0, 1.2, 1.4, 0.2, 10000, 0.441),
    "2": (1.0, 2.0, 0.5, 0.5, 0.3, 10000, 0.392),
    "3": (1.0, 2.0, 1.5, 1.5, 0.3, 10000, 0.291),
    "4": (0.5, 0.476, 1.0, 1.0, 0.1, 10000, 0.512),
    "5": (0.5, 0.4, 1.0, 1.0, 0.1, 10000, 0.555),
    "6": (0.5, 0.4, 1.0, 1.0, 0.1, 50000, 0.556),
}

DEFAULT_REPLICATIONS = 50
DEFAULT_GRID_POINTS = 10


def default_beta_grid(gamma0, points=DEFAULT_GRID_POINTS):
    """Evenly spaced betas on ``[0.1, 0.9] * gamma0/2``."""
    return tuple(float(b) for b in np.linspace(0.1 * gamma0 / 2.0, 0.9 * gamma0 / 2.0, points))


@dataclass(frozen=True)
class ExperimentConfig:
    case_id: str
    cm: CensorModel
    n: int
    beta_grid: tuple
    gamma0: float
    c: Optional[float] = None
    replications: int = DEFAULT_REPLICATIONS
    master_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "case_id", str(self.case_id))
        object.__setattr__(self, "beta_grid", tuple(float(b) for b in self.beta_grid))
        if not self.beta_grid:
            raise ConfigError("beta_grid must not be empty")
        if any(b2 <= b1 for b1, b2 in zip(self.beta_grid, self.beta_grid[1:])):
            raise ConfigError(f"beta_grid must be strictly increasing, got {list(self.beta_grid)}")
        if not (math.isfinite(self.gamma0) and self.gamma0 > 0.0):
            raise ConfigError(f"gamma0 must be positive, got {self.gamma0}")
        for b in self.beta_grid:
            if not 0.0 < b < self.gamma0 / 2.0:
                raise ConfigError(
                    f"every beta must satisfy 0 < beta < gamma0/2; beta={b!r} violates beta < gamma0/2 "
                    f"(gamma0/2={self.gamma0 / 2.0!r})"
                )
        if int(self.replications) < 1:
            raise ConfigError(f"replications must be at least 1, got {self.replications}")
        if int(self.n) < 1:
            raise ConfigError(f"n must be at least 1, got {self.n}")
        if not 0 <= int(self.master_seed) < 2**64:
            raise ConfigError(f"master_seed must be a 64-bit unsigned integer, got {self.master_seed}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "replications", int(self.replications))
        object.__setattr__(self, "master_seed", int(self.master_seed))

    @property
    def gamma_x(self):
        return self.cm.data.gamma

    def to_dict(self):
        return {
            "case_id": self.case_id,
            "cm": self.cm.to_dict(),
            "n": self.n,
            "beta_grid": list(self.beta_grid),
            "gamma0": self.gamma0,
            "c": self.c,
            "replications": self.replications,
            "master_seed": self.master_seed,
        }

    @classmethod
    def from_dict(cls, d):
        try:
            gamma0 = float(d["gamma0"])
            grid = d.get("beta_grid") or default_beta_grid(gamma0)
            return cls(
                case_id=d["case_id"],
                cm=CensorModel.from_dict(d["cm"]),
                n=d["n"],
                beta_grid=grid,
                gamma0=gamma0,
                c=d.get("c"),
                replications=d.get("replications", DEFAULT_REPLICATIONS),
                master_seed=d.get("master_seed", 0),
            )
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"malformed experiment config: {exc!r}") from exc


def builtin_cases(master_seed=0):
    """The six log-gamma cases of the simulation study, in order."""
    configs = []
    for case_id, (gx, gy, bx, by, g0, n, _) in BUILTIN_CASES.items():
        cm = CensorModel(TailModel.log_gamma(gx, bx), TailModel.log_gamma(gy, by))
        configs.append(
            ExperimentConfig(
                case_id=case_id,
                cm=cm,
                n=n,
                beta_grid=default_beta_grid(g0),
                gamma0=g0,
                replications=DEFAULT_REPLICATIONS,
                master_seed=master_seed,
            )
        )
    return configs


def get_case(case_id, master_seed=0):
    case_id = str(case_id)
    for config in builtin_cases(master_seed):
        if config.case_id == case_id:
            return config
    raise ConfigError(f"unknown case id {case_id!r}; built-in cases are {', '.join(BUILTIN_CASES)}")


def _case_key(case_id):
    return zlib.crc32(str(case_id).encode("utf-8"))


def replication_seed(master_seed, case_id, n, beta_index, replication):
    """Independent stream for one work unit."""
    return np.random.SeedSequence(
        entropy=int(master_seed),
        spawn_key=(_case_key(case_id), int(n), int(beta_index), int(replication)),
    )


@dataclass(frozen=True)
class ReplicationRecord:
    case_id: str
    n: int
    beta: float
    replication: int
    gamma_x_hat: float
    relative_error: float
    truncated_by_s: bool
    truncated_by_h: bool
    censor_fraction: float


@dataclass(frozen=True)
class BetaSummary:
    n: int
    beta: float
    min: float
    mean: float
    max: float
    median: float
    truncated_by_s: int
    truncated_by_h: int


@dataclass
class SweepSummary:
    config: ExperimentConfig
    records: list
    rows: list
    mean_censor_rate: float
    n_values: tuple = field(default=())

    def row(self, beta, n=None):
        n = self.config.n if n is None else n
        for r in self.rows:
            if r.beta == beta and r.n == n:
                return r
        raise KeyError((n, beta))

    def to_dict(self):
        return {
            "config": self.config.to_dict(),
            "n_values": list(self.n_values or (self.config.n,)),
            "gamma_x": self.config.gamma_x,
            "mean_censor_rate": self.mean_censor_rate,
            "rows": [vars(r).copy() for r in self.rows],
        }


def summary_stats(values: Sequence[float]) -> tuple[float, float, float]:
    """Exact ``(min, mean, max)`` of a nonempty sequence."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        raise ValueError("summary_stats needs at least one value")
    lo, hi = float(arr.min()), float(arr.max())
    # fsum keeps the mean inside [min, max] for constant inputs
    mean = math.fsum(arr.tolist()) / arr.size
    return lo, min(max(mean, lo), hi), hi


def _run_unit(config, n, beta_index, replication):
    beta = config.beta_grid[beta_index]
    tuning = derive_tuning(n, beta, config.gamma0, config.c)
    sample = simulate_censored(
        config.cm, n, replication_seed(config.master_seed, config.case_id, n, beta_index, replication)
    )
    report = estimate_gamma_x(sample, tuning)
    gx = config.gamma_x
    return ReplicationRecord(
        case_id=config.case_id,
        n=n,
        beta=beta,
        replication=replication,
        gamma_x_hat=report.gamma_x_hat,
        relative_error=abs(report.gamma_x_hat - gx) / gx,
        truncated_by_s=report.truncated_by_s,
        truncated_by_h=report.truncated_by_h,
        censor_fraction=sample.censor_fraction,
    )


def _check_tuning(config, n):
    for b in config.beta_grid:
        try:
            derive_tuning(n, b, config.gamma0, config.c)
        except TuningError as exc:
            raise TuningError(f"beta={b!r}: {exc}") from exc


def run_sweep(config: ExperimentConfig, n_values=None, threads=None) -> SweepSummary:
    """Run every (n, beta, replication) unit of ``config`` and summarise per (n, beta).

    Results are collected into a buffer indexed by unit, so the output does
    not depend on ``threads`` or completion order.
    """
    n_values = tuple(int(n) for n in (n_values or (config.n,)))
    for n in n_values:
        _check_tuning(config, n)
    units = [
        (n, b, r) for n in n_values for b in range(len(config.beta_grid)) for r in range(config.replications)
    ]
    workers = threads or os.cpu_count() or 1
    if workers <= 1:
        records = [_run_unit(config, *u) for u in units]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(lambda u: _run_unit(config, *u), units))

    rows = []
    reps = config.replications
    for i, (n, b) in enumerate((n, b) for n in n_values for b in range(len(config.beta_grid))):
        chunk = records[i * reps : (i + 1) * reps]
        errs = [rec.relative_error for rec in chunk]
        lo, mean, hi = summary_stats(errs)
        rows.append(
            BetaSummary(
                n=n,
                beta=config.beta_grid[b],
                min=lo,
                mean=mean,
                max=hi,
                median=float(np.median(errs)),
                truncated_by_s=sum(rec.truncated_by_s for rec in chunk),
                truncated_by_h=sum(rec.truncated_by_h for rec in chunk),
            )
        )
    censor_rate = math.fsum(rec.censor_fraction for rec in records) / len(records)
    return SweepSummary(config=config, records=records, rows=rows, mean_censor_rate=censor_rate, n_values=n_values)


def run_case(config: ExperimentConfig, threads=None) -> SweepSummary:
    """Replicate ``config`` at its own sample size over its beta grid."""
    return run_sweep(config, None, threads)
