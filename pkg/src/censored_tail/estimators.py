"""
Tail index estimation for randomly right-censored samples.

With threshold ``t`` and floors ``s`` (on the exceedance fraction) and ``h``
(on the uncensored share), the estimate of the data tail index is::

    p(t)  = #{z_i >= t} / n
    q(t)  = #{z_i >= t, delta_i = 1} / n
    rho   = q(t) / p(t)                          if p(t) >= s else 0
    zeta  = sum_{z_i >= t} log(z_i / t) / (n p(t))  if p(t) >= s else 0
    gamma = zeta / rho                           if rho >= h  else 0

``zeta`` estimates the tail index of ``Z = min(X, Y)`` and ``rho`` the
limiting uncensored share ``gamma_Y / (gamma_X + gamma_Y)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .distributions import CensoredSample

__all__ = [
    "Regime",
    "TuningError",
    "TuningParams",
    "EstimateReport",
    "empirical_survival",
    "empirical_uncensored_survival",
    "derive_tuning",
    "manual_tuning",
    "rho_hat",
    "zeta_hat",
    "zeta_hat_integral",
    "estimate_gamma_x",
]

MIN_N = 16


class TuningError(ValueError):
    """A tuning constraint is violated; the message names the inequality."""


class Regime(str, enum.Enum):
    A3 = "A3"  # known lower bound gamma0: t = n^beta
    NO_A3 = "NoA3"  # t = (log n)^beta
    MANUAL = "manual"  # t, s, h given directly


@dataclass(frozen=True)
class TuningParams:
    t: float
    s: float
    h: float
    n: int
    beta: Optional[float]
    c: Optional[float]
    gamma0: Optional[float]
    regime: Regime

    def to_dict(self):
        d = asdict(self)
        d["regime"] = self.regime.value
        return d


@dataclass(frozen=True)
class EstimateReport:
    rho_hat: float
    zeta_hat: float
    gamma_x_hat: float
    p_at_t: float
    q_at_t: float
    exceedance_count: int
    truncated_by_s: bool
    truncated_by_h: bool
    tuning: TuningParams

    def to_dict(self):
        d = asdict(self)
        d["tuning"] = self.tuning.to_dict()
        return d


def empirical_survival(sample: CensoredSample, x: float) -> float:
    """Fraction of observations with ``z_i >= x``."""
    return np.count_nonzero(sample.z >= x) / sample.n


def empirical_uncensored_survival(sample: CensoredSample, x: float) -> float:
    """Fraction of observations with ``z_i >= x`` and ``delta_i = 1``."""
    return np.count_nonzero((sample.z >= x) & (sample.delta == 1)) / sample.n


def default_c(beta, gamma0=None):
    """Midpoint of the admissible interval for ``c``."""
    if gamma0 is None:
        return 0.25
    return 0.5 * (beta / gamma0 + 0.5)


def derive_tuning(n: int, beta: float, gamma0: Optional[float] = None, c: Optional[float] = None) -> TuningParams:
    """Threshold ``t``, floor ``s = n^-c`` and ``h = 1 / log(log n)`` for a sample of size ``n``.

    With ``gamma0`` (a known lower bound with ``gamma_X, gamma_Y >= 2 gamma0``)
    the threshold is ``n^beta`` and requires ``beta < gamma0/2`` and
    ``beta/gamma0 < c < 1/2``.  Without it the threshold is ``(log n)^beta``
    and only ``0 < c < 1/2`` is required.

    Raises
    ------
    TuningError
        Naming the violated inequality.
    """
    n = int(n)
    if n < MIN_N:
        raise TuningError(f"requires n >= {MIN_N} so that 1/log(log n) is a usable floor, got n={n}")
    beta = float(beta)
    if not (math.isfinite(beta) and beta > 0.0):
        raise TuningError(f"requires beta > 0, got beta={beta}")
    log_n = math.log(n)

    if gamma0 is not None:
        gamma0 = float(gamma0)
        if not (math.isfinite(gamma0) and gamma0 > 0.0):
            raise TuningError(f"requires gamma0 > 0, got gamma0={gamma0}")
        if not beta < gamma0 / 2.0:
            raise TuningError(
                f"requires beta < gamma0/2, but beta ≥ gamma0/2 (beta={beta!r}, gamma0/2={gamma0 / 2.0!r})"
            )
        lower = beta / gamma0
        regime = Regime.A3
        t = math.exp(beta * log_n)
    else:
        lower = 0.0
        regime = Regime.NO_A3
        t = math.exp(beta * math.log(log_n))

    if c is None:
        c = default_c(beta, gamma0)
    c = float(c)
    if not lower < c < 0.5:
        bound = "beta/gamma0" if gamma0 is not None else "0"
        raise TuningError(f"requires {bound} < c < 1/2, got c={c!r} (lower bound {lower!r})")

    return TuningParams(
        t=t,
        s=math.exp(-c * log_n),
        h=1.0 / math.log(log_n),
        n=n,
        beta=beta,
        c=c,
        gamma0=gamma0,
        regime=regime,
    )


def manual_tuning(n: int, t: float, s: float, h: float) -> TuningParams:
    """Tuning with explicit ``t``, ``s``, ``h``, bypassing the asymptotic rules."""
    for name, value in (("t", t), ("s", s), ("h", h)):
        if not (math.isfinite(value) and value > 0.0):
            raise TuningError(f"requires {name} > 0, got {name}={value}")
    if not s < 1.0:
        raise TuningError(f"requires s < 1, got s={s}")
    return TuningParams(
        t=float(t), s=float(s), h=float(h), n=int(n), beta=None, c=None, gamma0=None, regime=Regime.MANUAL
    )


def _exceedances(sample, t):
    return sample.z[sample.z >= t]


def rho_hat(sample: CensoredSample, tuning: TuningParams) -> tuple[float, bool]:
    """Uncensored share among exceedances of ``t``; ``(0, True)`` when ``p(t) < s``."""
    p = empirical_survival(sample, tuning.t)
    if p < tuning.s:
        return 0.0, True
    return empirical_uncensored_survival(sample, tuning.t) / p, False


def zeta_hat(sample: CensoredSample, tuning: TuningParams) -> tuple[float, bool]:
    """Mean log-excess over ``t``, normalised by ``n p(t)``; ``(0, True)`` when ``p(t) < s``."""
    p = empirical_survival(sample, tuning.t)
    if p < tuning.s:
        return 0.0, True
    exceed = _exceedances(sample, tuning.t)
    # np.sum is pairwise on contiguous arrays
    return float(np.sum(np.log(exceed / tuning.t))) / (sample.n * p), False


def zeta_hat_integral(sample: CensoredSample, tuning: TuningParams) -> tuple[float, bool]:
    """Same statistic as :func:`zeta_hat`, as ``(1/p(t)) * int_t^inf p(y)/y dy``.

    ``p`` is a step function, constant between consecutive order statistics
    above ``t``, so the integral is a weighted sum of log-gaps.
    """
    t = tuning.t
    p = empirical_survival(sample, t)
    if p < tuning.s:
        return 0.0, True
    knots = np.concatenate(([t], np.sort(_exceedances(sample, t))))
    log_gaps = np.log(knots[1:] / knots[:-1])
    # p(y) = (k - j) / n on (z_(j), z_(j+1)] with z_(0) = t
    at_risk = np.arange(log_gaps.size, 0, -1, dtype=np.float64)
    integral = float(np.sum(at_risk * log_gaps)) / sample.n
    return integral / p, False


def estimate_gamma_x(sample: CensoredSample, tuning: TuningParams) -> EstimateReport:
    """Truncated ratio estimate ``zeta/rho * 1{rho >= h}`` of the data tail index."""
    p = empirical_survival(sample, tuning.t)
    q = empirical_uncensored_survival(sample, tuning.t)
    rho, cut_s = rho_hat(sample, tuning)
    zeta, _ = zeta_hat(sample, tuning)
    cut_h = rho < tuning.h
    return EstimateReport(
        rho_hat=rho,
        zeta_hat=zeta,
        gamma_x_hat=0.0 if cut_h else zeta / rho,
        p_at_t=p,
        q_at_t=q,
        exceedance_count=int(np.count_nonzero(sample.z >= tuning.t)),
        truncated_by_s=cut_s,
        truncated_by_h=cut_h,
        tuning=tuning,
    )
