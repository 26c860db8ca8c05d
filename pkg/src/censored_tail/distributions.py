"""
Heavy-tailed laws for the data and censoring times, a censoring simulator,
and analytic reference quantities.

A log-gamma variable is ``support_min * exp(W)`` with ``W ~ Gamma(shape_beta,
rate 1/gamma)``; it has density proportional to
``x**(-1/gamma - 1) * log(x)**(shape_beta - 1)`` on ``x >= 1`` and survival
``Q(shape_beta, log(x) / gamma)``.  ``shape_beta == 1`` is the Pareto law.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from ._special import log_gammaincc

__all__ = [
    "TailKind",
    "TailModel",
    "CensorModel",
    "CensoredSample",
    "survival",
    "log_survival",
    "density",
    "log_density",
    "sample",
    "simulate_censored",
    "lambda_prob",
    "expected_censor_rate",
    "a2_diagnostic",
    "as_generator",
]

# Tail mass left beyond the quadrature cut-off in expected_censor_rate.
_TAIL_REMAINDER = 1e-10


class TailKind(str, enum.Enum):
    PARETO = "pareto"
    LOG_GAMMA = "loggamma"


@dataclass(frozen=True)
class TailModel:
    """A Pareto or log-gamma law with tail index ``gamma``.

    ``shape_beta`` is the gamma shape of ``log(X / support_min)``; it is
    fixed to 1 for Pareto models.
    """

    kind: TailKind
    gamma: float
    shape_beta: float = 1.0
    support_min: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", TailKind(self.kind))
        for name in ("gamma", "shape_beta", "support_min"):
            value = float(getattr(self, name))
            if not (math.isfinite(value) and value > 0.0):
                raise ValueError(f"{name} must be a finite positive number, got {value}")
            object.__setattr__(self, name, value)
        if not math.isfinite(1.0 / self.gamma):
            raise ValueError(f"gamma={self.gamma} gives a non-finite alpha")
        if self.kind is TailKind.PARETO and self.shape_beta != 1.0:
            raise ValueError("Pareto models have shape_beta fixed to 1")
        if self.kind is TailKind.LOG_GAMMA and self.support_min != 1.0:
            raise ValueError("log-gamma models are supported on x >= 1")

    @classmethod
    def pareto(cls, gamma, support_min=1.0):
        return cls(TailKind.PARETO, gamma, 1.0, support_min)

    @classmethod
    def log_gamma(cls, gamma, shape_beta):
        return cls(TailKind.LOG_GAMMA, gamma, shape_beta, 1.0)

    @property
    def alpha(self):
        """Pareto exponent, ``1 / gamma``."""
        return 1.0 / self.gamma

    def to_dict(self):
        return {
            "kind": self.kind.value,
            "gamma": self.gamma,
            "shape_beta": self.shape_beta,
            "support_min": self.support_min,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            TailKind(d["kind"]),
            d["gamma"],
            d.get("shape_beta", 1.0),
            d.get("support_min", 1.0),
        )


@dataclass(frozen=True)
class CensorModel:
    """Independent data law ``data`` (X) and censoring law ``censor`` (Y)."""

    data: TailModel
    censor: TailModel

    @property
    def gamma_z(self):
        """Tail index of ``Z = min(X, Y)``."""
        gx, gy = self.data.gamma, self.censor.gamma
        return gx * gy / (gx + gy)

    @property
    def rho_limit(self):
        """Limit of the uncensored fraction among large Z, ``gamma_Y / (gamma_X + gamma_Y)``."""
        gx, gy = self.data.gamma, self.censor.gamma
        return gy / (gx + gy)

    @property
    def support_min(self):
        return max(self.data.support_min, self.censor.support_min)

    def to_dict(self):
        return {"data": self.data.to_dict(), "censor": self.censor.to_dict()}

    @classmethod
    def from_dict(cls, d):
        return cls(TailModel.from_dict(d["data"]), TailModel.from_dict(d["censor"]))


@dataclass(frozen=True, eq=False)
class CensoredSample:
    """Observed pairs ``(z_i, delta_i)`` with ``z_i = min(X_i, Y_i)``.

    Arrays are copied and frozen on construction.
    """

    z: np.ndarray
    delta: np.ndarray

    def __post_init__(self):
        z = np.array(self.z, dtype=np.float64).reshape(-1)
        delta = np.array(self.delta).reshape(-1)
        if z.size < 1:
            raise ValueError("a censored sample needs at least one observation")
        if z.shape != delta.shape:
            raise ValueError(f"z has {z.size} entries but delta has {delta.size}")
        if not np.all(np.isfinite(z)) or np.any(z <= 0.0):
            raise ValueError("every z must be finite and strictly positive")
        if not np.all((delta == 0) | (delta == 1)):
            raise ValueError("every delta must be 0 or 1")
        delta = delta.astype(np.int8)
        z.flags.writeable = False
        delta.flags.writeable = False
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "delta", delta)

    @property
    def n(self):
        return int(self.z.size)

    @property
    def censor_fraction(self):
        """Fraction of censored observations, ``1 - mean(delta)``."""
        return 1.0 - float(np.mean(self.delta))


def as_generator(rng_state):
    """Accept a ``numpy.random.Generator``, a ``SeedSequence`` or an integer seed."""
    if isinstance(rng_state, np.random.Generator):
        return rng_state
    return np.random.default_rng(rng_state)


def _log_excess(model, x):
    # gamma-variable argument alpha * log(x / support_min)
    return model.alpha * math.log(x / model.support_min)


def log_survival(model: TailModel, x: float) -> float:
    """``log P(X > x)``, accurate far into the tail."""
    x = float(x)
    if not x > 0.0:
        raise ValueError(f"survival is defined for x > 0, got {x}")
    if x <= model.support_min:
        return 0.0
    if model.shape_beta == 1.0:
        return -_log_excess(model, x)
    return log_gammaincc(model.shape_beta, _log_excess(model, x))


def survival(model: TailModel, x: float) -> float:
    """Exact tail probability ``P(X > x)``; equals 1 at and below ``support_min``."""
    return math.exp(log_survival(model, x))


def log_density(model: TailModel, x: float) -> float:
    x = float(x)
    if not x > model.support_min:
        raise ValueError(f"density requires x > support_min={model.support_min}, got {x}")
    u = math.log(x / model.support_min)
    a, b = model.alpha, model.shape_beta
    return b * math.log(a) - math.lgamma(b) + (b - 1.0) * math.log(u) - a * u - math.log(x)


def density(model: TailModel, x: float) -> float:
    return math.exp(log_density(model, x))


def sample(model: TailModel, count: int, rng_state) -> np.ndarray:
    """Draw ``count`` i.i.d. variates as ``support_min * exp(W)``.

    ``W`` is a gamma variate with shape ``shape_beta`` and rate ``1/gamma``
    (Marsaglia-Tsang in numpy's generator).
    """
    if count < 1:
        raise ValueError(f"count must be at least 1, got {count}")
    rng = as_generator(rng_state)
    w = rng.gamma(model.shape_beta, model.gamma, size=int(count))
    return model.support_min * np.exp(w)


def simulate_censored(cm: CensorModel, n: int, rng_state) -> CensoredSample:
    """Draw X then Y independently and return ``(min(X, Y), 1{X <= Y})``."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    rng = as_generator(rng_state)
    x = sample(cm.data, n, rng)
    y = sample(cm.censor, n, rng)
    return CensoredSample(np.minimum(x, y), (x <= y).astype(np.int8))


def lambda_prob(cm: CensorModel, x: float) -> float:
    """Probability that an observation equal to ``x`` is uncensored.

    ``f_X P_Y / (f_X P_Y + f_Y P_X)`` evaluated in log space.
    """
    x = float(x)
    if not x > cm.support_min:
        raise ValueError(f"lambda_prob requires x > {cm.support_min}, got {x}")
    log_num = log_density(cm.data, x) + log_survival(cm.censor, x)
    log_other = log_density(cm.censor, x) + log_survival(cm.data, x)
    # num / (num + other) = 1 / (1 + exp(log_other - log_num))
    return 1.0 / (1.0 + math.exp(min(log_other - log_num, 700.0)))


def _log_quantile(model, tail):
    """Smallest ``u`` with ``P(log X > u) <= tail``, by bracketing and bisection."""
    lo = math.log(model.support_min)
    target = math.log(tail)
    hi = lo + 1.0
    while log_survival(model, math.exp(hi)) > target:
        hi = lo + 2.0 * (hi - lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if log_survival(model, math.exp(mid)) > target:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-10 * max(1.0, hi):
            break
    return hi


def expected_censor_rate(cm: CensorModel) -> float:
    """``P(X > Y)`` by adaptive quadrature in ``u = log y``.

    The integrand is ``P_X(e^u)`` times the density of ``log Y``.  The upper
    limit leaves less than 1e-10 of censoring mass uncovered.
    """
    y_model = cm.censor
    lower = math.log(y_model.support_min)
    upper = _log_quantile(y_model, _TAIL_REMAINDER)
    a, b = y_model.alpha, y_model.shape_beta
    log_norm = b * math.log(a) - math.lgamma(b)

    def integrand(u):
        v = u - lower
        if v <= 0.0:
            return 0.0
        log_fy = log_norm + (b - 1.0) * math.log(v) - a * v
        return math.exp(log_survival(cm.data, math.exp(u)) + log_fy)

    # Split near the support edge, where shape_beta < 1 puts an integrable singularity.
    knot = lower + min(1.0, 0.5 * (upper - lower))
    total = 0.0
    for left, right in ((lower, knot), (knot, upper)):
        value, abserr = integrate.quad(integrand, left, right, epsabs=1e-11, epsrel=1e-10, limit=500)
        if not (math.isfinite(value) and abserr <= 1e-8):
            raise ArithmeticError(
                f"censor-rate quadrature did not converge on [{left}, {right}] (error estimate {abserr})"
            )
        total += value
    return min(max(total, 0.0), 1.0)


def a2_diagnostic(model: TailModel, x: float) -> float:
    """``|x L'(x) / L(x)|`` for the slowly varying factor ``L = P(X > x) x^alpha``.

    Uses the integral identity
    ``|beta - 1| * int_x^inf y^(-alpha-1) log^(beta-2) y dy / int_x^inf y^(-alpha-1) log^(beta-1) y dy``,
    evaluated by quadrature in ``u = log y`` and rescaled by ``exp(alpha * log x)``
    so neither integral underflows.
    """
    x = float(x)
    if not x > model.support_min * math.e:
        raise ValueError(f"a2_diagnostic requires x > support_min * e, got {x}")
    b = model.shape_beta
    if b == 1.0:
        return 0.0
    a = model.alpha
    start = math.log(x / model.support_min)

    # v = u - start; exp(-a v) < e^-80 beyond the cut-off, far below the
    # polynomial growth of (start + v)^(beta - 1) on the grids used here.
    cutoff = 80.0 / a

    def moment(power):
        value, err = integrate.quad(
            lambda v: math.exp(-a * v) * (start + v) ** power, 0.0, cutoff, epsabs=0.0, epsrel=1e-12, limit=500
        )
        if not (value > 0.0 and err <= 1e-10 * value):
            raise ArithmeticError(f"A2 quadrature did not converge at x={x}")
        return value

    return abs(b - 1.0) * moment(b - 2.0) / moment(b - 1.0)
