"""Step-size and smoothing-radius schedules.

Two named schedule families match the convergence analyses: ``nonconvex``
uses a horizon-dependent constant step ``sqrt(n / (p T))`` with radii
decaying like ``(k + 1)**-0.25``, and ``pl`` uses diminishing steps
``kappa_eta / (k + t1)`` with radii tied to the current step size.
A ``constant`` kind is kept for tests and manual tuning.
"""

import math
from dataclasses import dataclass, field

from .errors import ConfigError

KINDS = ("nonconvex", "pl", "constant")


@dataclass(frozen=True)
class StepSchedule:
    kind: str
    value: float = 0.0        # constant kind
    n_agents: int = 0         # nonconvex kind
    dim: int = 0
    horizon: int = 0
    kappa_eta: float = 0.0    # pl kind
    t1: float = 1.0

    @classmethod
    def nonconvex(cls, n_agents, dim, horizon):
        """Constant step ``sqrt(n) / sqrt(p T)``; the horizon is fixed up front."""
        if horizon < 1:
            raise ConfigError(f"nonconvex step schedule needs horizon >= 1, got {horizon}")
        return cls(kind="nonconvex", n_agents=n_agents, dim=dim, horizon=horizon)

    @classmethod
    def pl(cls, kappa_eta, t1, pl_constant=None):
        """Diminishing step ``kappa_eta / (k + t1)``.

        When the objective's PL constant is supplied, enforce the
        admissibility condition ``kappa_eta > 8 / pl_constant``.
        """
        if kappa_eta <= 0 or t1 <= 0:
            raise ConfigError(f"pl step schedule needs positive kappa_eta and t1, got {kappa_eta}, {t1}")
        if pl_constant is not None and kappa_eta <= 8.0 / pl_constant:
            raise ConfigError(
                f"pl step schedule needs kappa_eta > 8/nu = {8.0 / pl_constant:.6g}, got {kappa_eta}"
            )
        return cls(kind="pl", kappa_eta=kappa_eta, t1=t1)

    @classmethod
    def constant(cls, value):
        if value < 0:
            raise ConfigError(f"constant step must be >= 0, got {value}")
        return cls(kind="constant", value=value)


def eta_at(schedule, k):
    """Step size at iteration ``k``."""
    if schedule.kind == "nonconvex":
        return math.sqrt(schedule.n_agents) / math.sqrt(schedule.dim * schedule.horizon)
    if schedule.kind == "pl":
        return schedule.kappa_eta / (k + schedule.t1)
    if schedule.kind == "constant":
        return schedule.value
    raise ConfigError(f"unknown step schedule kind {schedule.kind!r}")


@dataclass(frozen=True)
class RadiusSchedule:
    kind: str
    kappa_delta: float = 1.0
    step: StepSchedule = field(default=None)  # pl kind ties radii to the step size

    @classmethod
    def nonconvex(cls, kappa_delta=1.0):
        if kappa_delta <= 0:
            raise ConfigError(f"kappa_delta must be positive, got {kappa_delta}")
        return cls(kind="nonconvex", kappa_delta=kappa_delta)

    @classmethod
    def pl(cls, step_schedule, kappa_delta=1.0):
        if kappa_delta <= 0:
            raise ConfigError(f"kappa_delta must be positive, got {kappa_delta}")
        return cls(kind="pl", kappa_delta=kappa_delta, step=step_schedule)

    @classmethod
    def constant(cls, value):
        if value <= 0:
            raise ConfigError(f"constant radius must be positive, got {value}")
        return cls(kind="constant", kappa_delta=value)


def radius_at(schedule, k, dim, n_agents):
    """Smoothing radius at iteration ``k`` (shared by all coordinates)."""
    if schedule.kind == "nonconvex":
        return schedule.kappa_delta / (dim * n_agents * (k + 1)) ** 0.25
    if schedule.kind == "pl":
        eta = eta_at(schedule.step, k)
        return schedule.kappa_delta * math.sqrt(dim * eta / (n_agents + dim))
    if schedule.kind == "constant":
        return schedule.kappa_delta
    raise ConfigError(f"unknown radius schedule kind {schedule.kind!r}")
