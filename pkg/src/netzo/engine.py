"""Synchronous powerball-amplified decentralized zeroth-order iteration.

Each round, every agent builds a coordinate-ZO gradient estimate from its
own random streams, then moves by a Laplacian consensus term plus the
powerball-shaped descent term, both evaluated at the pre-round state:

    x_i <- x_i - alpha * sum_j L_ij x_j - eta_k * powerball(g_i, gamma)

Randomness is addressed by (purpose, agent, iteration) counters from one
master seed, so runs are reproducible bit for bit and agent updates could
execute in any order, or in parallel, without changing the result.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DivergedError
from .estimator import (ONE_POINT, TWO_POINT, one_point_estimate,
                        sample_coordinates, two_point_estimate)
from .graph import consensus_step, disagreement, laplacian, network_average, spectrum
from .powerball import powerball
from .rng import STREAM_COORDS, STREAM_INIT, substream
from .schedules import eta_at, radius_at


@dataclass(frozen=True)
class Budgets:
    function_queries: int = 0
    scalar_transmissions: int = 0


@dataclass(frozen=True)
class NetworkState:
    """Stacked agent decisions (one row per agent) plus counters."""

    x: np.ndarray
    k: int = 0
    budgets: Budgets = field(default_factory=Budgets)


@dataclass(frozen=True)
class MetricsRow:
    k: int
    f_avg: float
    grad_sq: float
    disagreement: float
    eta: float
    delta: float
    function_queries: int
    scalar_transmissions: int
    extras: dict = field(default_factory=dict)


@dataclass(frozen=True)
class RunConfig:
    """Everything one run needs: problem, graph, gains, schedules, seed.

    ``alpha`` may be given directly or left ``None`` to use
    ``alpha_fraction * alpha_max`` of the instantiated graph.
    """

    topology: object
    problem: object
    step_schedule: object
    radius_schedule: object
    horizon: int
    gamma: float = 0.7
    alpha: float = None
    alpha_fraction: float = 0.9
    estimator_kind: str = TWO_POINT
    n_c: int = 1
    seed: int = 0
    x0: np.ndarray = None

    def __post_init__(self):
        if not 0.0 <= self.gamma <= 1.0:
            raise ConfigError(f"gamma must lie in [0, 1], got {self.gamma}")
        if self.gamma < 0.5:
            warnings.warn(
                f"gamma={self.gamma} is below the analyzed range [0.5, 1]; "
                "rate guarantees do not apply",
                stacklevel=2,
            )
        if self.horizon < 0:
            raise ConfigError(f"horizon must be >= 0, got {self.horizon}")
        if self.estimator_kind not in (ONE_POINT, TWO_POINT):
            raise ConfigError(f"estimator kind must be '{ONE_POINT}' or '{TWO_POINT}', got {self.estimator_kind!r}")
        if self.seed < 0:
            raise ConfigError(f"seed must be non-negative, got {self.seed}")


class Simulation:
    """One configured run: owns the graph operators, problem, and schedules."""

    def __init__(self, cfg):
        self.cfg = cfg
        self.topology = cfg.topology
        self.problem = cfg.problem
        n, p = self.topology.n, self.problem.dim
        if self.problem.n_agents != n:
            raise ConfigError(f"problem has {self.problem.n_agents} agents but graph has {n} nodes")
        if not 1 <= cfg.n_c <= p:
            raise ConfigError(f"n_c must lie in [1, {p}], got {cfg.n_c}")
        self.L = laplacian(self.topology)
        if n > 1:
            self.spectrum = spectrum(self.L)
            alpha = cfg.alpha if cfg.alpha is not None else cfg.alpha_fraction * self.spectrum.alpha_max
            if not 0.0 < alpha < self.spectrum.alpha_max:
                raise ConfigError(
                    f"alpha must lie in (0, {self.spectrum.alpha_max:.6g}) for this graph, got {alpha:.6g}"
                )
        else:
            # Single agent: the Laplacian term vanishes, any finite gain is inert.
            self.spectrum = None
            alpha = cfg.alpha if cfg.alpha is not None else 0.0
            if not (math.isfinite(alpha) and alpha >= 0.0):
                raise ConfigError(f"alpha must be finite and non-negative, got {alpha}")
        self.alpha = float(alpha)
        if cfg.step_schedule.kind == "nonconvex" and cfg.horizon * p < n**3:
            warnings.warn(
                f"horizon T={cfg.horizon} is below n^3/p = {n**3 / p:.0f}; the "
                "nonconvex-rate transient term may dominate",
                stacklevel=2,
            )
        self._estimate = one_point_estimate if cfg.estimator_kind == ONE_POINT else two_point_estimate

    def initial_state(self):
        cfg = self.cfg
        n, p = self.topology.n, self.problem.dim
        if cfg.x0 is not None:
            x = np.array(cfg.x0, dtype=float)
            if x.shape != (n, p):
                raise ConfigError(f"x0 must have shape ({n}, {p}), got {x.shape}")
        else:
            x = self.problem.default_initial_state()
            if x is None:
                x = np.stack([substream(cfg.seed, STREAM_INIT, i).standard_normal(p) for i in range(n)])
        return NetworkState(x=x, k=0, budgets=Budgets())

    def estimates_at(self, state):
        """The stacked gradient estimates all agents build at this state.

        Re-derivable at any time because the streams are addressed by
        (agent, iteration), not by call order.
        """
        cfg = self.cfg
        n, p = self.topology.n, self.problem.dim
        delta = radius_at(cfg.radius_schedule, state.k, p, n)
        g = np.empty_like(state.x)
        queries = 0
        for i in range(n):
            rng = substream(cfg.seed, STREAM_COORDS, i, state.k)
            sample = sample_coordinates(p, cfg.n_c, rng, delta)
            est = self._estimate(self.problem, i, state.x[i], sample, tag=state.k)
            g[i] = est.vector
            queries += est.queries_used
        return g, queries

    def step(self, state):
        """Advance one synchronous round from the pre-round state."""
        cfg = self.cfg
        if state.k >= cfg.horizon:
            raise ConfigError(f"schedule exhausted: iteration {state.k} >= horizon {cfg.horizon}")
        eta = eta_at(cfg.step_schedule, state.k)
        g, queries = self.estimates_at(state)
        x_new = consensus_step(state.x, self.L, self.alpha) - eta * powerball(g, cfg.gamma)
        if not np.all(np.isfinite(x_new)):
            raise DivergedError(state.k)
        budgets = Budgets(
            function_queries=state.budgets.function_queries + queries,
            scalar_transmissions=state.budgets.scalar_transmissions
            + 2 * self.topology.edge_count * self.problem.dim,
        )
        return NetworkState(x=x_new, k=state.k + 1, budgets=budgets)

    def metrics(self, state):
        cfg = self.cfg
        n, p = self.topology.n, self.problem.dim
        x_mean = network_average(state.x)
        # Metric overflow is expected on the row just before a divergence
        # abort; the step guard is what raises.
        with np.errstate(over="ignore", invalid="ignore"):
            grad = self.problem.global_gradient(x_mean)
            return self._metrics_row(state, x_mean, grad)

    def _metrics_row(self, state, x_mean, grad):
        cfg = self.cfg
        n, p = self.topology.n, self.problem.dim
        return MetricsRow(
            k=state.k,
            f_avg=self.problem.global_value(x_mean),
            grad_sq=float(grad @ grad),
            disagreement=disagreement(state.x),
            eta=eta_at(cfg.step_schedule, state.k),
            delta=radius_at(cfg.radius_schedule, state.k, p, n),
            function_queries=state.budgets.function_queries,
            scalar_transmissions=state.budgets.scalar_transmissions,
            extras=self.problem.extra_metrics(state.x, x_mean),
        )

    def run(self, on_state=None):
        """Execute the full horizon; one metrics row per iteration.

        ``on_state`` receives every ``NetworkState`` including the initial
        one (used by the experiment layer to record trajectories). On
        divergence the partial rows ride along on the raised error.
        """
        state = self.initial_state()
        rows = [self.metrics(state)]
        if on_state is not None:
            on_state(state)
        for _ in range(self.cfg.horizon):
            try:
                state = self.step(state)
            except DivergedError as err:
                raise DivergedError(err.iteration, rows) from None
            rows.append(self.metrics(state))
            if on_state is not None:
                on_state(state)
        return rows


def run(cfg, on_state=None):
    """Build a :class:`Simulation` from the config and run it."""
    return Simulation(cfg).run(on_state=on_state)


def rate_regression(rows, metric, k_min=1, running_average=False):
    """Log-log slope of a metric column against the iteration index.

    Fits ``log(value) ~ slope * log(k) + intercept`` over rows with
    ``k >= k_min``; with ``running_average=True`` the metric is first
    replaced by its prefix mean (the form the averaged stationarity
    bounds are stated in). Non-positive values cannot be log-fitted and
    are dropped with a warning. Returns ``(slope, intercept, r_squared)``.
    """
    ks = np.array([row.k for row in rows], dtype=float)
    if metric in ("f_avg", "grad_sq", "disagreement"):
        values = np.array([getattr(row, metric) for row in rows], dtype=float)
    else:
        values = np.array([row.extras[metric] for row in rows], dtype=float)
    if running_average:
        values = np.cumsum(values) / np.arange(1, values.size + 1)
    keep = ks >= k_min
    ks, values = ks[keep], values[keep]
    positive = values > 0.0
    dropped = int(np.sum(~positive))
    if dropped:
        warnings.warn(f"rate_regression: dropped {dropped} non-positive values of {metric}", stacklevel=2)
    ks, values = ks[positive], values[positive]
    if ks.size < 10:
        raise ValueError(f"rate regression needs at least 10 usable rows beyond k_min, got {ks.size}")
    log_k, log_v = np.log(ks), np.log(values)
    slope, intercept = np.polyfit(log_k, log_v, 1)
    fitted = slope * log_k + intercept
    total = float(np.sum((log_v - log_v.mean()) ** 2))
    r_squared = 1.0 - float(np.sum((log_v - fitted) ** 2)) / total if total > 0 else 1.0
    return float(slope), float(intercept), r_squared
