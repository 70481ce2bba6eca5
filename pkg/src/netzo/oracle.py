"""Per-agent stochastic function-value oracles and benchmark problems.

A problem exposes noisy zeroth-order queries only. Every query carries an
integer ``tag``; evaluations sharing ``(agent, tag)`` see the same
stochastic realization, which is what lets finite-difference estimators
difference two function values at a common sample. The estimators call
``query_many`` so one realization covers a whole batch of probe points.

Analytic gradients (``global_gradient``) are diagnostics only: metrics
and tests read them, the optimization loop never does.

Problem interface (duck-typed):
  n_agents, dim                      -- network size and decision dimension
  query(agent, x, tag) -> float      -- one noisy value F_i(x, xi_tag)
  query_many(agent, X, tag) -> array -- same realization across rows of X
  global_value(x) -> float           -- exact f(x) = mean_i E[F_i(x, .)]
  global_gradient(x) -> array        -- exact grad f(x), diagnostics only
  extra_metrics(x_all, x_mean)       -- optional problem-specific metrics
  default_initial_state()            -- optional per-agent start, or None
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .rng import STREAM_NOISE, substream


class Problem:
    """Shared plumbing for the benchmark problem families."""

    n_agents = 0
    dim = 0

    def _check_point(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise ValueError(f"point has shape {x.shape}, expected ({self.dim},)")
        return x

    def _check_agent(self, agent):
        if not 0 <= agent < self.n_agents:
            raise ValueError(f"agent index {agent} out of range [0, {self.n_agents})")
        return int(agent)

    def _noise_rng(self, agent, tag):
        return substream(self.seed, STREAM_NOISE, agent, tag)

    def query(self, agent, x, tag):
        """One stochastic function value; deterministic in (agent, x, tag)."""
        return float(self.query_many(agent, np.asarray(x, dtype=float)[None, :], tag)[0])

    def extra_metrics(self, x_all, x_mean):
        return {}

    def default_initial_state(self):
        return None


# ---------------------------------------------------------------------------
# Quadratic family with a known PL constant
# ---------------------------------------------------------------------------


class QuadraticProblem(Problem):
    """Agent costs ``0.5 x'Q_i x - b_i'x`` with strongly convex average.

    The average objective is ``nu``-PL with ``nu`` the smallest eigenvalue
    of the averaged curvature matrix, and the minimizer is closed form,
    so objective residuals can be measured exactly. Query noise enters as
    ``noise_std * xi' x`` with a standard normal ``xi`` fixed per
    ``(agent, tag)``, which perturbs gradients coordinatewise without
    cancelling out of finite differences.
    """

    def __init__(self, Q, b, noise_std=0.0, seed=0):
        Q = np.asarray(Q, dtype=float)
        b = np.asarray(b, dtype=float)
        if Q.ndim != 3 or Q.shape[1] != Q.shape[2] or b.shape != Q.shape[:2]:
            raise ConfigError(f"expected Q (n, p, p) and b (n, p), got {Q.shape} and {b.shape}")
        self.Q = Q
        self.b = b
        self.n_agents, self.dim = b.shape
        self.noise_std = float(noise_std)
        self.seed = int(seed)
        self.Q_avg = Q.mean(axis=0)
        self.b_avg = b.mean(axis=0)
        eigs = np.linalg.eigvalsh(self.Q_avg)
        if eigs[0] <= 0:
            raise ConfigError(f"averaged curvature must be positive definite, min eigenvalue {eigs[0]:.3e}")
        self.pl_constant = float(eigs[0])
        self.smoothness = float(eigs[-1])
        self.x_star = np.linalg.solve(self.Q_avg, self.b_avg)
        self.f_star = float(0.5 * self.x_star @ self.Q_avg @ self.x_star - self.b_avg @ self.x_star)

    def local_value(self, agent, x):
        agent = self._check_agent(agent)
        x = self._check_point(x)
        return float(0.5 * x @ self.Q[agent] @ x - self.b[agent] @ x)

    def query_many(self, agent, points, tag):
        agent = self._check_agent(agent)
        points = np.asarray(points, dtype=float)
        if points.ndim != 2 or points.shape[1] != self.dim:
            raise ValueError(f"points must be (m, {self.dim}), got {points.shape}")
        values = 0.5 * np.einsum("mi,ij,mj->m", points, self.Q[agent], points) - points @ self.b[agent]
        if self.noise_std > 0.0:
            xi = self._noise_rng(agent, tag).standard_normal(self.dim)
            values = values + self.noise_std * (points @ xi)
        return values

    def global_value(self, x):
        x = self._check_point(x)
        return float(0.5 * x @ self.Q_avg @ x - self.b_avg @ x)

    def global_gradient(self, x):
        x = self._check_point(x)
        return self.Q_avg @ x - self.b_avg

    def extra_metrics(self, x_all, x_mean):
        return {"f_residual": self.global_value(x_mean) - self.f_star}


def make_quadratic(seed, n_agents=5, dim=20, noise_std=0.5, eig_range=(0.5, 2.0),
                   heterogeneity=0.3):
    """Random quadratic testbed with per-agent curvature and known minimum.

    ``heterogeneity`` scales each agent's deviation from the network-mean
    cost. Local gradients do not vanish at the shared minimizer, and for
    fractional gains the nonlinear map does not commute with averaging
    them, which shifts the algorithm's fixed point slightly off the true
    minimizer when the deviations are large relative to the oracle noise.
    The moderate default keeps agents genuinely distinct while leaving
    that offset well below the statistical error at desk-scale horizons.
    """
    rng = substream(seed, STREAM_NOISE, 0, 0)
    lo, hi = eig_range
    Q = np.empty((n_agents, dim, dim))
    for i in range(n_agents):
        basis, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
        Q[i] = (basis * rng.uniform(lo, hi, size=dim)) @ basis.T
        Q[i] = 0.5 * (Q[i] + Q[i].T)
    b = rng.standard_normal((n_agents, dim))
    Q_mean, b_mean = Q.mean(axis=0), b.mean(axis=0)
    Q = Q_mean[None, :, :] + heterogeneity * (Q - Q_mean[None, :, :])
    b = b_mean[None, :] + heterogeneity * (b - b_mean[None, :])
    return QuadraticProblem(Q, b, noise_std=noise_std, seed=seed)


# ---------------------------------------------------------------------------
# Sigmoid least-squares classification
# ---------------------------------------------------------------------------


def _sigmoid(z):
    return 1.0 / (1.0 + np.exp(-z))


class ClassificationProblem(Problem):
    """Nonlinear least-squares classification split across agents.

    Each agent owns a disjoint slice of the training set and its local
    cost is ``mean (y - sigmoid(a'x))**2`` over that slice. A query
    evaluates the loss on a minibatch selected by the query tag, so the
    minibatch is the stochastic sample.
    """

    def __init__(self, features, labels, test_features, test_labels, n_agents,
                 batch_size=10, seed=0, x_true=None):
        features = np.asarray(features, dtype=float)
        labels = np.asarray(labels, dtype=float)
        n_train = features.shape[0]
        if n_train % n_agents:
            raise ConfigError(f"{n_train} training samples do not split evenly across {n_agents} agents")
        per_agent = n_train // n_agents
        if not 1 <= batch_size <= per_agent:
            raise ConfigError(f"batch size must lie in [1, {per_agent}], got {batch_size}")
        self.features = features
        self.labels = labels
        self.test_features = np.asarray(test_features, dtype=float)
        self.test_labels = np.asarray(test_labels, dtype=float)
        self.n_agents = int(n_agents)
        self.dim = features.shape[1]
        self.per_agent = per_agent
        self.batch_size = int(batch_size)
        self.seed = int(seed)
        self.x_true = None if x_true is None else np.asarray(x_true, dtype=float)

    def _agent_slice(self, agent):
        start = agent * self.per_agent
        return slice(start, start + self.per_agent)

    @staticmethod
    def _loss(features, labels, points):
        # (m, samples) residual matrix; mean over samples per probe point
        resid = labels[None, :] - _sigmoid(points @ features.T)
        return np.mean(resid**2, axis=1)

    def query_many(self, agent, points, tag):
        agent = self._check_agent(agent)
        points = np.asarray(points, dtype=float)
        if points.ndim != 2 or points.shape[1] != self.dim:
            raise ValueError(f"points must be (m, {self.dim}), got {points.shape}")
        local = self._agent_slice(agent)
        batch = self._noise_rng(agent, tag).choice(self.per_agent, size=self.batch_size, replace=False)
        return self._loss(self.features[local][batch], self.labels[local][batch], points)

    def local_value(self, agent, x):
        """Deterministic local cost: the full-slice mean the minibatches estimate."""
        agent = self._check_agent(agent)
        x = self._check_point(x)
        local = self._agent_slice(agent)
        return float(self._loss(self.features[local], self.labels[local], x[None, :])[0])

    def global_value(self, x):
        x = self._check_point(x)
        return float(self._loss(self.features, self.labels, x[None, :])[0])

    def global_gradient(self, x):
        x = self._check_point(x)
        phi = _sigmoid(self.features @ x)
        weights = 2.0 * (phi - self.labels) * phi * (1.0 - phi)
        return self.features.T @ weights / self.features.shape[0]

    def test_accuracy(self, x):
        """Fraction of held-out points whose thresholded prediction matches."""
        x = self._check_point(x)
        predicted = _sigmoid(self.test_features @ x) > 0.5
        return float(np.mean(predicted == (self.test_labels > 0.5)))

    def extra_metrics(self, x_all, x_mean):
        return {"test_accuracy": self.test_accuracy(x_mean)}

    def default_initial_state(self):
        # Classifier weights conventionally start at zero: every sigmoid
        # reads 0.5 and no agent begins inside a saturated plateau.
        return np.zeros((self.n_agents, self.dim))

    def export_csv(self, train_path, test_path):
        """Dump the generated dataset for inspection."""
        header = [f"a{j}" for j in range(self.dim)] + ["y"]
        for path, feats, labs in ((train_path, self.features, self.labels),
                                  (test_path, self.test_features, self.test_labels)):
            with open(path, "w", newline="") as handle:
                writer = csv.writer(handle)
                writer.writerow(header)
                for row, label in zip(feats, labs):
                    writer.writerow([repr(float(v)) for v in row] + [repr(float(label))])


def make_classification(seed, n_agents=10, dim=100, n_train=2000, n_test=200,
                        batch_size=10, labels="binary"):
    """Synthetic sigmoid classification data, split evenly across agents.

    Features and a ground-truth parameter vector are standard normal;
    labels are the ground-truth sigmoid response, thresholded to {0, 1}
    by default ("binary") or kept as probabilities ("soft").
    """
    if labels not in ("binary", "soft"):
        raise ConfigError(f"labels must be 'binary' or 'soft', got {labels!r}")
    rng = substream(seed, STREAM_NOISE, 0, 0)
    x_true = rng.standard_normal(dim)
    features = rng.standard_normal((n_train + n_test, dim))
    response = _sigmoid(features @ x_true)
    y = (response > 0.5).astype(float) if labels == "binary" else response
    return ClassificationProblem(
        features[:n_train], y[:n_train], features[n_train:], y[n_train:],
        n_agents=n_agents, batch_size=batch_size, seed=seed, x_true=x_true,
    )


# ---------------------------------------------------------------------------
# Gaussian-mixture field and source seeking
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MixtureField:
    """A scalar concentration field: sum of three isotropic Gaussian bumps.

    The first peak is the primary source; the other two model weaker
    interference. Defaults below are this library's choices (the task is
    parameterized, not canonical): amplitudes (10, 4, 4), centers
    (5,5), (1,8), (8,1), widths (1.5, 0.8, 0.8).
    """

    amplitudes: tuple = (10.0, 4.0, 4.0)
    centers: tuple = ((5.0, 5.0), (1.0, 8.0), (8.0, 1.0))
    widths: tuple = (1.5, 0.8, 0.8)

    def __post_init__(self):
        if not (len(self.amplitudes) == len(self.centers) == len(self.widths) == 3):
            raise ConfigError("mixture field must have exactly 3 peaks")
        if self.amplitudes[0] <= 0:
            raise ConfigError("primary amplitude must be positive")
        if any(a < 0 for a in self.amplitudes):
            raise ConfigError("amplitudes must be non-negative")
        if self.amplitudes[0] <= max(self.amplitudes[1:]):
            raise ConfigError("primary amplitude must exceed the interference amplitudes")
        if any(w <= 0 for w in self.widths):
            raise ConfigError("peak widths must be positive")

    @property
    def source(self):
        return np.asarray(self.centers[0], dtype=float)


def field_value(mixture, points):
    """Evaluate the mixture field at one point (2,) or many (m, 2)."""
    pts = np.asarray(points, dtype=float)
    single = pts.ndim == 1
    if single:
        pts = pts[None, :]
    if pts.shape[1] != 2:
        raise ValueError(f"field points must be 2-dimensional, got shape {points.shape}")
    total = np.zeros(pts.shape[0])
    for amp, center, width in zip(mixture.amplitudes, mixture.centers, mixture.widths):
        sq = np.sum((pts - np.asarray(center)) ** 2, axis=1)
        total += amp * np.exp(-sq / (2.0 * width**2))
    return float(total[0]) if single else total


class SourceSeekingProblem(Problem):
    """Estimate a source location from noisy pointwise concentration readings.

    Agent ``i`` sits at a fixed position, reads the field there plus
    Gaussian sensor noise, and fits the primary peak's decay profile: its
    cost is ``0.5 * (reading - A1 * exp(-|x - p_i|^2 / (2 s1^2)))**2``
    in the estimated source location ``x``. Far from the source the
    readings are tiny and the useful signal is weak.
    """

    def __init__(self, mixture, positions, noise_std=0.5, seed=0):
        positions = np.asarray(positions, dtype=float)
        if positions.ndim != 2 or positions.shape[1] != 2:
            raise ConfigError(f"agent positions must be (n, 2), got {positions.shape}")
        self.mixture = mixture
        self.positions = positions
        self.n_agents = positions.shape[0]
        self.dim = 2
        self.noise_std = float(noise_std)
        self.seed = int(seed)
        self.true_readings = field_value(mixture, positions)

    def _model(self, points, position):
        amp = self.mixture.amplitudes[0]
        width = self.mixture.widths[0]
        sq = np.sum((points - position) ** 2, axis=1)
        return amp * np.exp(-sq / (2.0 * width**2))

    def query_many(self, agent, points, tag):
        agent = self._check_agent(agent)
        points = np.asarray(points, dtype=float)
        if points.ndim != 2 or points.shape[1] != 2:
            raise ValueError(f"points must be (m, 2), got {points.shape}")
        reading = self.true_readings[agent]
        if self.noise_std > 0.0:
            reading = reading + self.noise_std * self._noise_rng(agent, tag).standard_normal()
        return 0.5 * (reading - self._model(points, self.positions[agent])) ** 2

    def global_value(self, x):
        """Exact expectation of the averaged cost (includes the noise floor)."""
        x = self._check_point(x)
        model = np.array([self._model(x[None, :], pos)[0] for pos in self.positions])
        mismatch = self.true_readings - model
        return float(np.mean(0.5 * mismatch**2) + 0.5 * self.noise_std**2)

    def global_gradient(self, x):
        x = self._check_point(x)
        width = self.mixture.widths[0]
        grad = np.zeros(2)
        for i in range(self.n_agents):
            model = self._model(x[None, :], self.positions[i])[0]
            model_grad = model * (self.positions[i] - x) / width**2
            grad += (model - self.true_readings[i]) * model_grad
        return grad / self.n_agents

    def extra_metrics(self, x_all, x_mean):
        return {
            "mean_concentration": float(np.mean(field_value(self.mixture, x_all))),
            "dist_to_source": float(np.linalg.norm(x_mean - self.mixture.source)),
        }

    def default_initial_state(self):
        # Each agent starts its source estimate at its own position.
        return self.positions.copy()


def circle_positions(n_agents=5, center=(3.5, 3.5), radius=5.0):
    """Agent positions evenly spaced on a circle.

    The default ring is wide enough that every sensor reads well under
    one concentration unit, keeping all agents in the weak-signal
    regime, while still enclosing the primary source so the averaged
    cost has a single practical minimum (sensors on one side only would
    leave a mirror-image local minimum).
    """
    angles = 2.0 * math.pi * np.arange(n_agents) / n_agents
    return np.asarray(center) + radius * np.stack([np.cos(angles), np.sin(angles)], axis=1)


def make_source_seeking(seed, n_agents=5, mixture=None, positions=None, noise_std=None):
    """Source-seeking problem with the default field and circular swarm."""
    mixture = mixture if mixture is not None else MixtureField()
    if positions is None:
        positions = circle_positions(n_agents)
    if noise_std is None:
        noise_std = 0.05 * mixture.amplitudes[0]
    return SourceSeekingProblem(mixture, positions, noise_std=noise_std, seed=seed)
