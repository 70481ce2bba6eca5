"""Coordinate-subset zeroth-order gradient estimators.

Both estimators perturb a uniformly sampled subset of ``n_c`` canonical
coordinates and rescale by ``p / n_c`` so the subset-averaged estimate
matches the full finite-difference gradient. All function values inside
one estimate share a single stochastic sample (the query tag), and the
one-point form evaluates the unperturbed base point once, which pins the
query counts at ``n_c + 1`` and ``2 n_c``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

ONE_POINT = "one-point"
TWO_POINT = "two-point"


@dataclass(frozen=True)
class CoordinateSample:
    """A drawn coordinate subset with one positive smoothing radius each."""

    indices: np.ndarray
    radii: np.ndarray

    def __post_init__(self):
        indices = np.asarray(self.indices, dtype=int)
        radii = np.broadcast_to(np.asarray(self.radii, dtype=float), indices.shape).copy()
        if indices.ndim != 1 or indices.size == 0:
            raise ValueError("coordinate subset must be a non-empty 1-d index array")
        if len(np.unique(indices)) != indices.size:
            raise ValueError("coordinate subset contains repeated indices")
        if np.any(radii <= 0.0):
            raise ValueError("smoothing radii must be positive")
        object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "radii", radii)

    @property
    def size(self):
        return self.indices.size


@dataclass(frozen=True)
class GradientEstimate:
    """A coordinate-ZO estimate; zero outside the sampled subset."""

    vector: np.ndarray
    queries_used: int
    kind: str


def sample_coordinates(dim, n_c, rng, radius):
    """Uniform without-replacement coordinate subset from a seeded stream.

    ``radius`` may be a scalar (shared across the subset, the default used
    by the engine) or a length-``n_c`` array.
    """
    if not 1 <= n_c <= dim:
        raise ConfigError(f"subset size must lie in [1, {dim}], got {n_c}")
    indices = rng.choice(dim, size=n_c, replace=False)
    return CoordinateSample(indices, radius)


def _probe_points(x, sample, sign):
    points = np.repeat(x[None, :], sample.size, axis=0)
    points[np.arange(sample.size), sample.indices] += sign * sample.radii
    return points


def one_point_estimate(problem, agent, x, sample, tag):
    """Forward-difference estimate from ``n_c + 1`` values at one sample.

    Component ``l`` of the result is
    ``(p / n_c) * (F(x + d_l e_l) - F(x)) / d_l`` with the base value
    evaluated once and reused.
    """
    x = np.asarray(x, dtype=float)
    m = sample.size
    points = np.repeat(x[None, :], m + 1, axis=0)
    points[np.arange(1, m + 1), sample.indices] += sample.radii
    values = problem.query_many(agent, points, tag)
    vector = np.zeros(x.size)
    vector[sample.indices] = (values[1:] - values[0]) / sample.radii
    vector *= x.size / m
    return GradientEstimate(vector, m + 1, ONE_POINT)


def two_point_estimate(problem, agent, x, sample, tag, minus_tag=None):
    """Central-difference estimate from ``2 n_c`` values at one sample.

    ``minus_tag`` lets the mirrored evaluations draw a different sample;
    it defaults to the shared-sample form and the engine never sets it.
    """
    x = np.asarray(x, dtype=float)
    m = sample.size
    if minus_tag is None:
        rows = np.arange(m)
        points = np.repeat(x[None, :], 2 * m, axis=0)
        points[rows, sample.indices] += sample.radii
        points[m + rows, sample.indices] -= sample.radii
        values = problem.query_many(agent, points, tag)
        upper, lower = values[:m], values[m:]
    else:
        upper = problem.query_many(agent, _probe_points(x, sample, +1.0), tag)
        lower = problem.query_many(agent, _probe_points(x, sample, -1.0), minus_tag)
    vector = np.zeros(x.size)
    vector[sample.indices] = (upper - lower) / (2.0 * sample.radii)
    vector *= x.size / m
    return GradientEstimate(vector, 2 * m, TWO_POINT)


def queries_per_iteration(kind, n_c):
    """Function values one agent spends per iteration for an estimator kind."""
    if kind == ONE_POINT:
        return n_c + 1
    if kind == TWO_POINT:
        return 2 * n_c
    raise ConfigError(f"unknown estimator kind {kind!r}")
