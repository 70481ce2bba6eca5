"""Decentralized stochastic zeroth-order optimization with a powerball gain.

Agents on an undirected graph minimize an average of local costs using
only noisy function values: each round combines Laplacian consensus on
the exchanged decisions with a descent step along a coordinate
finite-difference estimate passed through the componentwise map
``sgn(g) |g|**gamma``. The package bundles the iteration itself, three
benchmark problem families, an experiment CLI with CSV outputs, and a
diagnostics suite that checks the algebraic and statistical properties
the method relies on.
"""

from .engine import (Budgets, MetricsRow, NetworkState, RunConfig,
                     Simulation, rate_regression, run)
from .errors import ConfigError, CsvFormatError, DivergedError, TopologyError
from .estimator import (CoordinateSample, GradientEstimate, ONE_POINT,
                        TWO_POINT, one_point_estimate, sample_coordinates,
                        two_point_estimate)
from .graph import (LaplacianSpectrum, Topology, complete, consensus_step,
                    disagreement, erdos_renyi, laplacian, network_average,
                    ring, spectrum)
from .oracle import (ClassificationProblem, MixtureField, QuadraticProblem,
                     SourceSeekingProblem, circle_positions, field_value,
                     make_classification, make_quadratic, make_source_seeking)
from .powerball import DEFAULT_GAMMA, gain_ratio, powerball
from .rng import substream
from .schedules import RadiusSchedule, StepSchedule, eta_at, radius_at

__version__ = "0.1.0"

__all__ = [
    "Budgets", "ClassificationProblem", "ConfigError", "CoordinateSample",
    "CsvFormatError", "DEFAULT_GAMMA", "DivergedError", "GradientEstimate",
    "LaplacianSpectrum", "MetricsRow", "MixtureField", "NetworkState",
    "ONE_POINT", "QuadraticProblem", "RadiusSchedule", "RunConfig",
    "Simulation", "SourceSeekingProblem", "StepSchedule", "TWO_POINT",
    "Topology", "TopologyError", "circle_positions", "complete",
    "consensus_step", "disagreement", "erdos_renyi", "eta_at", "field_value",
    "gain_ratio", "laplacian", "make_classification", "make_quadratic",
    "make_source_seeking", "network_average", "one_point_estimate",
    "powerball", "radius_at", "rate_regression", "ring", "run",
    "sample_coordinates", "spectrum", "substream", "two_point_estimate",
]
