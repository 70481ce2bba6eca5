"""Flat key-value run configuration.

Config files are plain text: one ``section.key = value`` assignment per
line, ``#`` comments, blank lines ignored. Lists use commas, point lists
use semicolons between points (``field.centers = 5,5; 1,8; 8,1``). The
full schema is documented in the README; shipped presets under
``netzo/presets/`` are the reference configurations.
"""

import math
import os

from .errors import ConfigError
from .estimator import ONE_POINT, TWO_POINT
from .graph import complete, erdos_renyi, ring
from .oracle import (MixtureField, make_classification, make_quadratic,
                     make_source_seeking)
from .rng import data_seed
from .schedules import RadiusSchedule, StepSchedule
from .engine import RunConfig

# Headroom multiplier applied to the admissibility threshold 8/nu when the
# config leaves kappa_eta unset.
KAPPA_ETA_MARGIN = 1.25

PRESET_DIR = os.path.join(os.path.dirname(__file__), "presets")
PRESET_NAMES = ("classification", "source_seeking", "pl_quadratic", "diagnostics")


def parse_config_text(text, source="<config>"):
    """Parse the flat key-value format into an ordered dict of strings."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip().lower()
        value = value.strip()
        if not key:
            raise ConfigError(f"{source}:{lineno}: empty key")
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        values[key] = value
    return values


def load_config(path_or_name):
    """Load a config file by path, or a shipped preset by name."""
    path = str(path_or_name)
    if not os.path.exists(path):
        candidate = os.path.join(PRESET_DIR, f"{path}.cfg")
        if path in PRESET_NAMES and os.path.exists(candidate):
            path = candidate
        else:
            raise ConfigError(f"config file {path_or_name!r} not found (presets: {', '.join(PRESET_NAMES)})")
    with open(path) as handle:
        return parse_config_text(handle.read(), source=path)


# ---------------------------------------------------------------------------
# Typed accessors with field-level error messages
# ---------------------------------------------------------------------------


def _convert(conf, key, kind, value):
    try:
        if kind is bool:
            lowered = value.lower()
            if lowered in ("1", "true", "yes"):
                return True
            if lowered in ("0", "false", "no"):
                return False
            raise ValueError(value)
        return kind(value)
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {value!r} as {kind.__name__}") from None


def get(conf, key, kind=str, default=None, required=False, choices=None):
    if key not in conf:
        if required:
            raise ConfigError(f"{key}: required key is missing")
        return default
    value = _convert(conf, key, kind, conf[key])
    if choices is not None and value not in choices:
        raise ConfigError(f"{key}: must be one of {', '.join(map(str, choices))}, got {value!r}")
    return value


def get_list(conf, key, kind=float, default=None):
    if key not in conf:
        return default
    raw = conf[key]
    try:
        return [kind(part.strip()) for part in raw.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {raw!r} as a comma list of {kind.__name__}") from None


def get_points(conf, key, default=None):
    if key not in conf:
        return default
    points = []
    for chunk in conf[key].split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = [part.strip() for part in chunk.split(",")]
        try:
            points.append(tuple(float(part) for part in parts))
        except ValueError:
            raise ConfigError(f"{key}: cannot parse point {chunk!r}") from None
    return points


# ---------------------------------------------------------------------------
# Building the concrete run pieces
# ---------------------------------------------------------------------------


def build_topology(conf, seed):
    kind = get(conf, "graph.kind", str, required=True, choices=("ring", "erdos_renyi", "complete"))
    n = get(conf, "graph.n", int, required=True)
    if kind == "ring":
        return ring(n)
    if kind == "complete":
        return complete(n)
    prob = get(conf, "graph.prob", float, required=True)
    graph_seed = get(conf, "graph.seed", int, default=seed)
    return erdos_renyi(n, prob, graph_seed)


def build_problem(conf, n_agents, seed):
    kind = get(conf, "problem.kind", str, required=True,
               choices=("classification", "source_seeking", "quadratic"))
    problem_seed = get(conf, "problem.seed", int, default=data_seed(seed))
    if kind == "classification":
        return make_classification(
            problem_seed,
            n_agents=n_agents,
            dim=get(conf, "problem.dim", int, default=100),
            n_train=get(conf, "problem.train", int, default=2000),
            n_test=get(conf, "problem.test", int, default=200),
            batch_size=get(conf, "problem.batch", int, default=10),
            labels=get(conf, "problem.labels", str, default="binary", choices=("binary", "soft")),
        )
    if kind == "quadratic":
        return make_quadratic(
            problem_seed,
            n_agents=n_agents,
            dim=get(conf, "problem.dim", int, default=20),
            noise_std=get(conf, "problem.noise_std", float, default=0.5),
        )
    field_kwargs = {}
    amplitudes = get_list(conf, "field.amplitudes", float)
    if amplitudes is not None:
        field_kwargs["amplitudes"] = tuple(amplitudes)
    centers = get_points(conf, "field.centers")
    if centers is not None:
        field_kwargs["centers"] = tuple(centers)
    widths = get_list(conf, "field.widths", float)
    if widths is not None:
        field_kwargs["widths"] = tuple(widths)
    mixture = MixtureField(**field_kwargs)
    positions = get_points(conf, "field.positions")
    return make_source_seeking(
        problem_seed,
        n_agents=n_agents,
        mixture=mixture,
        positions=positions,
        noise_std=get(conf, "problem.noise_std", float, default=None),
    )


def build_schedules(conf, n_agents, dim, horizon, problem):
    step_kind = get(conf, "step.kind", str, default="nonconvex", choices=("nonconvex", "pl", "constant"))
    if step_kind == "nonconvex":
        step = StepSchedule.nonconvex(n_agents, dim, horizon)
    elif step_kind == "constant":
        step = StepSchedule.constant(get(conf, "step.value", float, required=True))
    else:
        nu = getattr(problem, "pl_constant", None)
        kappa_eta = get(conf, "step.kappa_eta", float, default=None)
        if kappa_eta is None:
            if nu is None:
                raise ConfigError("step.kappa_eta: required when the problem has no known PL constant")
            kappa_eta = KAPPA_ETA_MARGIN * 8.0 / nu
        t1 = get(conf, "step.t1", float, default=None)
        if t1 is None:
            smoothness = getattr(problem, "smoothness", None)
            if smoothness is not None:
                # keep eta_0 * L below 1 so the first steps cannot overshoot
                t1 = max(10.0, math.ceil(kappa_eta * smoothness))
            elif nu is not None:
                t1 = max(10.0, math.ceil(8.0 / (nu * KAPPA_ETA_MARGIN)))
            else:
                raise ConfigError("step.t1: required when the problem has no known PL constant")
        step = StepSchedule.pl(kappa_eta, t1, pl_constant=nu)

    radius_kind = get(conf, "radius.kind", str, default=step_kind if step_kind != "constant" else "nonconvex",
                      choices=("nonconvex", "pl", "constant"))
    kappa_delta = get(conf, "radius.kappa_delta", float, default=1.0)
    if radius_kind == "nonconvex":
        radius = RadiusSchedule.nonconvex(kappa_delta)
    elif radius_kind == "pl":
        if step.kind != "pl":
            raise ConfigError("radius.kind: 'pl' radii require a 'pl' step schedule")
        radius = RadiusSchedule.pl(step, kappa_delta)
    else:
        radius = RadiusSchedule.constant(get(conf, "radius.value", float, default=kappa_delta))
    return step, radius


def build_run_config(conf, seed=None, gamma=None):
    """Assemble a :class:`RunConfig` from parsed key-values.

    ``seed`` and ``gamma`` override ``run.seed`` / ``run.gamma`` (the
    experiment layer calls this once per replicate and gain setting).
    """
    seed = seed if seed is not None else get(conf, "run.seed", int, default=0)
    gamma = gamma if gamma is not None else get(conf, "run.gamma", float, default=0.7)
    horizon = get(conf, "run.t", int, required=True)
    topology = build_topology(conf, seed)
    problem = build_problem(conf, topology.n, seed)
    step, radius = build_schedules(conf, topology.n, problem.dim, horizon, problem)
    kind_raw = get(conf, "estimator.kind", str, default=TWO_POINT)
    kind = {ONE_POINT: ONE_POINT, "one_point": ONE_POINT,
            TWO_POINT: TWO_POINT, "two_point": TWO_POINT}.get(kind_raw)
    if kind is None:
        raise ConfigError(f"estimator.kind: must be '{ONE_POINT}' or '{TWO_POINT}', got {kind_raw!r}")
    return RunConfig(
        topology=topology,
        problem=problem,
        step_schedule=step,
        radius_schedule=radius,
        horizon=horizon,
        gamma=gamma,
        alpha=get(conf, "run.alpha", float, default=None),
        alpha_fraction=get(conf, "run.alpha_fraction", float, default=0.9),
        estimator_kind=kind,
        n_c=get(conf, "estimator.n_c", int, default=1),
        seed=seed,
    )
