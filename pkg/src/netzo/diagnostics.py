"""Self-check suite: every algebraic/statistical property the method rests on.

Each check is a small, fast experiment with a hard pass/fail verdict:
powerball algebra, Laplacian structure and consensus contraction,
estimator unbiasedness and bias orders, agent-level variance reduction,
query/communication budget identities, the linear-gain endpoint
equivalence, the averaged-iterate identity, and oracle self-consistency.
``netzo diagnose`` runs them all and exits nonzero if any fail.
"""

import io
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .engine import RunConfig, Simulation
from .estimator import (CoordinateSample, one_point_estimate,
                        sample_coordinates, two_point_estimate)
from .graph import (consensus_step, disagreement, erdos_renyi, laplacian,
                    network_average, ring, spectrum)
from .oracle import (make_classification, make_quadratic, make_source_seeking)
from .powerball import powerball
from .rng import STREAM_COORDS, substream
from .schedules import RadiusSchedule, StepSchedule, eta_at, radius_at

ULPS = 4 * np.finfo(float).eps


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


class _SmoothProblem:
    """Noiseless single-agent oracle over a fixed smooth test function."""

    n_agents = 1
    dim = 5

    @staticmethod
    def _f(points):
        return np.sum(np.exp(0.4 * points), axis=1) + np.sin(points[:, 0] * points[:, 1])

    def query_many(self, agent, points, tag):
        return self._f(np.asarray(points, dtype=float))

    def gradient(self, x):
        grad = 0.4 * np.exp(0.4 * x)
        grad[0] += x[1] * np.cos(x[0] * x[1])
        grad[1] += x[0] * np.cos(x[0] * x[1])
        return grad


def _result(name, passed, detail=""):
    return CheckResult(name, bool(passed), detail)


# ---------------------------------------------------------------------------
# Powerball algebra
# ---------------------------------------------------------------------------


def check_powerball_algebra(trials=10_000):
    rng = substream(2024, 0)
    g = rng.standard_normal(trials) * 10**rng.uniform(-3, 3, size=trials)
    gammas = rng.uniform(0.5, 1.0, size=trials)
    results = []

    sign_ok = all(
        np.array_equal(np.sign(powerball(g, gm)), np.sign(g))
        for gm in (0.5, 0.7, 0.9, 1.0)
    )
    results.append(_result("powerball.sign_preservation", sign_ok, f"{trials} inputs x 4 exponents"))

    tri_ok = True
    for gm in (0.5, 0.7, 0.95):
        mag = np.abs(g)
        out = np.abs(powerball(g, gm))
        small, large = mag < 1, mag > 1
        tri_ok &= bool(np.all(out[small] > mag[small]) and np.all(out[large] < mag[large]))
        tri_ok &= powerball(1.0, gm) == 1.0 and powerball(0.0, gm) == 0.0
    results.append(_result("powerball.amplification_trichotomy", tri_ok, f"{trials} inputs"))

    mono_ok = True
    for gm in (0.5, 0.75, 1.0):
        ordered = np.sort(g)
        mono_ok &= bool(np.all(np.diff(powerball(ordered, gm)) >= 0.0))
    results.append(_result("powerball.monotonicity", mono_ok, f"{trials} ordered pairs"))

    descent_ok = True
    rng2 = substream(2024, 1)
    for _ in range(trials // 50):
        gm = rng2.uniform(0.5, 1.0)
        bound = rng2.uniform(1.0, 10.0)
        u = np.clip(rng2.standard_normal(50) * bound, -bound, bound)
        lhs = float(u @ powerball(u, gm))
        rhs = bound ** (gm - 1.0) * float(u @ u)
        descent_ok &= lhs >= rhs * (1.0 - ULPS)
    results.append(_result("powerball.descent_inequality", descent_ok,
                           f"{trials} components, 4-ulp slack"))

    moment_ok = True
    rng3 = substream(2024, 2)
    for _ in range(trials // 50):
        gm = rng3.uniform(0.5, 1.0)
        u = rng3.standard_normal(50) * 10**rng3.uniform(-2, 2)
        moment_ok &= float(np.sum(powerball(u, gm) ** 2)) <= (50 + float(u @ u)) * (1.0 + ULPS)
    results.append(_result("powerball.moment_bound", moment_ok,
                           f"{trials} components, 4-ulp slack"))

    ident = rng.standard_normal(1000) * 100
    results.append(_result("powerball.gamma_one_identity",
                           np.array_equal(powerball(ident, 1.0), ident), "bitwise"))
    return results


# ---------------------------------------------------------------------------
# Graph operators
# ---------------------------------------------------------------------------


def check_graph_operators():
    results = []
    graphs = {"ring(5)": ring(5), "erdos_renyi(10,0.4)": erdos_renyi(10, 0.4, seed=1)}

    lap_ok, detail = True, []
    for name, topo in graphs.items():
        L = laplacian(topo)
        lap_ok &= bool(np.array_equal(L, L.T) and np.max(np.abs(L.sum(axis=1))) == 0.0)
        lap_ok &= np.linalg.eigvalsh(L).min() > -1e-12
        lap_ok &= spectrum(L).rho2 > 0
        detail.append(name)
    results.append(_result("graph.laplacian_structure", lap_ok, ", ".join(detail)))

    # Cycle eigenvalues 2 - 2 cos(2 pi k / n) as an independent closed form.
    eigs = sorted(spectrum(laplacian(ring(5))).eigenvalues)
    closed = sorted(2.0 - 2.0 * np.cos(2.0 * np.pi * np.arange(5) / 5))
    results.append(_result("graph.ring_spectrum_closed_form",
                           np.allclose(eigs, closed, atol=1e-9), "ring(5)"))

    avg_ok, contract_ok = True, True
    for name, topo in graphs.items():
        L = laplacian(topo)
        alpha = 0.9 * spectrum(L).alpha_max
        rng = substream(7, 3)
        x = rng.standard_normal((topo.n, 3))
        values = []
        for _ in range(40):
            values.append(disagreement(x))
            x_next = consensus_step(x, L, alpha)
            avg_ok &= np.allclose(network_average(x_next), network_average(x), atol=1e-12)
            x = x_next
        slope = np.polyfit(np.arange(40), np.log(values), 1)[0]
        contract_ok &= slope < 0 and all(b < a for a, b in zip(values, values[1:]))
    results.append(_result("graph.consensus_preserves_average", avg_ok, "40 steps x 2 graphs"))
    results.append(_result("graph.consensus_contraction", contract_ok, "monotone geometric decay"))
    return results


# ---------------------------------------------------------------------------
# Estimators
# ---------------------------------------------------------------------------


def check_subset_expectation():
    problem = _SmoothProblem()
    rng = substream(11, 0)
    x = rng.standard_normal(5) * 0.5
    delta = 1e-3
    full = two_point_estimate(problem, 0, x,
                              CoordinateSample(np.arange(5), np.full(5, delta)), 0).vector
    worst = 0.0
    for n_c in range(1, 6):
        subsets = list(itertools.combinations(range(5), n_c))
        total = np.zeros(5)
        for subset in subsets:
            sample = CoordinateSample(np.array(subset), np.full(n_c, delta))
            total += two_point_estimate(problem, 0, x, sample, 0).vector
        err = np.max(np.abs(total / len(subsets) - full)) / max(1.0, np.max(np.abs(full)))
        worst = max(worst, err)
    return [_result("estimator.subset_expectation", worst < 1e-10,
                    f"all C(5, n_c) subsets, worst relative error {worst:.2e}")]


def check_bias_orders():
    problem = _SmoothProblem()
    x = np.linspace(-0.4, 0.6, 5)
    exact = problem.gradient(x)
    deltas = [1e-1, 1e-2, 1e-3, 1e-4]
    errs1, errs2 = [], []
    for delta in deltas:
        sample = CoordinateSample(np.arange(5), np.full(5, delta))
        errs1.append(np.linalg.norm(one_point_estimate(problem, 0, x, sample, 0).vector - exact))
        errs2.append(np.linalg.norm(two_point_estimate(problem, 0, x, sample, 0).vector - exact))
    slope1 = float(np.polyfit(np.log(deltas), np.log(errs1), 1)[0])
    slope2 = float(np.polyfit(np.log(deltas), np.log(errs2), 1)[0])
    ok = abs(slope1 - 1.0) <= 0.15 and abs(slope2 - 2.0) <= 0.15
    return [_result("estimator.bias_orders", ok,
                    f"one-point slope {slope1:.3f} (want 1), two-point {slope2:.3f} (want 2)")]


def check_sampling_uniformity(draws=100_000):
    p = 5
    rng = substream(13, 0)
    counts = np.zeros(p)
    for _ in range(draws):
        counts[sample_coordinates(p, 1, rng, 1.0).indices[0]] += 1
    sigma = math.sqrt(draws * (1 / p) * (1 - 1 / p))
    deviation = float(np.max(np.abs(counts - draws / p)))
    return [_result("estimator.sampling_uniformity", deviation <= 3 * sigma,
                    f"max deviation {deviation:.0f} of 3-sigma {3 * sigma:.0f} over {draws} draws")]


def check_variance_reduction(trials=10_000):
    # Agents are mutually independent, so one 10-agent pool serves both
    # network sizes (the first five form the n=5 network).
    problem = make_quadratic(seed=21, n_agents=10, dim=2, noise_std=1.0)
    x = substream(21, 1).standard_normal(2)
    sample = CoordinateSample(np.arange(2), np.full(2, 1e-2))
    estimates = np.empty((trials, 10, 2))
    for t in range(trials):
        for i in range(10):
            estimates[t, i] = one_point_estimate(problem, i, x, sample, tag=t).vector
    var_single = float(np.sum(estimates[:, 0, :].var(axis=0)))
    results = []
    for n in (5, 10):
        ratio = float(np.sum(estimates[:, :n, :].mean(axis=1).var(axis=0))) / var_single
        ok = 0.7 / n <= ratio <= 1.4 / n
        results.append(_result(f"estimator.variance_reduction_n{n}", ok,
                               f"ratio {ratio:.4f}, admissible [{0.7 / n:.3f}, {1.4 / n:.3f}]"))
    return results


# ---------------------------------------------------------------------------
# Engine-level identities
# ---------------------------------------------------------------------------


def _small_config(**overrides):
    topology = overrides.pop("topology", ring(5))
    problem = overrides.pop("problem", make_quadratic(seed=31, n_agents=topology.n,
                                                      dim=6, noise_std=0.5))
    defaults = dict(
        topology=topology, problem=problem,
        step_schedule=StepSchedule.constant(0.02),
        radius_schedule=RadiusSchedule.constant(0.01),
        horizon=40, gamma=0.7, n_c=3, seed=9,
    )
    defaults.update(overrides)
    return RunConfig(**defaults)


def check_budget_identities():
    n, p, T, n_c = 5, 6, 11, 3
    edges = ring(n).edge_count
    budgets = {}
    ok = True
    for gamma in (0.5, 0.7, 1.0):
        rows = Simulation(_small_config(horizon=T, gamma=gamma)).run()
        budgets[gamma] = (rows[-1].function_queries, rows[-1].scalar_transmissions)
        ok &= rows[-1].function_queries == 2 * n * T * n_c
        ok &= rows[-1].scalar_transmissions == 2 * edges * T * p
    ok &= len(set(budgets.values())) == 1
    one_rows = Simulation(_small_config(horizon=T, estimator_kind="one-point")).run()
    ok &= one_rows[-1].function_queries == n * T * (n_c + 1)
    return [_result("engine.budget_identities", ok,
                    f"two-point 2nTn_c, one-point nT(n_c+1), 2|E|Tp; gamma-independent {budgets}")]


def check_gamma_endpoint(steps=100):
    cfg = _small_config(gamma=1.0, horizon=steps)
    sim = Simulation(cfg)
    state = sim.initial_state()
    x_ref = state.x.copy()
    n, p = 5, 6
    identical = True
    for k in range(steps):
        g = np.empty_like(x_ref)
        delta = radius_at(cfg.radius_schedule, k, p, n)
        for i in range(n):
            rng = substream(cfg.seed, STREAM_COORDS, i, k)
            sample = sample_coordinates(p, cfg.n_c, rng, delta)
            g[i] = two_point_estimate(sim.problem, i, x_ref[i], sample, tag=k).vector
        x_ref = consensus_step(x_ref, sim.L, sim.alpha) - eta_at(cfg.step_schedule, k) * g
        state = sim.step(state)
        identical &= np.array_equal(state.x, x_ref)
    return [_result("engine.gamma_one_endpoint", identical,
                    f"bitwise equality with the linear-gain reference over {steps} steps")]


def check_average_dynamics():
    cfg = _small_config(horizon=25)
    sim = Simulation(cfg)
    states = []
    sim.run(on_state=lambda s: states.append(s))
    worst = 0.0
    for before, after in zip(states, states[1:]):
        g, _ = sim.estimates_at(before)
        eta = eta_at(cfg.step_schedule, before.k)
        predicted = network_average(before.x) - (eta / 5) * powerball(g, cfg.gamma).sum(axis=0)
        scale = max(1.0, float(np.max(np.abs(predicted))))
        worst = max(worst, float(np.max(np.abs(network_average(after.x) - predicted))) / scale)
    return [_result("engine.average_dynamics_identity", worst < 1e-12,
                    f"max relative deviation {worst:.2e}")]


def check_run_determinism():
    buffers = []
    for _ in range(2):
        rows = Simulation(_small_config()).run()
        buf = io.StringIO()
        for row in rows:
            buf.write(repr((row.k, row.f_avg, row.grad_sq, row.disagreement,
                            row.function_queries, sorted(row.extras.items()))))
        buffers.append(buf.getvalue())
    return [_result("engine.run_determinism", buffers[0] == buffers[1],
                    "identical metric streams for identical configs")]


def check_consensus_only_decay():
    ok = True
    detail = []
    for topo in (ring(5), erdos_renyi(10, 0.4, seed=3)):
        problem = make_quadratic(seed=33, n_agents=topo.n, dim=3, noise_std=0.5)
        cfg = _small_config(topology=topo, problem=problem,
                            step_schedule=StepSchedule.constant(0.0), horizon=60, n_c=1)
        rows = Simulation(cfg).run()
        values = np.array([row.disagreement for row in rows])
        keep = values > 1e-20
        slope, intercept = np.polyfit(np.arange(len(values))[keep], np.log(values[keep]), 1)
        fitted = slope * np.arange(len(values))[keep] + intercept
        resid = np.log(values[keep]) - fitted
        r2 = 1.0 - float(np.sum(resid**2)) / float(np.sum((np.log(values[keep]) - np.log(values[keep]).mean())**2))
        ok &= slope < 0 and r2 > 0.99 and bool(np.all(np.diff(values) <= 0))
        detail.append(f"slope {slope:.3f}, r2 {r2:.5f}")
    return [_result("engine.consensus_only_decay", ok, "; ".join(detail))]


# ---------------------------------------------------------------------------
# Oracles
# ---------------------------------------------------------------------------


def _central_difference(fn, x, h=1e-6):
    grad = np.zeros_like(x)
    for j in range(x.size):
        e = np.zeros_like(x)
        e[j] = h
        grad[j] = (fn(x + e) - fn(x - e)) / (2 * h)
    return grad


def check_oracles():
    results = []
    problems = {
        "quadratic": make_quadratic(seed=41, n_agents=3, dim=6),
        "classification": make_classification(seed=41, n_agents=2, dim=8, n_train=40,
                                              n_test=10, batch_size=5),
        "source_seeking": make_source_seeking(seed=41),
    }
    det_ok, fd_ok = True, []
    for name, prob in problems.items():
        rng = substream(41, 5)
        x = rng.standard_normal(prob.dim) * 0.5
        if name == "source_seeking":
            x = np.array([3.0, 4.0])
        det_ok &= prob.query(0, x, tag=17) == prob.query(0, x, tag=17)
        grad = prob.global_gradient(x)
        fd = _central_difference(prob.global_value, x)
        err = np.linalg.norm(grad - fd)
        fd_ok.append(err <= 1e-5 * (1.0 + np.linalg.norm(grad)))
    results.append(_result("oracle.query_determinism", det_ok, "same (agent, point, tag) twice"))
    results.append(_result("oracle.gradient_vs_finite_difference", all(fd_ok),
                           "three problem families"))

    prob = make_quadratic(seed=42, n_agents=2, dim=4, noise_std=1.0)
    x = substream(42, 6).standard_normal(4)
    exact = prob.local_value(0, x)
    values = np.array([prob.query(0, x, tag=t) for t in range(8000)])
    tol = 4 * values.std() / math.sqrt(values.size)
    results.append(_result("oracle.query_unbiasedness", abs(values.mean() - exact) < tol,
                           f"|MC mean - exact| = {abs(values.mean() - exact):.2e} < {tol:.2e}"))

    pl_ok = True
    rng = substream(43, 7)
    for _ in range(100):
        y = prob.x_star + rng.standard_normal(4) * rng.uniform(0.1, 5)
        grad = prob.global_gradient(y)
        pl_ok &= prob.global_value(y) - prob.f_star <= float(grad @ grad) / (2 * prob.pl_constant) * (1 + 1e-10)
    results.append(_result("oracle.pl_inequality", pl_ok, "100 randomized points"))
    return results


ALL_CHECKS = (
    check_powerball_algebra,
    check_graph_operators,
    check_subset_expectation,
    check_bias_orders,
    check_sampling_uniformity,
    check_variance_reduction,
    check_budget_identities,
    check_gamma_endpoint,
    check_average_dynamics,
    check_run_determinism,
    check_consensus_only_decay,
    check_oracles,
)


def run_all(quiet=False):
    """Run every diagnostic; print one line per check unless quiet."""
    results = []
    for check in ALL_CHECKS:
        for result in check():
            results.append(result)
            if not quiet:
                status = "PASS" if result.passed else "FAIL"
                print(f"[{status}] {result.name}: {result.detail}")
    return results
