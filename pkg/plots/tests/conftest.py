import numpy as np
import pytest

# Synthetic files in the documented CSV schemas; the schema, not the
# producing library, is the interface under test.


def write_metrics_csv(path, ks, f_avg, extra=None):
    lines = ["# schema = metrics-v1", "# experiment = synthetic", "# seed = 1",
             "# gamma = 0.7"]
    header = "k,f_avg,grad_sq,disagreement,eta,delta,function_queries,scalar_transmissions"
    extra_name = None
    if extra is not None:
        extra_name, extra_values = extra
        header += f",{extra_name}"
    lines.append(header)
    for i, (k, f) in enumerate(zip(ks, f_avg)):
        row = f"{k},{f!r},{(f * 2)!r},0.01,0.05,0.001,{k * 10},{k * 20}"
        if extra is not None:
            row += f",{extra_values[i]!r}"
        lines.append(row)
    path.write_text("\n".join(lines) + "\n")
    return path


def write_trajectory_csv(path, n_agents=5, steps=12):
    lines = [
        "# schema = trajectory-v1",
        "# experiment = synthetic",
        "# field_amplitudes = 10.0,4.0,4.0",
        "# field_centers = 5.0,5.0; 1.0,8.0; 8.0,1.0",
        "# field_widths = 1.5,0.8,0.8",
        "# agent_positions = " + "; ".join(
            f"{float(3.5 + 5 * np.cos(2 * np.pi * i / n_agents))!r},"
            f"{float(3.5 + 5 * np.sin(2 * np.pi * i / n_agents))!r}"
            for i in range(n_agents)
        ),
        "k,agent,x1,x2",
    ]
    for k in range(steps):
        for agent in range(n_agents):
            x = 1.0 + 0.3 * k + 0.1 * agent
            y = 0.5 + 0.35 * k - 0.05 * agent
            lines.append(f"{k},{agent},{x!r},{y!r}")
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.fixture
def metrics_csv(tmp_path):
    ks = list(range(20))
    return write_metrics_csv(tmp_path / "metrics_a.csv", ks,
                             [1.0 / (k + 1) for k in ks],
                             extra=("mean_concentration", [0.5 * k for k in ks]))


@pytest.fixture
def trajectory_csv(tmp_path):
    return write_trajectory_csv(tmp_path / "trajectory.csv")
