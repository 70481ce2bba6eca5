"""Acceptance: render every figure kind from real preset outputs.

Drives the producing CLI through its public surface (a preset narrowed
to one seed), then renders from the files it wrote.
"""

import shutil
import subprocess
import sys

import matplotlib.pyplot as plt
import pytest

from netzo_plots.cli import main as plot_main
from netzo_plots.render import agent_series_count, peak_marker_count, render
from netzo_plots.specfile import PlotSpec

netzo_missing = shutil.which("netzo") is None


@pytest.fixture(scope="module")
def preset_outputs(tmp_path_factory):
    out = tmp_path_factory.mktemp("source_seeking")
    proc = subprocess.run(
        ["netzo", "run", "source_seeking", "--seed", "1", "--out", str(out), "--quiet"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    return out


@pytest.fixture(autouse=True)
def close_figures():
    yield
    plt.close("all")


@pytest.mark.skipif(netzo_missing, reason="netzo CLI not installed")
def test_all_three_kinds_render_from_preset_outputs(preset_outputs, tmp_path):
    metrics = sorted(preset_outputs.glob("metrics_seed1_*.csv"))
    trajectories = sorted(preset_outputs.glob("trajectory_seed1_*.csv"))
    assert len(metrics) == 2 and len(trajectories) == 2  # gamma 0.7 and 1.0

    loss = render(PlotSpec(kind="loss_curves", output=str(tmp_path / "loss.png"),
                           inputs=[str(p) for p in metrics],
                           labels=["gamma 0.7", "gamma 1.0"]))
    conc = render(PlotSpec(kind="concentration", output=str(tmp_path / "conc.png"),
                           inputs=[str(p) for p in metrics],
                           labels=["gamma 0.7", "gamma 1.0"]))
    traj = render(PlotSpec(kind="trajectories", output=str(tmp_path / "traj.png"),
                           inputs=[str(trajectories[0])], labels=["gamma 0.7"]))
    for name in ("loss.png", "conc.png", "traj.png"):
        assert (tmp_path / name).exists()
    assert len(loss.axes[0].lines) == 2
    assert len(conc.axes[0].lines) == 2
    print("[PASS] plots: all three figure kinds rendered from preset outputs")

    # Figure contract: one series per agent, one marker per field peak.
    n_agents = 5
    assert agent_series_count(traj) == n_agents
    assert peak_marker_count(traj) == 3
    print(f"[PASS] plots: trajectories figure has {n_agents} agent series and 3 peak markers")


@pytest.mark.skipif(netzo_missing, reason="netzo CLI not installed")
def test_cli_round_trip(preset_outputs, tmp_path):
    spec = tmp_path / "loss.spec"
    metrics = sorted(preset_outputs.glob("metrics_seed1_*.csv"))
    spec.write_text(
        "kind = loss_curves\n"
        f"output = {tmp_path / 'cli_loss.png'}\n"
        f"input.1 = {metrics[0]}\n"
        "label.1 = gamma 0.7\n"
        f"input.2 = {metrics[1]}\n"
        "label.2 = gamma 1.0\n"
    )
    assert plot_main([str(spec), "--quiet"]) == 0
    assert (tmp_path / "cli_loss.png").exists()
    bad = tmp_path / "bad.spec"
    bad.write_text("kind = loss_curves\noutput = x.png\ninput.1 = missing.csv\n")
    assert plot_main([str(bad), "--quiet"]) == 2
