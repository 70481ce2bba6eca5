import pytest

from netzo_plots.specfile import PlotSpec, SpecError, parse_spec_text


def test_parse_full_spec():
    spec = parse_spec_text(
        """
        kind = loss_curves
        output = figs/loss.png
        input.1 = a.csv
        label.1 = powerball
        input.2 = b.csv
        label.2 = linear
        title = comparison
        """
    )
    assert spec.kind == "loss_curves"
    assert spec.inputs == ["a.csv", "b.csv"]
    assert spec.labels == ["powerball", "linear"]
    assert spec.column == "f_avg"
    assert spec.logy is True
    assert spec.title == "comparison"


def test_defaults_per_kind():
    spec = parse_spec_text("kind = concentration\noutput = o.png\ninput.1 = m.csv\n")
    assert spec.column == "mean_concentration"
    assert spec.logy is False
    assert spec.labels == ["m.csv"]  # label falls back to the path


def test_single_unindexed_input():
    spec = parse_spec_text("kind = trajectories\noutput = o.png\ninput = t.csv\n")
    assert spec.inputs == ["t.csv"]


def test_trajectories_need_exactly_one_input():
    with pytest.raises(SpecError):
        parse_spec_text("kind = trajectories\noutput = o.png\n"
                        "input.1 = a.csv\ninput.2 = b.csv\n")


def test_unknown_kind():
    with pytest.raises(SpecError, match="kind"):
        parse_spec_text("kind = pie\noutput = o.png\ninput.1 = a.csv\n")


def test_missing_keys():
    with pytest.raises(SpecError, match="output"):
        parse_spec_text("kind = loss_curves\ninput.1 = a.csv\n")
    with pytest.raises(SpecError, match="input"):
        PlotSpec(kind="loss_curves", output="o.png", inputs=[], labels=[])


def test_logy_override():
    spec = parse_spec_text("kind = loss_curves\noutput = o.png\ninput.1 = a.csv\nlogy = false\n")
    assert spec.logy is False
