"""Plot-spec files: the same flat key-value format the experiments use.

Example:

    kind = loss_curves
    output = figures/loss.png
    input.1 = runs/classification/metrics_seed1_gamma0.7.csv
    label.1 = powerball 0.7
    input.2 = runs/classification/metrics_seed1_gamma1.csv
    label.2 = linear gain
    # optional: column, title, logy

``trajectories`` takes a single trajectory CSV; the other kinds accept
any number of metrics CSVs, one labeled series each.
"""

from dataclasses import dataclass, field

KINDS = ("loss_curves", "trajectories", "concentration")

DEFAULT_COLUMNS = {
    "loss_curves": "f_avg",
    "concentration": "mean_concentration",
}


class SpecError(ValueError):
    """A plot spec file is malformed."""


@dataclass
class PlotSpec:
    kind: str
    output: str
    inputs: list
    labels: list
    column: str = None
    title: str = None
    logy: bool = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SpecError(f"kind must be one of {', '.join(KINDS)}, got {self.kind!r}")
        if not self.inputs:
            raise SpecError("at least one input CSV is required")
        if self.kind == "trajectories" and len(self.inputs) != 1:
            raise SpecError("trajectories takes exactly one input CSV")
        if self.column is None:
            self.column = DEFAULT_COLUMNS.get(self.kind)
        if self.logy is None:
            self.logy = self.kind == "loss_curves"


def parse_spec_text(text, source="<spec>"):
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise SpecError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip().lower()
        if key in values:
            raise SpecError(f"{source}:{lineno}: duplicate key {key!r}")
        values[key] = value.strip()

    if "kind" not in values:
        raise SpecError(f"{source}: missing 'kind'")
    if "output" not in values:
        raise SpecError(f"{source}: missing 'output'")

    indexed = sorted(
        (key for key in values if key.startswith("input.")),
        key=lambda key: int(key.split(".", 1)[1]),
    )
    inputs = [values[key] for key in indexed]
    labels = [values.get(f"label.{key.split('.', 1)[1]}", values[key]) for key in indexed]
    if "input" in values:
        inputs.insert(0, values["input"])
        labels.insert(0, values.get("label", values["input"]))

    logy = None
    if "logy" in values:
        logy = values["logy"].lower() in ("1", "true", "yes")
    return PlotSpec(
        kind=values["kind"],
        output=values["output"],
        inputs=inputs,
        labels=labels,
        column=values.get("column"),
        title=values.get("title"),
        logy=logy,
    )


def load_spec(path):
    with open(path) as handle:
        return parse_spec_text(handle.read(), source=str(path))
