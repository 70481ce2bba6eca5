"""Static figures from netzo experiment CSVs.

Three figure kinds: training-loss comparisons across runs, per-agent
source-estimate trajectories over the concentration-field contours, and
network-average concentration curves. The package reads only the CSV
files and the metadata embedded in their comment blocks.
"""

from .csvdata import SchemaError, read_table
from .render import render
from .specfile import PlotSpec, SpecError, load_spec, parse_spec_text

__version__ = "0.1.0"

__all__ = ["PlotSpec", "SchemaError", "SpecError", "load_spec",
           "parse_spec_text", "read_table", "render"]
