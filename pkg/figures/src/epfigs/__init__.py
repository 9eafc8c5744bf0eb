"""Publication-figure scripts for the charger-battery simulator.

Purely presentational: every panel is drawn from CSV tables (plus their
.meta.json sidecars) produced by the ``epcharge`` command-line tool; nothing
is recomputed here, so the simulation package remains the single source of
numerical truth.
"""

import matplotlib

matplotlib.use("Agg")

__version__ = "0.1.0"

from .io import FigureSpec, MissingColumn, MissingInput  # noqa: E402
from .fig2 import render_fig2  # noqa: E402
from .fig3 import render_fig3  # noqa: E402
from .tcrit import render_tcrit  # noqa: E402

__all__ = ["FigureSpec", "MissingColumn", "MissingInput",
           "render_fig2", "render_fig3", "render_tcrit"]
