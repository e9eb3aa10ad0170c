"""Chart rendering for care-simulation output CSVs."""

__version__ = "0.1.0"

from .charts import ChartDataError, render_all

__all__ = ["ChartDataError", "render_all"]
