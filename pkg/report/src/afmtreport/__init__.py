"""Charts and tables for multipath-tunnel scheduling runs."""

from .artifacts import LoadedRun, ReportError, RunArtifact, load_run
from .tables import table_compare

__all__ = ["LoadedRun", "ReportError", "RunArtifact", "load_run",
           "table_compare", "plot_goodput"]


def plot_goodput(runs, out_image_path):  # lazy: pulls in matplotlib
    from .plotting import plot_goodput as _impl
    return _impl(runs, out_image_path)


__version__ = "0.1.0"
