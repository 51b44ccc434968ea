"""Figure rendering for treescope CSV reports."""

from .plots import (
    KINDS,
    plot,
    plot_bag_hist,
    plot_core_ecc,
    plot_density,
    plot_localization,
    plot_ncp,
    read_rows,
)

__version__ = "0.1.0"

__all__ = [
    "KINDS",
    "plot",
    "plot_bag_hist",
    "plot_core_ecc",
    "plot_density",
    "plot_localization",
    "plot_ncp",
    "read_rows",
]
