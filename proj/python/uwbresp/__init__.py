"""UWB impulse-radar respiration detection.

Radargrams are float64 arrays of shape (range bins, traces). Configuration is
passed as JSON text in the same format the command-line tool reads.
"""

from ._uwbresp import (
    Error,
    default_config,
    detect,
    peak_factor,
    peak_factor_profile,
    read_radargram,
    simulate,
    sweep,
    write_radargram,
)

__all__ = [
    "Error",
    "default_config",
    "detect",
    "peak_factor",
    "peak_factor_profile",
    "read_radargram",
    "simulate",
    "sweep",
    "write_radargram",
]
