"""Shared utilities for RIS Alloc."""

# Standard Library
import math

# Third Party
import numpy as np


def db_to_linear(value_db: float) -> float:
    """Convert a power ratio in dB to linear scale."""
    return 10.0 ** (value_db / 10.0)


def linear_to_db(value: float) -> float:
    """
    Convert a linear power ratio to dB.

    Raises:
        ValueError: If value is not strictly positive
    """
    if value <= 0:
        raise ValueError(f"Cannot express non-positive power ratio {value} in dB")
    return 10.0 * math.log10(value)


def dbm_to_watts(value_dbm: float) -> float:
    """
    Convert a power level in dBm to watts.

    Examples:
        >>> dbm_to_watts(30.0)
        1.0
        >>> round(dbm_to_watts(23.0), 4)
        0.1995
    """
    return db_to_linear(value_dbm - 30.0)


def watts_to_dbm(value_w: float) -> float:
    """Convert a power level in watts to dBm."""
    return linear_to_db(value_w) + 30.0


def format_rate(value: float | None) -> str:
    """
    Format a spectral efficiency for log lines.

    Examples:
        >>> format_rate(12.3456)
        '12.346 bps/Hz'
        >>> format_rate(None)
        'n/a'
    """
    if value is None or not np.isfinite(value):
        return "n/a"
    return f"{value:.3f} bps/Hz"


def progress_checkpoints(total: int) -> set[int]:
    """
    Return the 1-based positions at which a long loop should log progress.

    First item, every 10% and the last item.
    """
    if total <= 0:
        return set()
    step = max(1, total // 10)
    marks = set(range(step, total + 1, step))
    marks.update({1, total})
    return marks
