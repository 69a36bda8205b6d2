"""Small numeric helpers shared by block sizing and order selection."""

import math

# Relative slack under which a float is snapped to the nearest integer before
# ceil().  Keeps quantities like (2**20) ** 0.4 == 256 reproducible even when
# libm returns 256.00000000000006.
_SNAP_REL = 1e-9


def ceil_snapped(x: float) -> int:
    """ceil(x), treating values within 1e-9 relative of an integer as exact."""
    nearest = round(x)
    if abs(x - nearest) <= _SNAP_REL * max(1.0, abs(nearest)):
        return int(nearest)
    return math.ceil(x)
