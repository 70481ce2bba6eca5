"""Componentwise fractional-power (powerball) gain map.

``powerball(g, gamma)`` maps each component to ``sgn(g) * |g|**gamma``.
For exponents below one this amplifies components with magnitude below
one and attenuates components with magnitude above one, while always
preserving sign. At ``gamma == 1`` the map is the identity, which serves
as the linear-gain control in experiments.
"""

import numpy as np

DEFAULT_GAMMA = 0.7


def powerball(g, gamma):
    """Apply ``sgn(g) * |g|**gamma`` componentwise.

    Accepts scalars or arrays; zero maps to exactly zero. ``gamma`` must
    lie in (0, 1].
    """
    if not 0.0 < gamma <= 1.0:
        raise ValueError(f"gamma must lie in (0, 1], got {gamma}")
    arr = np.asarray(g, dtype=float)
    out = np.sign(arr) * np.abs(arr) ** gamma
    return out if out.ndim else float(out)


def gain_ratio(g, gamma):
    """Magnitude gain ``|powerball(g, gamma)| / |g| = |g|**(gamma - 1)``.

    Undefined at zero.
    """
    arr = np.asarray(g, dtype=float)
    if np.any(arr == 0.0):
        raise ValueError("gain ratio is undefined at g = 0")
    out = np.abs(arr) ** (gamma - 1.0)
    return out if out.ndim else float(out)
