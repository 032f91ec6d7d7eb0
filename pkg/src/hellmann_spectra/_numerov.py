"""Numerov sweeps for u'' = W u on a uniform grid.

Compiled with numba when it is importable; the plain-Python loops are the
fallback and the reference for the compiled path.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - exercised only without numba
    njit = None

BIG = 1e150


def _outward(W, h, u0, u1, stop):
    """Integrate from index 0 up to ``stop`` (inclusive).

    Returns (u, nodes) with ``u`` rescaled to stay finite and ``nodes`` the
    number of sign changes in u[0..stop].
    """
    n = W.shape[0]
    u = np.zeros(n)
    g = h * h / 12.0
    u[0] = u0
    u[1] = u1
    nodes = 0
    if (u0 > 0) != (u1 > 0) and u0 != 0.0:
        nodes += 1
    for i in range(1, stop):
        u[i + 1] = (2.0 * u[i] * (1.0 + 5.0 * g * W[i]) - u[i - 1] * (1.0 - g * W[i - 1])) / (1.0 - g * W[i + 1])
        if u[i + 1] != 0.0 and u[i] != 0.0 and (u[i + 1] > 0) != (u[i] > 0):
            nodes += 1
        if abs(u[i + 1]) > BIG:
            for j in range(i + 2):
                u[j] /= BIG
    return u, nodes


def _inward(W, h, uN, uN1, stop):
    """Integrate from the last index down to ``stop`` (inclusive)."""
    n = W.shape[0]
    u = np.zeros(n)
    g = h * h / 12.0
    u[n - 1] = uN
    u[n - 2] = uN1
    for i in range(n - 2, stop, -1):
        u[i - 1] = (2.0 * u[i] * (1.0 + 5.0 * g * W[i]) - u[i + 1] * (1.0 - g * W[i + 1])) / (1.0 - g * W[i - 1])
        if abs(u[i - 1]) > BIG:
            for j in range(i - 1, n):
                u[j] /= BIG
    return u


if njit is not None:
    outward = njit(cache=True, nogil=True)(_outward)
    inward = njit(cache=True, nogil=True)(_inward)
else:  # pragma: no cover
    outward = _outward
    inward = _inward

py_outward = _outward
py_inward = _inward
