"""Grid stencils shared by the wave and linearization solvers.

Fourth-order central differences with one-sided fourth-order closures at the
edges, and exact index shifts with zero fill outside the grid.

Author: FPU Waves maintainers
Created: 2026-10-17
Version: 1.0.0
License: MIT
"""

import numpy as np


def shift(F: np.ndarray, offset: int) -> np.ndarray:
    """G_i = F_{i + offset}, zero where i + offset leaves the grid."""
    G = np.zeros_like(F)
    n = F.shape[0]
    if offset == 0:
        G[:] = F
    elif 0 < offset < n:
        G[:-offset] = F[offset:]
    elif -n < offset < 0:
        G[-offset:] = F[:offset]
    return G


def first_derivative(f: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order accurate d/dx on a uniform grid."""
    if f.shape[0] < 5:
        raise ValueError("At least 5 nodes are required for fourth-order differences")
    d = np.empty_like(f, dtype=float)
    d[2:-2] = (f[:-4] - 8.0 * f[1:-3] + 8.0 * f[3:-1] - f[4:]) / (12.0 * h)
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h)
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h)
    d[-1] = (25.0 * f[-1] - 48.0 * f[-2] + 36.0 * f[-3] - 16.0 * f[-4] + 3.0 * f[-5]) / (12.0 * h)
    d[-2] = (3.0 * f[-1] + 10.0 * f[-2] - 18.0 * f[-3] + 6.0 * f[-4] - f[-5]) / (12.0 * h)
    return d


def second_derivative(f: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order accurate d^2/dx^2 in the interior, third-order one-sided at the edges."""
    if f.shape[0] < 6:
        raise ValueError("At least 6 nodes are required for fourth-order differences")
    d = np.empty_like(f, dtype=float)
    h2 = 12.0 * h * h
    d[2:-2] = (-f[:-4] + 16.0 * f[1:-3] - 30.0 * f[2:-2] + 16.0 * f[3:-1] - f[4:]) / h2
    d[0] = (45.0 * f[0] - 154.0 * f[1] + 214.0 * f[2] - 156.0 * f[3] + 61.0 * f[4] - 10.0 * f[5]) / h2
    d[1] = (10.0 * f[0] - 15.0 * f[1] - 4.0 * f[2] + 14.0 * f[3] - 6.0 * f[4] + f[5]) / h2
    d[-1] = (45.0 * f[-1] - 154.0 * f[-2] + 214.0 * f[-3] - 156.0 * f[-4] + 61.0 * f[-5] - 10.0 * f[-6]) / h2
    d[-2] = (10.0 * f[-1] - 15.0 * f[-2] - 4.0 * f[-3] + 14.0 * f[-4] - 6.0 * f[-5] + f[-6]) / h2
    return d


def discrete_norm(F: np.ndarray, h: float) -> float:
    """sqrt(h * sum F^2), the grid L2 norm."""
    return float(np.sqrt(h * np.dot(F, F)))
