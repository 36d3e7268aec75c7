"""
Discrete spatial operators on the periodic label grid.

Two derivative flavours are provided and never mixed within one identity:

- `deriv`, the centered difference used by the solver and all residuals;
- `forward_deriv`, the forward difference whose exact right inverse on
  mean-zero fields is `antideriv` (exclusive cumulative sum).

Every operator acts on the last axis, so snapshot stacks of shape (m, n)
are handled in one call.
"""

import numpy as np

from hofflab.core.grid import Grid


def deriv(f: np.ndarray, grid: Grid) -> np.ndarray:
    """Centered difference (f[j+1] - f[j-1]) / (2 dx) with periodic wraparound."""
    return (np.roll(f, -1, axis=-1) - np.roll(f, 1, axis=-1)) / (2.0 * grid.dx)


def forward_deriv(f: np.ndarray, grid: Grid) -> np.ndarray:
    """Forward difference (f[j+1] - f[j]) / dx with periodic wraparound."""
    return (np.roll(f, -1, axis=-1) - f) / grid.dx


def antideriv(f: np.ndarray, grid: Grid) -> np.ndarray:
    """
    Mean-zero discrete primitive, the grid analogue of ∂x⁻¹.

    g[j] = Σ_{i<j} (f[i] - mean f)·dx, shifted to zero mean. Then
    `forward_deriv(antideriv(f)) == f - mean(f)` and
    `antideriv(forward_deriv(h)) == h - mean(h)` up to rounding, and
    |g| ≤ Σ|f|·dx.
    """
    f = np.asarray(f, dtype=np.float64)
    centered = f - np.mean(f, axis=-1, keepdims=True)
    g = np.cumsum(centered, axis=-1) * grid.dx
    # exclusive sum: g[0] = 0
    g = np.concatenate([np.zeros_like(g[..., :1]), g[..., :-1]], axis=-1)
    return g - np.mean(g, axis=-1, keepdims=True)


def flow_jacobian(x_pos: np.ndarray, grid: Grid) -> np.ndarray:
    """
    Centered derivative of the flow map X(t, ·), using that X - id is
    periodic (X(x + 1) = X(x) + 1).
    """
    return deriv(x_pos - grid.cell_centers, grid) + 1.0


def face_average(a: np.ndarray) -> np.ndarray:
    """Arithmetic face values a[j+1/2] = (a[j] + a[j+1]) / 2."""
    return 0.5 * (a + np.roll(a, -1, axis=-1))


def face_diffusion(w: np.ndarray, coef_face: np.ndarray, grid: Grid) -> np.ndarray:
    """
    Compact flux-form operator
    [c[j+1/2](w[j+1] - w[j]) - c[j-1/2](w[j] - w[j-1])] / dx².

    Its discrete integral vanishes and -Σ w·L(w)·dx equals
    Σ c[j+1/2](w[j+1] - w[j])²/dx, the dissipation matched by `face_heating`.
    """
    flux = coef_face * (np.roll(w, -1, axis=-1) - w)
    return (flux - np.roll(flux, 1, axis=-1)) / grid.dx**2


def face_heating(u: np.ndarray, coef_face: np.ndarray, grid: Grid) -> np.ndarray:
    """
    Cell-centered viscous heating ½[c[j+1/2](Δ₊u/dx)² + c[j-1/2](Δ₋u/dx)²].

    Σ face_heating·dx equals -Σ u·face_diffusion(u)·dx exactly, which makes
    the discrete total energy balance close.
    """
    face = coef_face * ((np.roll(u, -1, axis=-1) - u) / grid.dx) ** 2
    return 0.5 * (face + np.roll(face, 1, axis=-1))
