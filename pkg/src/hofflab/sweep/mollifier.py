"""
Periodic mollification with the smooth bump φ(y) = C·exp(-1/(1 - y²)) on
(-1, 1), scaled as φ^η(x) = φ(x/η)/η.

The sampled kernel is renormalized so its discrete quadrature is exactly 1;
sampling a unit-mass kernel already gives 1 up to quadrature error, the
renormalization removes that residue.
"""

from functools import lru_cache
from typing import Optional

import numpy as np
from scipy.integrate import quad

from hofflab.core.grid import Grid
from hofflab.errors import DomainError, KernelUnderresolved
from hofflab.utilities.types import FrozenModel


def bump(y: np.ndarray) -> np.ndarray:
    """Unnormalized bump exp(-1/(1 - y²)), zero for |y| ≥ 1."""
    y = np.asarray(y, dtype=np.float64)
    inside = np.abs(y) < 1
    gap = np.where(inside, 1.0 - y**2, 1.0)
    return np.where(inside, np.exp(-1.0 / gap), 0.0)


@lru_cache()
def bump_mass() -> float:
    value, _ = quad(lambda y: float(bump(y)), -1.0, 1.0, epsabs=1e-14, epsrel=1e-13)
    return value


def phi(y: np.ndarray) -> np.ndarray:
    """The unit-mass bump φ."""
    return bump(y) / bump_mass()


def phi_prime_l1() -> float:
    """‖φ′‖₁ = 2φ(0), since φ is even and monotone on each half line."""
    return 2.0 * float(phi(0.0))


class MollifierKernel(FrozenModel):
    eta: float
    grid: Grid

    def offsets(self) -> np.ndarray:
        """Signed periodic distance of every cell from cell 0, in [-1/2, 1/2)."""
        n = self.grid.n
        k = np.arange(n)
        return ((k + n // 2) % n - n // 2) * self.grid.dx

    def sample(self) -> np.ndarray:
        """φ^η at the periodic offsets, summed over images and renormalized."""
        d = self.offsets()
        values = sum(phi((d + m) / self.eta) / self.eta for m in range(-2, 3))
        return values / (np.sum(values) * self.grid.dx)

    def fourier_factor(self, wavenumber: int = 1) -> float:
        """∫φ^η(y)cos(2πky)dy, the exact attenuation of mode k."""
        value, _ = quad(
            lambda y: float(phi(y / self.eta)) / self.eta
            * np.cos(2 * np.pi * wavenumber * y),
            -self.eta,
            self.eta,
            epsabs=1e-14,
            epsrel=1e-12,
        )
        return value


def mollify(f: np.ndarray, eta: float, grid: Optional[Grid] = None) -> np.ndarray:
    """
    Periodic convolution f ⋆ φ^η, computed spectrally.

    Raises:
        DomainError: eta outside (0, 1].
        KernelUnderresolved: eta < 2·dx.
    """
    f = np.asarray(f, dtype=np.float64)
    grid = grid or Grid(n=f.shape[-1])
    if not 0 < eta <= 1:
        raise DomainError(f"mollifier width must lie in (0, 1], got {eta!r}", eta=eta)
    if eta < 2 * grid.dx:
        raise KernelUnderresolved(
            f"mollifier width {eta!r} is narrower than two cells", eta=eta, dx=grid.dx
        )
    kernel = MollifierKernel(eta=eta, grid=grid).sample() * grid.dx
    return np.real(np.fft.ifft(np.fft.fft(f) * np.fft.fft(kernel)))
