"""Uniform spatial grids, Simpson quadrature, and finite-difference stencils.

Conventions
-----------
* Grids are uniform and carry an odd number of points so composite Simpson
  weights exist without a trapezoid tail.
* A SpinorField stores components as an (n_points, n_channels) complex array;
  channel 0 is the "upper" channel throughout the package.
* Derivative helpers use 5-point central stencils and are only valid in the
  interior; callers that need edge values must supply padded samples.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GridMismatchError, QuadratureConfigError

__all__ = [
    "Grid",
    "SpinorField",
    "simpson_weights",
    "deriv1_5pt",
    "deriv2_5pt",
]


@dataclass(frozen=True)
class Grid:
    """Uniform 1-D grid on [x_min, x_max] with n_points samples."""

    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if self.n_points < 3:
            raise QuadratureConfigError("grid needs at least 3 points")
        if self.n_points % 2 == 0:
            raise QuadratureConfigError(
                f"composite Simpson needs an odd point count, got {self.n_points}"
            )
        if not self.x_max > self.x_min:
            raise QuadratureConfigError("x_max must exceed x_min")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)

    def integrate(self, samples: np.ndarray) -> complex | float:
        """Composite Simpson integral of samples taken on this grid."""
        w = simpson_weights(self.n_points, self.dx)
        return np.tensordot(w, np.asarray(samples), axes=(0, 0))


def simpson_weights(n_points: int, dx: float) -> np.ndarray:
    """Composite Simpson weights for n_points uniform samples, spacing dx."""
    if n_points < 3 or n_points % 2 == 0:
        raise QuadratureConfigError(
            f"composite Simpson needs an odd count >= 3, got {n_points}"
        )
    w = np.ones(n_points)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (dx / 3.0)


@dataclass
class SpinorField:
    """Multi-component complex wavefunction sampled on a Grid."""

    grid: Grid
    components: np.ndarray  # shape (n_points, n_channels)
    # Diagnostics attached during construction (e.g. renormalization notes).
    diagnostics: list = field(default_factory=list)

    def __post_init__(self):
        self.components = np.asarray(self.components, dtype=complex)
        if self.components.ndim != 2:
            raise ValueError("components must be a 2-D (n_points, n_channels) array")
        if self.components.shape[0] != self.grid.n_points:
            raise GridMismatchError(
                f"{self.components.shape[0]} samples on a {self.grid.n_points}-point grid"
            )
        if not np.all(np.isfinite(self.components.view(float))):
            raise ValueError("non-finite component values")

    @property
    def n_channels(self) -> int:
        return self.components.shape[1]

    def density(self) -> np.ndarray:
        """Pointwise total probability density sum_a |phi_a|^2."""
        return np.sum(np.abs(self.components) ** 2, axis=1)

    def norm(self) -> float:
        """L2 norm by composite Simpson quadrature."""
        return float(np.sqrt(self.grid.integrate(self.density()).real))

    def overlap(self, other: "SpinorField") -> complex:
        """Quadrature inner product <self|other> (conjugate-linear in self)."""
        if other.grid != self.grid:
            raise GridMismatchError("overlap requires identical grids")
        integrand = np.sum(np.conj(self.components) * other.components, axis=1)
        return complex(self.grid.integrate(integrand))


def l2_norm(state: SpinorField) -> float:
    """L2 norm of a SpinorField: sqrt(integral of the total density)."""
    return state.norm()


# ---------------------------------------------------------------------------
# 5-point central stencils.  f has shape (n, ...) sampled at uniform spacing h;
# results cover the interior slice [2:-2].
# ---------------------------------------------------------------------------

def deriv1_5pt(f: np.ndarray, h: float) -> np.ndarray:
    """First derivative, 4th order: (-f2 + 8f1 - 8f-1 + f-2) / 12h."""
    f = np.asarray(f)
    return (-f[4:] + 8.0 * f[3:-1] - 8.0 * f[1:-3] + f[:-4]) / (12.0 * h)


def deriv2_5pt(f: np.ndarray, h: float) -> np.ndarray:
    """Second derivative, 4th order: (-f2 + 16f1 - 30f0 + 16f-1 - f-2) / 12h^2."""
    f = np.asarray(f)
    return (
        -f[4:] + 16.0 * f[3:-1] - 30.0 * f[2:-2] + 16.0 * f[1:-3] - f[:-4]
    ) / (12.0 * h * h)
