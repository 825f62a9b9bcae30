"""Real rotations that diagonalize the in-plane coupling, and their cost.

`rotation_matrix(theta, j)` is exp(+i*theta*Jy) in the standard descending
basis; for j = 1/2 it is the real matrix

    [[ cos(theta/2), sin(theta/2)],
     [-sin(theta/2), cos(theta/2)]]

which maps sin(theta)*sigma1 + cos(theta)*sigma3 back to sigma3 under
R . R^T conjugation.  Applying R(theta(x)) pointwise trades the off-diagonal
coupling for the vector potential A(x) = R d/dx R^T = -i*theta'(x)*Jy, and
both routes to that operator (closed form and differencing the rotation
itself) are kept available so either can check the other.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm

from .errors import GridMismatchError
from .grids import SpinorField

__all__ = [
    "jy_matrix",
    "rotation_matrix",
    "rotation_stack",
    "vector_potential",
    "vector_potential_fd",
    "gauge_rotate",
    "gauge_residual",
]


def _check_spin(j: float) -> int:
    twoj = round(2 * j)
    if twoj <= 0 or abs(2 * j - twoj) > 1e-12:
        raise ValueError(f"spin must be a positive half-integer, got {j}")
    return twoj


def jy_matrix(j: float) -> np.ndarray:
    """y-generator in the descending basis; purely imaginary Hermitian."""
    twoj = _check_spin(j)
    m = j - np.arange(twoj + 1)  # j, j-1, ..., -j
    up = 0.5 * np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1))
    jy = np.zeros((twoj + 1, twoj + 1), dtype=complex)
    jy[np.arange(twoj), np.arange(1, twoj + 1)] = -1j * up
    jy[np.arange(1, twoj + 1), np.arange(twoj)] = 1j * up
    return jy


def rotation_matrix(theta: float, j: float = 0.5) -> np.ndarray:
    """exp(+i*theta*Jy): real orthogonal with unit determinant."""
    if _check_spin(j) == 1:
        c, s = np.cos(theta / 2), np.sin(theta / 2)
        return np.array([[c, s], [-s, c]])
    return expm(1j * theta * jy_matrix(j)).real


def rotation_stack(theta: np.ndarray) -> np.ndarray:
    """Vectorized j = 1/2 rotations for sampled angles: (..., 2, 2)."""
    theta = np.asarray(theta, dtype=float)
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    out = np.empty(theta.shape + (2, 2))
    out[..., 0, 0] = c
    out[..., 0, 1] = s
    out[..., 1, 0] = -s
    out[..., 1, 1] = c
    return out


def vector_potential(theta_prime: np.ndarray, j: float = 0.5) -> np.ndarray:
    """Closed form for R d/dx R^T: -i*theta'(x)*Jy, shape (..., d, d)."""
    tp = np.asarray(theta_prime, dtype=float)
    gen = -1j * jy_matrix(j)  # real antisymmetric
    return np.multiply.outer(tp, gen.real)


def vector_potential_fd(
    theta: np.ndarray,
    theta_plus: np.ndarray,
    theta_minus: np.ndarray,
    h: float,
    j: float = 0.5,
) -> np.ndarray:
    """R(theta) times a centered difference of R^T along the line.

    Takes the angle at x and at x +/- h so the caller controls how the
    angle itself was obtained; shares no algebra with `vector_potential`.
    """
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    rp = np.stack([rotation_matrix(t, j) for t in np.atleast_1d(theta_plus)])
    rm = np.stack([rotation_matrix(t, j) for t in np.atleast_1d(theta_minus)])
    r0 = np.stack([rotation_matrix(t, j) for t in theta])
    drt = (np.swapaxes(rp, -1, -2) - np.swapaxes(rm, -1, -2)) / (2.0 * h)
    return np.einsum("...ab,...bc->...ac", r0, drt)


def gauge_rotate(state: SpinorField, theta: np.ndarray) -> SpinorField:
    """Apply R(theta(x)) pointwise to a two-channel state."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (state.grid.n_points,):
        raise GridMismatchError(
            "need one rotation angle per grid point "
            f"({theta.shape} vs {state.grid.n_points})"
        )
    if state.n_channels != 2:
        raise ValueError("pointwise gauge rotation is a two-channel operation")
    rot = rotation_stack(theta)
    comps = np.einsum("xab,xb->xa", rot, state.components)
    return SpinorField(state.grid, comps, list(state.diagnostics))


def gauge_residual(
    spec,
    nu: int,
    x: np.ndarray,
    dx: float = 1e-4,
) -> float:
    """Stencil residual of the rotated eigenproblem at the points x.

    After the pointwise rotation the bound state phi' = R(theta(x)) phi must
    satisfy  -(d/dx + A)^2 phi' + (q + omega_bar*sigma3) phi' = E phi'
    with A = -i*theta'(x)*Jy.  Both derivative layers use 5-point stencils
    on a 9-point window, so the check is independent of the closed-form
    derivative algebra.  Returns the max residual relative to |E phi'|.

    The window must resolve the fastest swing of the mixing angle (it turns
    through ~pi over a short interval wherever the in-plane coupling nearly
    vanishes); with the nested stencils the truncation error scales as dx^4
    times the fifth derivative of the swing while rounding grows as 1/dx^2,
    which makes dx ~ 1e-4 a good default.
    """
    from .bargmann import bound_state_samples, potential_matrix
    from .fields import theta_bar_derivative

    x = np.atleast_1d(np.asarray(x, dtype=float))
    energy = spec.states[nu].energy
    offsets = np.arange(-4, 5) * dx
    xs = x[:, None] + offsets[None, :]  # (nx, 9)
    flat = xs.ravel()

    phi = bound_state_samples(spec, nu, flat).reshape(x.size, 9, 2)
    q, v = potential_matrix(spec, flat)
    q = q.reshape(x.size, 9)
    a = 0.5 * (v[:, 0, 0] - v[:, 1, 1]).reshape(x.size, 9)
    b = v[:, 0, 1].reshape(x.size, 9)
    omega_bar = np.hypot(a, b)
    theta = np.unwrap(np.arctan2(b, a), axis=1)
    tp = theta_bar_derivative(spec, flat).reshape(x.size, 9)

    rot = rotation_stack(theta)
    phi_r = np.einsum("xkab,xkb->xka", rot, phi)
    gen = vector_potential(tp, 0.5)  # (nx, 9, 2, 2)

    # first layer: g = phi_r' + A phi_r on the inner 5 points (k = 2..6)
    dphi_r = (
        -phi_r[:, 4:] + 8 * phi_r[:, 3:-1] - 8 * phi_r[:, 1:-3] + phi_r[:, :-4]
    ) / (12 * dx)
    g = dphi_r + np.einsum("xkab,xkb->xka", gen[:, 2:-2], phi_r[:, 2:-2])

    # second layer at the window center (k = 4)
    dg = (-g[:, 4] + 8 * g[:, 3] - 8 * g[:, 1] + g[:, 0]) / (12 * dx)
    dg = dg + np.einsum("xab,xb->xa", gen[:, 4], g[:, 2])

    center = (slice(None), 4)
    lhs = (
        -dg
        + (q[center][:, None] + 0j) * phi_r[center]
        + omega_bar[center][:, None]
        * np.einsum("ab,xb->xa", np.diag([1.0, -1.0]), phi_r[center])
    )
    resid = lhs - energy * phi_r[center]
    return float(np.max(np.abs(resid)) / np.max(np.abs(energy * phi_r[center])))
