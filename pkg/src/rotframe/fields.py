"""Pauli-vector split of coupling matrices and rotating-frame dressing.

Conventions
-----------
A real symmetric 2x2 coupling V(x) splits as

    V = q*I + a*sigma3 + b*sigma1,  q = (V11+V22)/2, a = (V11-V22)/2, b = V12.

The in-plane magnitude and mixing angle are omega_bar = hypot(a, b) and
theta_bar = atan2(b, a), unwrapped along the sample axis.  Where omega_bar
vanishes the angle is undefined; such samples copy the nearest well-defined
value and the result carries a diagnostic string.  All-degenerate input
raises DegenerateFieldError.

Dressing by a frame rate w adds w*sigma3 and leaves the in-plane part alone:

    omega*sin(theta) = omega_bar*sin(theta_bar)
    omega*cos(theta) = omega_bar*cos(theta_bar) + w

so the lab-frame field precesses about the 3-axis at rate 2w,

    B(t) = omega*(sin(theta)*cos(2wt), sin(theta)*sin(2wt), cos(theta)),

and the full time-dependent coupling is q*I + B(t).sigma.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bargmann import SpectralData, potential_matrix, potential_with_derivative
from .errors import DegenerateFieldError

__all__ = [
    "PAULI",
    "FieldProfile",
    "decompose",
    "field_profile",
    "theta_bar_derivative",
    "dress",
    "undress",
    "bloch_vector",
    "stationary_coupling",
    "rotating_coupling",
    "rotating_coupling_sampler",
]

PAULI = np.array(
    [
        [[0.0, 1.0], [1.0, 0.0]],
        [[0.0, -1.0j], [1.0j, 0.0]],
        [[1.0, 0.0], [0.0, -1.0]],
    ],
    dtype=complex,
)

#: relative floor below which the in-plane component counts as degenerate
EPS_DEGENERATE = 1e-12


def _fill_nearest(values: np.ndarray, valid: np.ndarray) -> tuple[np.ndarray, int]:
    """Replace entries at invalid positions by the nearest valid entry."""
    idx = np.nonzero(valid)[0]
    if idx.size == 0:
        raise DegenerateFieldError("in-plane coupling vanishes at every sample")
    if idx.size == values.size:
        return values, 0
    pos = np.arange(values.size)
    j = np.searchsorted(idx, pos)
    left = idx[np.clip(j - 1, 0, idx.size - 1)]
    right = idx[np.clip(j, 0, idx.size - 1)]
    nearest = np.where(np.abs(pos - left) <= np.abs(right - pos), left, right)
    return values[nearest], int(values.size - idx.size)


def decompose(
    v: np.ndarray, eps: float = EPS_DEGENERATE
) -> tuple[np.ndarray, np.ndarray, np.ndarray, list[str]]:
    """Split sampled couplings (..., 2, 2) into (q, omega_bar, theta_bar).

    theta_bar is unwrapped along the sample axis; degenerate samples are
    continued from the nearest valid one and reported in the returned
    diagnostics list.
    """
    v = np.asarray(v, dtype=float)
    if v.shape[-2:] != (2, 2):
        raise ValueError("decompose needs 2x2 coupling matrices")
    q = 0.5 * (v[..., 0, 0] + v[..., 1, 1])
    a = 0.5 * (v[..., 0, 0] - v[..., 1, 1])
    b = v[..., 0, 1]
    omega_bar = np.hypot(a, b)
    scalar = omega_bar.ndim == 0
    omega_flat = np.atleast_1d(omega_bar)
    theta = np.arctan2(np.atleast_1d(b), np.atleast_1d(a))
    # Degeneracy is judged against the local matrix scale, not a global one:
    # in exponential tails a and b shrink together and the angle stays sharp.
    local = np.atleast_1d(np.max(np.abs(v), axis=(-2, -1)))
    valid = omega_flat > eps * np.maximum(local, np.finfo(float).tiny)
    theta, n_filled = _fill_nearest(theta, valid)
    theta = np.unwrap(theta)
    diagnostics = []
    if n_filled:
        diagnostics.append(
            f"mixing angle undefined at {n_filled} degenerate samples; "
            "continued from nearest valid sample"
        )
    if scalar:
        return float(q), float(omega_bar), float(theta[0]), diagnostics
    return q, omega_bar, theta, diagnostics


@dataclass
class FieldProfile:
    """Bare and dressed field parameters sampled along the line."""

    x: np.ndarray
    scalar: np.ndarray
    omega_bar: np.ndarray
    theta_bar: np.ndarray
    omega: float
    omega_dressed: np.ndarray
    theta_dressed: np.ndarray
    diagnostics: list[str] = field(default_factory=list)


def field_profile(spec: SpectralData, x: np.ndarray, omega: float) -> FieldProfile:
    """Decompose the transparent coupling of `spec` and dress it by `omega`."""
    if spec.n_channels != 2:
        raise ValueError("field decomposition requires a two-channel coupling")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    q, v = potential_matrix(spec, x)
    _, omega_bar, theta_bar, diagnostics = decompose(v)
    omega_d, theta_d, dress_diag = dress(omega_bar, theta_bar, omega)
    return FieldProfile(
        x=x,
        scalar=q,
        omega_bar=omega_bar,
        theta_bar=theta_bar,
        omega=float(omega),
        omega_dressed=omega_d,
        theta_dressed=theta_d,
        diagnostics=diagnostics + dress_diag,
    )


def theta_bar_derivative(spec: SpectralData, x: np.ndarray) -> np.ndarray:
    """d(theta_bar)/dx from the closed-form coupling derivative.

    Uses theta' = (a b' - b a') / omega_bar^2, which needs no unwrapping.
    Raises DegenerateFieldError if any sample has vanishing in-plane part:
    the derivative does not exist there.
    """
    x = np.asarray(x, dtype=float)
    _, v, vp = potential_with_derivative(spec, x)
    a = 0.5 * (v[..., 0, 0] - v[..., 1, 1])
    b = v[..., 0, 1]
    ap = 0.5 * (vp[..., 0, 0] - vp[..., 1, 1])
    bp = vp[..., 0, 1]
    mag2 = a * a + b * b
    local = np.max(np.abs(v), axis=(-2, -1))
    floor = (EPS_DEGENERATE * np.maximum(local, np.finfo(float).tiny)) ** 2
    if np.any(mag2 <= floor):
        raise DegenerateFieldError(
            "mixing-angle derivative undefined where the in-plane coupling vanishes"
        )
    return (a * bp - b * ap) / mag2


def dress(
    omega_bar: np.ndarray | float,
    theta_bar: np.ndarray | float,
    omega: float,
) -> tuple[np.ndarray | float, np.ndarray | float, list[str]]:
    """Map the bare field to the dressed one for frame rate `omega`."""
    ob = np.atleast_1d(np.asarray(omega_bar, dtype=float))
    tb = np.atleast_1d(np.asarray(theta_bar, dtype=float))
    plane = ob * np.sin(tb)
    axis = ob * np.cos(tb) + omega
    mag = np.hypot(plane, axis)
    scalar = np.ndim(omega_bar) == 0 and np.ndim(theta_bar) == 0
    local = ob + abs(omega)
    valid = mag > EPS_DEGENERATE * np.maximum(local, np.finfo(float).tiny)
    theta = np.arctan2(plane, axis)
    theta, n_filled = _fill_nearest(theta, valid)
    theta = np.unwrap(theta)
    diagnostics = []
    if n_filled:
        diagnostics.append(
            f"dressed field degenerate at {n_filled} samples; "
            "tilt continued from nearest valid sample"
        )
    if scalar:
        return float(mag[0]), float(theta[0]), diagnostics
    return mag, theta, diagnostics


def undress(
    omega_dressed: np.ndarray | float,
    theta_dressed: np.ndarray | float,
    omega: float,
) -> tuple[np.ndarray | float, np.ndarray | float, list[str]]:
    """Invert `dress`: recover the bare field from the dressed one."""
    return dress(omega_dressed, theta_dressed, -omega)


def bloch_vector(
    omega_dressed: np.ndarray | float,
    theta_dressed: np.ndarray | float,
    omega: float,
    t: float,
) -> np.ndarray:
    """Lab-frame field (..., 3) at time t, precessing at rate 2*omega."""
    od = np.asarray(omega_dressed, dtype=float)
    td = np.asarray(theta_dressed, dtype=float)
    phase = 2.0 * omega * t
    return np.stack(
        [
            od * np.sin(td) * np.cos(phase),
            od * np.sin(td) * np.sin(phase),
            od * np.cos(td),
        ],
        axis=-1,
    )


def stationary_coupling(spec: SpectralData, omega: float, x: np.ndarray) -> np.ndarray:
    """Rotating-frame coupling V(x) + omega*sigma3 as (..., 2, 2) complex."""
    _, v = potential_matrix(spec, x)
    return v.astype(complex) + omega * PAULI[2]


def rotating_coupling(
    spec: SpectralData,
    omega: float,
    t: float,
    x: np.ndarray,
    route: str = "trig",
) -> np.ndarray:
    """Lab-frame coupling at time t.

    route="trig" assembles q*I + B(t).sigma from the closed-form split;
    route="conjugation" conjugates the stationary coupling by the frame
    unitary.  The two agree to rounding and are kept separate so either can
    check the other.
    """
    x = np.asarray(x, dtype=float)
    if route == "conjugation":
        u = np.diag(np.exp([-1j * omega * t, 1j * omega * t]))
        w0 = stationary_coupling(spec, omega, x)
        return np.einsum("ab,...bc,cd->...ad", u, w0, u.conj().T)
    if route != "trig":
        raise ValueError(f"unknown construction route: {route!r}")
    return rotating_coupling_sampler(spec, omega, x)(t)


def rotating_coupling_sampler(spec: SpectralData, omega: float, x: np.ndarray):
    """Precompute the stationary split once and return t -> W(t, x).

    Time stepping and time quadrature sample the lab coupling thousands of
    times; only the two in-plane trigonometric factors actually move.
    """
    x = np.asarray(x, dtype=float)
    q, v = potential_matrix(spec, x)
    a = 0.5 * (v[..., 0, 0] - v[..., 1, 1])
    b = v[..., 0, 1]
    static = np.multiply.outer(q, np.eye(2)).astype(complex) + np.multiply.outer(
        a + omega, PAULI[2]
    )

    def sampler(t: float) -> np.ndarray:
        phase = 2.0 * omega * t
        return (
            static
            + np.multiply.outer(b * np.cos(phase), PAULI[0])
            + np.multiply.outer(b * np.sin(phase), PAULI[1])
        )

    return sampler
