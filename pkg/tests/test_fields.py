"""Field decomposition, dressing, and the two coupling-construction routes."""

import numpy as np
import pytest

from rotframe.bargmann import BoundStateSpec, SpectralData, potential_matrix
from rotframe.errors import DegenerateFieldError
from rotframe.fields import (
    PAULI,
    bloch_vector,
    decompose,
    dress,
    field_profile,
    rotating_coupling,
    stationary_coupling,
    theta_bar_derivative,
    undress,
)

COUPLED = SpectralData(
    2,
    [
        BoundStateSpec(energy=-0.81, gammas=(0.9, -0.5)),
        BoundStateSpec(energy=-2.25, gammas=(0.7, 1.3)),
    ],
)
XS = np.linspace(-8.0, 8.0, 401)


def test_pauli_algebra():
    for i in range(3):
        assert np.array_equal(PAULI[i], PAULI[i].conj().T)
        assert np.max(np.abs(PAULI[i] @ PAULI[i] - np.eye(2))) == 0.0
    assert np.max(np.abs(PAULI[0] @ PAULI[1] - 1j * PAULI[2])) == 0.0


def test_decompose_reconstructs_coupling():
    _, v = potential_matrix(COUPLED, XS)
    q, ob, tb, diags = decompose(v)
    recon = (
        np.multiply.outer(q, np.eye(2))
        + np.multiply.outer(ob * np.cos(tb), PAULI[2].real)
        + np.multiply.outer(ob * np.sin(tb), PAULI[0].real)
    )
    assert np.max(np.abs(recon - v)) < 1e-13
    assert not diags
    # unwrapped: no 2*pi jumps between samples
    assert np.max(np.abs(np.diff(tb))) < np.pi


def test_single_state_has_constant_mixing_angle():
    # One bound state makes the coupling rank-one up to the scalar part, so
    # the in-plane direction cannot turn.
    spec = SpectralData(2, [BoundStateSpec(energy=-1.44, gammas=(0.8, -1.1))])
    _, v = potential_matrix(spec, XS)
    _, _, tb, _ = decompose(v)
    assert tb.max() - tb.min() < 1e-7
    # attractive coupling: both in-plane components carry a minus sign
    expect = np.arctan2(-2 * 0.8 * -1.1, -(0.8**2 - (-1.1) ** 2))
    wrapped = (tb[len(XS) // 2] - expect + np.pi) % (2 * np.pi) - np.pi
    assert abs(wrapped) < 1e-10


def test_equal_weights_pin_angle_to_minus_half_pi():
    spec = SpectralData(2, [BoundStateSpec(energy=-1.0, gammas=(1.0, 1.0))])
    _, v = potential_matrix(spec, XS)
    _, _, tb, _ = decompose(v)
    assert np.max(np.abs(tb + np.pi / 2)) < 1e-12


def test_degenerate_sample_is_continued_and_flagged():
    q, v = potential_matrix(COUPLED, XS)
    v = v.copy()
    v[200] = np.eye(2) * q[200]  # kill the in-plane part at one sample
    _, _, tb, diags = decompose(v)
    assert len(diags) == 1 and "1 degenerate" in diags[0]
    assert tb[200] == tb[199] or tb[200] == tb[201]


def test_all_degenerate_raises():
    with pytest.raises(DegenerateFieldError):
        decompose(np.zeros((5, 2, 2)))
    with pytest.raises(DegenerateFieldError):
        decompose(np.broadcast_to(0.3 * np.eye(2), (7, 2, 2)).copy())


def test_theta_derivative_matches_richardson():
    thp = theta_bar_derivative(COUPLED, XS)

    def fd(h):
        _, vp = potential_matrix(COUPLED, XS + h)
        _, vm = potential_matrix(COUPLED, XS - h)
        _, v0 = potential_matrix(COUPLED, XS)
        a = 0.5 * (v0[..., 0, 0] - v0[..., 1, 1])
        b = v0[..., 0, 1]
        da = 0.5 * ((vp - vm)[..., 0, 0] - (vp - vm)[..., 1, 1]) / (2 * h)
        db = (vp - vm)[..., 0, 1] / (2 * h)
        return (a * db - b * da) / (a * a + b * b)

    rich = (4 * fd(5e-4) - fd(1e-3)) / 3
    # FD noise swamps the tiny tail values; compare where FD is conditioned.
    core = np.abs(XS) <= 4.0
    assert np.max(np.abs((thp - rich)[core])) / np.max(np.abs(thp)) < 1e-8


def test_dress_scalar_values():
    om, th, diags = dress(1.0, np.pi / 2, 0.7)
    assert abs(om - np.hypot(1.0, 0.7)) < 1e-15
    assert abs(th - np.arctan2(1.0, 0.7)) < 1e-15
    assert not diags


def test_dress_undress_roundtrip_on_profile():
    _, v = potential_matrix(COUPLED, XS)
    _, ob, tb, _ = decompose(v)
    od, td, _ = dress(ob, tb, 0.7)
    ob2, tb2, _ = undress(od, td, 0.7)
    assert np.max(np.abs(ob2 - ob)) < 1e-12
    wrapped = (tb2 - tb + np.pi) % (2 * np.pi) - np.pi
    assert np.max(np.abs(wrapped)) < 1e-9


def test_antiparallel_dressing_is_degenerate():
    # Rate exactly cancels the field: dressed direction undefined.
    with pytest.raises(DegenerateFieldError):
        dress(1.0, np.pi, 1.0)


def test_bloch_vector_closes_the_coupling():
    prof = field_profile(COUPLED, XS, 0.7)
    q, _ = potential_matrix(COUPLED, XS)
    for t in (0.0, 0.9):
        b = bloch_vector(prof.omega_dressed, prof.theta_dressed, prof.omega, t)
        w = np.multiply.outer(q, np.eye(2)).astype(complex) + np.einsum(
            "xi,iab->xab", b, PAULI
        )
        assert np.max(np.abs(w - rotating_coupling(COUPLED, 0.7, t, XS))) < 1e-12


def test_rotating_coupling_routes_agree():
    for t in (0.0, 0.3, 1.7):
        wt = rotating_coupling(COUPLED, 0.7, t, XS, route="trig")
        wc = rotating_coupling(COUPLED, 0.7, t, XS, route="conjugation")
        assert np.max(np.abs(wt - wc)) < 1e-13
        assert np.max(np.abs(wt - np.conj(np.swapaxes(wt, 1, 2)))) < 1e-15


def test_rotating_coupling_at_time_zero_is_stationary():
    w0 = stationary_coupling(COUPLED, 0.7, XS)
    wt = rotating_coupling(COUPLED, 0.7, 0.0, XS)
    assert np.max(np.abs(w0 - wt)) < 1e-14


def test_unknown_route_rejected():
    with pytest.raises(ValueError):
        rotating_coupling(COUPLED, 0.7, 0.0, XS, route="magic")


def test_profile_requires_two_channels():
    spec = SpectralData(1, [BoundStateSpec(energy=-1.0, gammas=(1.0,))])
    with pytest.raises(ValueError):
        field_profile(spec, XS, 0.5)
