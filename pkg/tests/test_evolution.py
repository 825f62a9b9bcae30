"""Frame unitary, exact solutions, and their independent consistency checks."""

import numpy as np
import pytest

from rotframe.bargmann import BoundStateSpec, SpectralData, default_grid
from rotframe.errors import ResolutionError
from rotframe.evolution import (
    ExactSolution,
    apply_frame,
    cyclic_return,
    frame_stationarity,
    period,
    s_dot_of_t,
    s_of_t,
    schrodinger_residual,
)

COUPLED = SpectralData(
    2,
    [
        BoundStateSpec(energy=-0.81, gammas=(0.9, -0.5)),
        BoundStateSpec(energy=-2.25, gammas=(0.7, 1.3)),
    ],
)
OMEGA = 0.7


def test_period_requires_positive_rate():
    assert abs(period(2.0) - np.pi / 2) < 1e-15
    with pytest.raises(ValueError):
        period(0.0)
    with pytest.raises(ValueError):
        period(-1.0)


def test_frame_unitary_properties():
    rng = np.random.default_rng(5)
    for t in rng.uniform(0, 10, 25):
        s = s_of_t(OMEGA, t)
        assert np.max(np.abs(s @ s.conj().T - np.eye(2))) < 1e-15
    assert np.max(np.abs(s_of_t(OMEGA, period(OMEGA)) + np.eye(2))) < 1e-15


def test_frame_derivative_matches_fd():
    t = 0.37
    fd = (s_of_t(OMEGA, t + 1e-6) - s_of_t(OMEGA, t - 1e-6)) / 2e-6
    assert np.max(np.abs(s_dot_of_t(OMEGA, t) - fd)) < 1e-9


def test_apply_frame_equals_matrix_action():
    rng = np.random.default_rng(11)
    comps = rng.normal(size=(7, 2)) + 1j * rng.normal(size=(7, 2))
    direct = apply_frame(OMEGA, 0.9, comps)
    via_matrix = np.einsum("ab,xb->xa", s_of_t(OMEGA, 0.9), comps)
    assert np.max(np.abs(direct - via_matrix)) < 1e-15


def test_exact_solution_norm_and_endpoints():
    grid = default_grid(COUPLED)
    sol = ExactSolution(COUPLED, 0, OMEGA, grid)
    assert np.array_equal(sol.at_time(0.0).components, sol.psi0.components)
    assert abs(sol.at_time(1.3).norm() - 1.0) < 1e-10
    # after one period the state returns with an overall sign and phase
    end = sol.at_time(sol.period).components
    expect = -np.exp(-1j * sol.energy * sol.period) * sol.psi0.components
    assert np.max(np.abs(end - expect)) < 1e-12


def test_cyclic_return_tracked_phase():
    grid = default_grid(COUPLED)
    for nu in (0, 1):
        sol = ExactSolution(COUPLED, nu, OMEGA, grid)
        rep = cyclic_return(sol)
        comps = sol.psi0.components
        s3 = grid.integrate(
            np.abs(comps[:, 0]) ** 2 - np.abs(comps[:, 1]) ** 2
        ).real
        expect = sol.energy * sol.period + np.pi * np.sign(s3)
        assert abs(rep.fidelity - 1.0) < 1e-12
        assert abs(rep.total_phase - expect) < 1e-12


def test_balanced_state_tracking_is_ambiguous():
    # equal weights put the overlap through zero at half period
    eq = SpectralData(2, [BoundStateSpec(energy=-1.0, gammas=(1.0, 1.0))])
    sol = ExactSolution(eq, 0, OMEGA, default_grid(eq))
    with pytest.raises(ResolutionError):
        cyclic_return(sol)


def test_frame_stationarity_and_perturbed_control():
    x = np.linspace(-8.0, 8.0, 301)
    assert frame_stationarity(COUPLED, OMEGA, x) < 1e-13

    def pert(t, xx):
        bump = 1e-6 * np.sin(2.3 * t) * np.exp(-(xx**2))
        return bump[..., None, None] * np.array([[0, 1], [1, 0]], dtype=complex)

    assert frame_stationarity(COUPLED, OMEGA, x, perturbation=pert) > 1e-7


def test_schrodinger_residual_small():
    xs = np.linspace(-3.0, 3.0, 13)
    for t in (0.0, 0.9):
        assert schrodinger_residual(COUPLED, 0, OMEGA, t, xs) < 1e-6
