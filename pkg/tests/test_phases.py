"""Phase functionals of the exact solutions: values, identities, guards."""

import numpy as np
import pytest

from rotframe.bargmann import BoundStateSpec, SpectralData, bound_state, default_grid
from rotframe.errors import NormalizationError
from rotframe.evolution import ExactSolution
from rotframe.fields import decompose, potential_matrix
from rotframe.grids import SpinorField
from rotframe.phases import (
    anandan_phase,
    dynamical_phase,
    geometric_phase,
    h_expectation,
    phase_report,
    principal_value,
    spin_expectation,
    spin_expectation_rotated,
    total_phase,
)

COUPLED = SpectralData(
    2,
    [
        BoundStateSpec(energy=-0.81, gammas=(0.9, -0.5)),
        BoundStateSpec(energy=-2.25, gammas=(0.7, 1.3)),
    ],
)
OMEGA = 0.7


@pytest.fixture(scope="module")
def grid():
    return default_grid(COUPLED)


@pytest.fixture(scope="module")
def solutions(grid):
    return [ExactSolution(COUPLED, nu, OMEGA, grid) for nu in (0, 1)]


def test_spin_expectation_single_state_weights():
    # one bound state: the spinor direction is the weight vector itself
    spec = SpectralData(2, [BoundStateSpec(energy=-1.44, gammas=(0.8, -1.1))])
    g = default_grid(spec)
    value = spin_expectation(bound_state(spec, 0, g))
    expect = (0.8**2 - 1.1**2) / (0.8**2 + 1.1**2)
    assert abs(value - expect) < 1e-10


def test_spin_expectation_rejects_unnormalized(grid):
    state = bound_state(COUPLED, 0, grid)
    bad = SpinorField(grid, 1.01 * state.components)
    with pytest.raises(NormalizationError):
        spin_expectation(bad)


def test_two_path_spin_expectation_agrees(grid):
    state = bound_state(COUPLED, 0, grid)
    _, v = potential_matrix(COUPLED, grid.x)
    _, _, tb, _ = decompose(v)
    direct = spin_expectation(state)
    rotated = spin_expectation_rotated(state, tb)
    assert abs(direct - rotated) < 1e-10


def test_phase_identities_both_states(solutions):
    for sol in solutions:
        s3 = spin_expectation(sol.psi0)
        sgn = np.sign(s3)
        T = sol.period
        assert abs(total_phase(sol) - (sol.energy * T + np.pi * sgn)) < 1e-10
        assert abs(dynamical_phase(sol) - (sol.energy * T + np.pi * s3)) < 1e-10
        assert abs(geometric_phase(sol) - np.pi * (sgn - s3)) < 1e-10
        assert abs(anandan_phase(sol) - np.pi * s3) < 1e-8


def test_h_expectation_is_time_constant(solutions):
    for sol in solutions:
        values = [h_expectation(sol, t) for t in np.linspace(0, sol.period, 17)]
        assert max(values) - min(values) < 1e-10
        s3 = spin_expectation(sol.psi0)
        assert abs(values[0] - (sol.energy + OMEGA * s3)) < 1e-10


def test_phase_report_assembles(solutions):
    rep = phase_report(solutions[0])
    assert rep.state == 0
    assert rep.branch == 1
    assert abs(rep.geometric - (rep.total - rep.dynamical)) < 1e-14
    rep1 = phase_report(solutions[1])
    assert rep1.branch == -1
    assert rep1.sigma3 < 0


def test_frozen_phase_values(solutions):
    # pinned against an independent run of the same construction
    rep = phase_report(solutions[0])
    assert abs(rep.sigma3 - 0.544053024124) < 1e-9
    assert abs(rep.total - -0.493678845564) < 1e-9
    assert abs(rep.dynamical - -1.926078515402) < 1e-9
    assert abs(rep.anandan - 1.709192983752) < 1e-9


def test_quadrature_sample_validation(solutions):
    with pytest.raises(ValueError):
        dynamical_phase(solutions[0], n_samples=3)
    with pytest.raises(ValueError):
        anandan_phase(solutions[0], n_samples=7)


def test_principal_value_branch():
    assert principal_value(0.0) == 0.0
    assert principal_value(np.pi) == np.pi
    assert principal_value(-np.pi) == np.pi  # half-open on the negative side
    assert abs(principal_value(3 * np.pi / 2) + np.pi / 2) < 1e-14
    assert abs(principal_value(-7.5) - (-7.5 + 2 * np.pi)) < 1e-14
    assert abs(principal_value(13.0) - (13.0 - 4 * np.pi)) < 1e-14
