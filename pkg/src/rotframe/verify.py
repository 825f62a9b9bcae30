"""End-to-end verification battery with named, tabulated results.

Each check pits a closed-form construction against an independent numerical
route (brute-force propagation, stencil residuals, textbook limits) and
reports a `CheckResult` row.  `run_all` drives every group; the CLI turns
failed rows into a nonzero exit status, and the acceptance tests assert on
the same rows one criterion at a time.

Groups (selectable by name prefix): golden, transparency, eigen, frame,
tdse, phases, spin, berry, algebra.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bargmann import (
    BoundStateSpec,
    SpectralData,
    bound_state,
    bound_state_samples,
    default_grid,
    potential_matrix,
)
from .errors import ResolutionError, TruncationDomainError
from .evolution import (
    ExactSolution,
    frame_stationarity,
    s_of_t,
    schrodinger_residual,
)
from .fields import (
    decompose,
    rotating_coupling,
    rotating_coupling_sampler,
    theta_bar_derivative,
)
from .gauge import (
    rotation_matrix,
    vector_potential,
    vector_potential_fd,
)
from .grids import SpinorField
from .oracle import propagate_grid, propagate_spin, reflection_coefficient
from .phases import (
    anandan_phase,
    dynamical_phase,
    h_expectation,
    principal_value,
    spin_expectation,
    spin_expectation_rotated,
    total_phase,
)
from .spinmodel import CrankedModel, adiabatic_sweep, spin_phases

__all__ = ["CheckResult", "random_spectral_data", "run_all", "CHECK_GROUPS"]

# deterministic reference model used by several groups
_REFERENCE = SpectralData(
    2,
    [
        BoundStateSpec(energy=-0.81, gammas=(0.9, -0.5)),
        BoundStateSpec(energy=-2.25, gammas=(0.7, 1.3)),
    ],
)
_OMEGA = 0.7


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    tolerance: float
    passed: bool

    @classmethod
    def below(cls, name: str, value: float, tolerance: float) -> "CheckResult":
        return cls(name, float(value), float(tolerance), bool(value <= tolerance))

    @classmethod
    def within(
        cls, name: str, value: float, lo: float, hi: float
    ) -> "CheckResult":
        return cls(name, float(value), float(hi), bool(lo <= value <= hi))


def random_spectral_data(
    rng: np.random.Generator,
    max_states: int = 3,
    min_alignment: float | None = None,
) -> SpectralData:
    """Draw a two-channel model with well-separated decay rates.

    With `min_alignment` set, re-draws until every bound state has a channel
    imbalance of at least that magnitude, which keeps overlap tracking
    unambiguous for phase checks.
    """
    for _ in range(200):
        n_states = int(rng.integers(1, max_states + 1))
        while True:
            kappas = np.sort(rng.uniform(0.7, 2.2, n_states))
            if n_states == 1 or np.min(np.diff(kappas)) > 0.15:
                break
        states = []
        for kap in kappas:
            gam = rng.uniform(0.4, 2.0, 2) * rng.choice([-1.0, 1.0], 2)
            states.append(BoundStateSpec(energy=-float(kap) ** 2, gammas=tuple(gam)))
        spec = SpectralData(2, states)
        if min_alignment is None:
            return spec
        grid = default_grid(spec)
        try:
            usable = all(
                abs(spin_expectation(bound_state(spec, nu, grid))) >= min_alignment
                for nu in range(n_states)
            )
        except TruncationDomainError:
            continue  # a strongly offset state outgrew the default grid
        if usable:
            return spec
    raise RuntimeError("rejection sampling failed to find a usable model")


# ---------------------------------------------------------------------------
# check groups
# ---------------------------------------------------------------------------

def check_golden(rng=None, perturb=False) -> list[CheckResult]:
    """Single-channel closed forms against textbook expressions."""
    spec = SpectralData(1, [BoundStateSpec(energy=-1.0, gammas=(np.sqrt(2.0),))])
    xs = np.linspace(-10.0, 10.0, 2001)
    _, v = potential_matrix(spec, xs)
    v_err = np.max(np.abs(v[:, 0, 0] + 2.0 / np.cosh(xs) ** 2))
    phi = bound_state_samples(spec, 0, xs)
    s_err = np.max(np.abs(phi[:, 0] - 1.0 / (np.sqrt(2.0) * np.cosh(xs))))
    norm = bound_state(spec, 0, default_grid(spec)).norm()
    return [
        CheckResult.below("golden_potential", v_err, 1e-10),
        CheckResult.below("golden_state", s_err, 1e-10),
        CheckResult.below("golden_norm", abs(norm - 1.0), 1e-10),
    ]


def check_transparency(rng, perturb=False) -> list[CheckResult]:
    """Reflection of seeded random couplings at five momenta."""
    k_values = np.array([0.5, 1.0, 2.0, 4.0, 8.0])
    worst = np.zeros(k_values.size)
    for _ in range(5):
        spec = random_spectral_data(rng)
        grid = default_grid(spec)

        def v_of(x, spec=spec):
            return potential_matrix(spec, x)[1]

        r = reflection_coefficient(v_of, k_values, grid.x_min, grid.x_max)
        worst = np.maximum(worst, np.max(np.abs(r), axis=tuple(range(1, r.ndim))))
    return [
        CheckResult.below(f"reflection_k{_fmt(k)}", worst[i], 1e-6)
        for i, k in enumerate(k_values)
    ]


def _fmt(k: float) -> str:
    return f"{k:g}".replace(".", "p")


def check_eigen(rng, perturb=False) -> list[CheckResult]:
    """Stencil eigen-residuals of every bound state of seeded couplings."""
    rows = []
    for i in range(5):
        spec = random_spectral_data(rng)
        xs = np.linspace(-12.0, 12.0, 24001)
        h = xs[1] - xs[0]
        _, v = potential_matrix(spec, xs)
        worst = 0.0
        for nu in range(len(spec.states)):
            phi = bound_state_samples(spec, nu, xs)
            lap = (
                -phi[4:] + 16 * phi[3:-1] - 30 * phi[2:-2] + 16 * phi[1:-3] - phi[:-4]
            ) / (12 * h * h)
            e_nu = spec.states[nu].energy
            resid = (
                -lap + np.einsum("xab,xb->xa", v[2:-2], phi[2:-2]) - e_nu * phi[2:-2]
            )
            rel = np.linalg.norm(resid) / np.linalg.norm(e_nu * phi[2:-2])
            worst = max(worst, float(rel))
        rows.append(CheckResult.below(f"eigen_residual_cfg{i}", worst, 1e-6))
    return rows


def check_frame(rng, perturb=False) -> list[CheckResult]:
    """Frame stationarity and the dual coupling constructions."""
    x = np.linspace(-8.0, 8.0, 401)

    perturbation = None
    if perturb:

        def perturbation(t, xx):
            bump = 1e-6 * np.sin(2.3 * t) * np.exp(-(xx**2))
            return bump[..., None, None] * np.array(
                [[0.0, 1.0], [1.0, 0.0]], dtype=complex
            )

    stat = frame_stationarity(
        _REFERENCE, _OMEGA, x, n_samples=100, perturbation=perturbation
    )
    dual = 0.0
    for t in np.linspace(0.0, np.pi / _OMEGA, 100):
        wt = rotating_coupling(_REFERENCE, _OMEGA, t, x, route="trig")
        wc = rotating_coupling(_REFERENCE, _OMEGA, t, x, route="conjugation")
        dual = max(dual, float(np.max(np.abs(wt - wc))))
    return [
        CheckResult.below("frame_stationarity", stat, 1e-12),
        CheckResult.below("frame_dual_construction", dual, 1e-12),
    ]


def check_tdse(rng=None, perturb=False) -> list[CheckResult]:
    """Independent-stencil residual and brute-force grid propagation."""
    resid = max(
        schrodinger_residual(_REFERENCE, 0, _OMEGA, t, np.linspace(-3.0, 3.0, 13))
        for t in (0.0, 0.9)
    )
    rows = [CheckResult.below("tdse_residual", resid, 1e-5)]

    # base resolution chosen so the coarse infidelity sits well above the
    # integrator's noise floor; halving dx and dt then shows the real order
    infidelities = []
    for refine in (1, 2):
        base = default_grid(_REFERENCE, dx_target=0.14 / refine)
        sol = ExactSolution(_REFERENCE, 0, _OMEGA, base)
        sampler = rotating_coupling_sampler(_REFERENCE, _OMEGA, base.x)
        prop = propagate_grid(
            sampler,
            base.dx,
            sol.psi0.components,
            sol.period,
            n_steps=2048 * refine,
            edge_tol=1e-4,
        )
        final = SpinorField(base, prop.psi_final)
        exact = sol.at_time(sol.period)
        fid = abs(exact.overlap(final)) / (exact.norm() * final.norm())
        infidelities.append(1.0 - fid)
    gain = infidelities[0] / max(infidelities[1], 1e-300)
    rows.append(CheckResult.below("grid_infidelity", infidelities[0], 1e-4))
    rows.append(
        CheckResult(
            "grid_refinement_gain", float(gain), 4.0, bool(gain >= 4.0)
        )
    )
    return rows


def check_phases(rng, perturb=False) -> list[CheckResult]:
    """Phase identities on seeded models plus the reference one."""
    specs = [_REFERENCE]
    if rng is not None:
        specs.append(random_spectral_data(rng, min_alignment=0.05))
    geom_err = h_err = aa_err = twopath_err = 0.0
    for spec in specs:
        grid = default_grid(spec)
        _, v = potential_matrix(spec, grid.x)
        _, _, tb, _ = decompose(v)
        for nu in range(len(spec.states)):
            sol = ExactSolution(spec, nu, _OMEGA, grid)
            s3 = spin_expectation(sol.psi0)
            sgn = np.sign(s3)
            total = total_phase(sol)
            dyn = dynamical_phase(sol)
            geom_err = max(geom_err, abs((total - dyn) - np.pi * (sgn - s3)))
            hs = [h_expectation(sol, t) for t in np.linspace(0, sol.period, 7)]
            h_err = max(h_err, max(hs) - min(hs))
            aa_err = max(aa_err, abs(anandan_phase(sol) - np.pi * s3))
            twopath_err = max(
                twopath_err,
                abs(spin_expectation_rotated(sol.psi0, tb) - s3),
            )
    return [
        CheckResult.below("geometric_identity", geom_err, 1e-10),
        CheckResult.below("h_constancy", h_err, 1e-10),
        CheckResult.below("anandan_value", aa_err, 1e-8),
        CheckResult.below("two_path_sigma3", twopath_err, 1e-10),
    ]


def check_spin(rng, perturb=False) -> list[CheckResult]:
    """20 random half-spin models against brute-force time stepping."""
    geom_err = 0.0
    min_fidelity = 1.0
    count = 0
    while count < 20:
        theta = float(rng.uniform(0.1, np.pi - 0.1))
        if abs(np.cos(theta)) < 0.05:
            continue  # keep the overlap path trackable
        model = CrankedModel(
            j=0.5,
            omega_bar=float(rng.uniform(0.4, 2.0)),
            theta_bar=theta,
            omega=float(rng.uniform(0.3, 1.5)),
        )
        m = float(rng.choice([-1.0, 1.0]))
        try:
            rep = propagate_spin(
                model.h_of_t, model.stationary_state(m), model.period
            )
        except ResolutionError:
            continue
        family = spin_phases(model, m)
        oracle_geom = -rep.tracked_phase - rep.h_expectation_integral
        geom_err = max(
            geom_err, abs(principal_value(oracle_geom - family.geometric))
        )
        min_fidelity = min(min_fidelity, rep.fidelity)
        count += 1
    return [
        CheckResult.below("spin_geometric_mod2pi", geom_err, 1e-6),
        CheckResult.below("spin_infidelity", 1.0 - min_fidelity, 1e-8),
    ]


def check_berry(rng=None, perturb=False) -> list[CheckResult]:
    """First-order approach to the adiabatic limit at fixed lab field."""
    rows = adiabatic_sweep(1.0, 1.0, np.pi / 2, [0.1, 0.01, 0.001])
    r1 = rows[0].deviation / rows[1].deviation
    r2 = rows[1].deviation / rows[2].deviation
    return [
        CheckResult.within("berry_ratio_1", r1, 5.0, 20.0),
        CheckResult.within("berry_ratio_2", r2, 5.0, 20.0),
    ]


def check_algebra(rng, perturb=False) -> list[CheckResult]:
    """Unitarity / orthogonality sampling and the vector-potential routes."""
    ts = rng.uniform(0.0, 20.0, 1000)
    u_err = 0.0
    for t in ts:
        s = s_of_t(_OMEGA, t)
        u_err = max(u_err, float(np.max(np.abs(s @ s.conj().T - np.eye(2)))))
    r_err = 0.0
    for _ in range(1000):
        j = float(rng.choice([0.5, 1.0, 1.5, 2.0, 2.5, 3.0]))
        r = rotation_matrix(float(rng.uniform(-6.0, 6.0)), j)
        d = r.shape[0]
        r_err = max(
            r_err,
            float(np.max(np.abs(r @ r.T - np.eye(d)))),
            float(abs(np.linalg.det(r) - 1.0)),
        )

    xs = np.linspace(-4.0, 4.0, 81)
    tp = theta_bar_derivative(_REFERENCE, xs)
    _, v0 = potential_matrix(_REFERENCE, xs)
    _, in_plane, _, _ = decompose(v0)
    # The angle's absolute rounding noise is set by O(1) intermediates of
    # the closed-form assembly, so it blows up wherever the in-plane part is
    # small on the global scale (the exponential tails and the dip, where
    # the angle also swings at ~45 rad/unit).  Differencing the angle there
    # is meaningless; compare the routes where both hold full precision
    # (the dip region is covered by the gauge-equation residual check).
    keep = (np.abs(tp) < 5.0) & (in_plane > 1e-2 * np.max(np.abs(v0)))
    xs, tp = xs[keep], tp[keep]
    step = 3e-6
    theta_of = {}
    for h in (0.0, step, -step):
        _, v = potential_matrix(_REFERENCE, xs + h)
        _, _, tb, _ = decompose(v)
        theta_of[h] = tb
    closed = vector_potential(tp)
    fd = vector_potential_fd(theta_of[0.0], theta_of[step], theta_of[-step], step)
    a_err = float(np.max(np.abs(closed - fd)))
    return [
        CheckResult.below("frame_unitarity", u_err, 1e-13),
        CheckResult.below("rotation_orthogonality", r_err, 1e-13),
        CheckResult.below("vector_potential_fd", a_err, 1e-8),
    ]


CHECK_GROUPS = {
    "golden": check_golden,
    "transparency": check_transparency,
    "eigen": check_eigen,
    "frame": check_frame,
    "tdse": check_tdse,
    "phases": check_phases,
    "spin": check_spin,
    "berry": check_berry,
    "algebra": check_algebra,
}


def run_all(
    seed: int = 0,
    perturb_hamiltonian: bool = False,
    only: str | None = None,
) -> list[CheckResult]:
    """Run every check group (or those whose name starts with `only`)."""
    names = [n for n in CHECK_GROUPS if only is None or n.startswith(only)]
    if not names:
        raise ValueError(f"no check group matches {only!r}")
    results: list[CheckResult] = []
    for name in names:
        rng = np.random.default_rng(seed)
        results.extend(CHECK_GROUPS[name](rng, perturb=perturb_hamiltonian))
    return results
