"""Fixed-surface solver: the same field update on a mesh that never moves.

This is an independent implementation of the ``kappa = 0`` limit of the
moving-surface stepper.  The mesh, the lumped mass, the stiffness matrix,
and both system matrices are built once before the loop; only the right-hand
sides change between steps.  Because the moving-surface path degenerates to
exactly the same algebra when ``kappa = 0``, both paths must produce
bit-identical fields and diagnostics, which the test suite checks.

The fixed surface also gives meaning to the deposit thickness: each node is
a material point, so the time integral of eta at a node is the height of
metal grown there (available from the returned series).
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .assembly import LumpedMass, StiffnessPattern, assemble_lumped_mass, assemble_stiffness
from .diagnostics import DiagnosticsSeries
from .errors import ModeError
from .kinetics import KineticsParams, eval_f, eval_g
from .mesh import mesh_quality
from .stepper import SimState, SolverConfig, _check_finite, _check_state, _diffusion_system, solve_spd


def run_stationary(
    initial: SimState,
    params: KineticsParams,
    cfg: SolverConfig,
    observers: Sequence[Callable[[SimState, LumpedMass], None]] = (),
    stride: int = 10,
) -> tuple[SimState, DiagnosticsSeries]:
    """Advance the reaction-diffusion system on a frozen surface to time T.

    Sampling, observers, and the returned pair match :func:`esdib.stepper.run`;
    ``params.kappa`` must be zero (the surface cannot move here).

    Raises
    ------
    ModeError
        ``params.kappa`` is nonzero.
    """
    if params.kappa != 0.0:
        raise ModeError(
            f"fixed-surface solver requires kappa = 0, got {params.kappa}"
        )
    _check_state(initial)
    if stride < 1:
        raise ValueError(f"sampling stride must be >= 1, got {stride}")
    n_steps = cfg.n_steps
    series = DiagnosticsSeries(evolving=False)
    if n_steps == 0:
        return initial, series

    mesh = initial.mesh
    pattern = StiffnessPattern(mesh.triangles, mesh.n_nodes)
    mass = assemble_lumped_mass(mesh)
    stiff = assemble_stiffness(mesh, pattern)
    A_eta = _diffusion_system(stiff, pattern, mass.diag, cfg.tau, 1.0)
    A_theta = _diffusion_system(stiff, pattern, mass.diag, cfg.tau, params.d)
    quality = mesh_quality(mesh)

    def sample(state: SimState) -> None:
        series.record(state, mass, quality)
        for obs in observers:
            obs(state, mass)

    tau = cfg.tau
    eta = initial.eta
    theta = initial.theta
    state = initial
    sample(state)
    for k in range(1, n_steps + 1):
        f_vals = eval_f(eta, theta, params)
        g_vals = eval_g(eta, theta, params)
        rhs_eta = (mass.diag * eta) / tau + params.rho * (mass.diag * f_vals)
        rhs_theta = (mass.diag * theta) / tau + params.rho * (mass.diag * g_vals)
        eta = solve_spd(A_eta, rhs_eta, cfg.cg_tol, cfg.cg_maxiter, x0=eta)
        theta = solve_spd(A_theta, rhs_theta, cfg.cg_tol, cfg.cg_maxiter, x0=theta)
        _check_finite(k, eta, theta)
        state = SimState(
            t=state.t + tau, mesh=mesh, eta=eta, theta=theta,
            step_index=state.step_index + 1,
        )
        if k % stride == 0 or k == n_steps:
            sample(state)
    return state, series
