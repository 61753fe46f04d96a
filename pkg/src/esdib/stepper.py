"""Time integration of the reaction-diffusion system on the moving surface.

One step of the scheme, from time level n to n+1 with step size tau:

1. move every node along its current unit normal by ``tau * kappa * eta``;
2. solve ``(M_n / tau + K_{n+1}) eta_{n+1} = M_n eta_n / tau + rho M_n f_n``
   for the morphology field (mass kept at the old level on both sides, so a
   spatially uniform eta stays uniform: the field rides along with the
   surface without dilution);
3. solve ``(M_{n+1} / tau + d K_{n+1}) theta_{n+1} = M_n theta_n / tau
   + rho M_n g_n`` for the coverage field (new mass on the left, old mass on
   the right: stretching the surface dilutes the transported species, and
   with f = g = 0 the discrete integral of theta is conserved exactly).

Diffusion is implicit (backward Euler on the moved mesh), reactions and the
normal motion explicit.  Both linear systems are symmetric positive definite
and solved by Jacobi-preconditioned conjugate gradients warm-started from the
previous field.

With ``kappa = 0`` the mesh object is reused unchanged and the same update
reduces to the classic fixed-surface scheme.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.sparse import csr_matrix

from .assembly import LumpedMass, StiffnessPattern, assemble_lumped_mass, assemble_stiffness
from .diagnostics import DiagnosticsSeries
from .errors import DegeneracyStop, NumericsError, SolverConvergenceError
from .kinetics import KineticsParams, eval_f, eval_g
from .mesh import SurfaceMesh, compute_node_normals, displace_nodes, mesh_quality


@dataclass
class SolverConfig:
    """Numerical controls of one run.

    ``min_triangle_area=None`` resolves to ``1e-12`` times the mean triangle
    area of the initial mesh; together with ``min_angle_deg`` it defines the
    degeneracy stop that ends a run before elements collapse.
    """

    tau: float = 1e-2
    T: float = 1.0
    cg_tol: float = 1e-10
    cg_maxiter: int = 10000
    min_triangle_area: float | None = None
    min_angle_deg: float = 0.5

    def __post_init__(self):
        if not (self.tau > 0.0 and math.isfinite(self.tau)):
            raise ValueError(f"tau must be positive, got {self.tau}")
        if not (self.T >= 0.0 and math.isfinite(self.T)):
            raise ValueError(f"final time T must be >= 0, got {self.T}")
        if not (self.cg_tol > 0.0):
            raise ValueError(f"cg_tol must be positive, got {self.cg_tol}")
        if self.cg_maxiter < 1:
            raise ValueError(f"cg_maxiter must be >= 1, got {self.cg_maxiter}")

    @property
    def n_steps(self) -> int:
        """Number of steps covering [0, T]; T is trusted over float ratio noise."""
        return max(0, math.ceil(self.T / self.tau - 1e-9))


@dataclass
class SimState:
    """Solver state at one time level."""

    t: float
    mesh: SurfaceMesh
    eta: np.ndarray
    theta: np.ndarray
    step_index: int = 0


def solve_spd(
    A: csr_matrix,
    rhs: np.ndarray,
    tol: float = 1e-10,
    maxiter: int = 10000,
    x0: np.ndarray | None = None,
    callback: Callable[[np.ndarray], None] | None = None,
) -> np.ndarray:
    """Jacobi-preconditioned conjugate gradients for a sparse SPD system.

    Iterates until ``||rhs - A x|| <= tol * ||rhs||``.  A zero right-hand
    side returns the zero vector immediately; a warm start ``x0`` that
    already satisfies the tolerance is returned unchanged.

    Raises
    ------
    SolverConvergenceError
        Tolerance not reached within ``maxiter`` iterations; carries the
        final relative residual.
    NumericsError
        Non-finite right-hand side or non-positive matrix diagonal.
    """
    rhs = np.asarray(rhs, dtype=np.float64)
    bnorm = float(np.linalg.norm(rhs))
    if not math.isfinite(bnorm):
        raise NumericsError("right-hand side contains non-finite values")
    if bnorm == 0.0:
        return np.zeros_like(rhs)
    diag = A.diagonal()
    if diag.min() <= 0.0:
        raise NumericsError("system matrix has a non-positive diagonal entry")
    if x0 is None:
        x = np.zeros_like(rhs)
        r = rhs.copy()
    else:
        x = np.array(x0, dtype=np.float64)
        r = rhs - A @ x
    if float(np.linalg.norm(r)) <= tol * bnorm:
        return x
    z = r / diag
    p = z.copy()
    rz = float(np.dot(r, z))
    for iteration in range(1, maxiter + 1):
        Ap = A @ p
        alpha = rz / float(np.dot(p, Ap))
        x += alpha * p
        r -= alpha * Ap
        if callback is not None:
            callback(x)
        if float(np.linalg.norm(r)) <= tol * bnorm:
            return x
        z = r / diag
        rz_next = float(np.dot(r, z))
        p = z + (rz_next / rz) * p
        rz = rz_next
    raise SolverConvergenceError(
        f"conjugate gradients did not converge in {maxiter} iterations "
        f"(relative residual {float(np.linalg.norm(r)) / bnorm:.3e})",
        residual=float(np.linalg.norm(r)) / bnorm,
        iterations=maxiter,
    )


def _diffusion_system(
    stiff: csr_matrix,
    pattern: StiffnessPattern,
    mass_diag: np.ndarray,
    tau: float,
    diffusivity: float,
) -> csr_matrix:
    """CSR matrix ``diffusivity * K + diag(mass) / tau`` sharing K's pattern."""
    if diffusivity == 1.0:
        data = stiff.data.copy()
    else:
        data = diffusivity * stiff.data
    data[pattern.diagonal_slots] += mass_diag / tau
    return csr_matrix(
        (data, stiff.indices, stiff.indptr), shape=stiff.shape
    )


def _solve_fields(
    eta: np.ndarray,
    theta: np.ndarray,
    mass_old: LumpedMass,
    mass_new: LumpedMass,
    stiff_new: csr_matrix,
    pattern: StiffnessPattern,
    params: KineticsParams,
    cfg: SolverConfig,
) -> tuple[np.ndarray, np.ndarray]:
    """Implicit-diffusion, explicit-reaction field update on the moved mesh."""
    tau = cfg.tau
    f_vals = eval_f(eta, theta, params)
    g_vals = eval_g(eta, theta, params)
    rhs_eta = (mass_old.diag * eta) / tau + params.rho * (mass_old.diag * f_vals)
    rhs_theta = (mass_old.diag * theta) / tau + params.rho * (mass_old.diag * g_vals)
    A_eta = _diffusion_system(stiff_new, pattern, mass_old.diag, tau, 1.0)
    A_theta = _diffusion_system(stiff_new, pattern, mass_new.diag, tau, params.d)
    eta_next = solve_spd(A_eta, rhs_eta, cfg.cg_tol, cfg.cg_maxiter, x0=eta)
    theta_next = solve_spd(A_theta, rhs_theta, cfg.cg_tol, cfg.cg_maxiter, x0=theta)
    return eta_next, theta_next


def _check_finite(state_index: int, *arrays: np.ndarray) -> None:
    for arr in arrays:
        if not np.isfinite(arr).all():
            raise NumericsError(
                f"non-finite field value after step {state_index} (blow-up)"
            )


def _resolve_min_area(cfg: SolverConfig, mesh: SurfaceMesh) -> float:
    if cfg.min_triangle_area is not None:
        return cfg.min_triangle_area
    mass = assemble_lumped_mass(mesh)
    return 1e-12 * (mass.total() / mesh.n_triangles)


def _advance(
    state: SimState,
    params: KineticsParams,
    cfg: SolverConfig,
    pattern: StiffnessPattern,
    mass: LumpedMass,
    min_area: float,
) -> tuple[SimState, LumpedMass]:
    """One step given precomputed pattern, old mass, and resolved threshold."""
    if params.kappa != 0.0:
        normals = compute_node_normals(state.mesh)
        displacement = (cfg.tau * params.kappa) * state.eta[:, None] * normals
        mesh_new = displace_nodes(state.mesh, displacement)
        quality = mesh_quality(mesh_new)
        if quality.min_area < min_area or quality.min_angle_deg < cfg.min_angle_deg:
            raise DegeneracyStop(
                "mesh degenerated at step "
                f"{state.step_index + 1}: min area {quality.min_area:.3e}, "
                f"min angle {quality.min_angle_deg:.3f} deg",
                step_index=state.step_index + 1,
                time=state.t + cfg.tau,
            )
        mass_new = assemble_lumped_mass(mesh_new)
    else:
        mesh_new = state.mesh
        mass_new = mass
    stiff_new = assemble_stiffness(mesh_new, pattern)
    eta_next, theta_next = _solve_fields(
        state.eta, state.theta, mass, mass_new, stiff_new, pattern, params, cfg
    )
    _check_finite(state.step_index + 1, eta_next, theta_next)
    next_state = SimState(
        t=state.t + cfg.tau,
        mesh=mesh_new,
        eta=eta_next,
        theta=theta_next,
        step_index=state.step_index + 1,
    )
    return next_state, mass_new


def step(state: SimState, params: KineticsParams, cfg: SolverConfig) -> SimState:
    """Advance one time step; see the module docstring for the scheme.

    Convenience single-shot form: the sparsity pattern and old mass matrix
    are rebuilt on every call.  Inside :func:`run` they are cached.

    Raises
    ------
    DegeneracyStop
        The moved mesh fell below the quality thresholds; the input state
        is still valid.
    SolverConvergenceError, NumericsError
        Linear solve failure or non-finite field values.
    """
    _check_state(state)
    pattern = StiffnessPattern(state.mesh.triangles, state.mesh.n_nodes)
    mass = assemble_lumped_mass(state.mesh)
    min_area = _resolve_min_area(cfg, state.mesh)
    next_state, _ = _advance(state, params, cfg, pattern, mass, min_area)
    return next_state


def _check_state(state: SimState) -> None:
    n = state.mesh.n_nodes
    if state.eta.shape != (n,) or state.theta.shape != (n,):
        raise ValueError(
            f"field shapes {state.eta.shape}, {state.theta.shape} do not match "
            f"the mesh ({n} nodes)"
        )


def run(
    initial: SimState,
    params: KineticsParams,
    cfg: SolverConfig,
    observers: Sequence[Callable[[SimState, LumpedMass], None]] = (),
    stride: int = 10,
) -> tuple[SimState, DiagnosticsSeries]:
    """Advance from the initial state to time T, sampling diagnostics.

    Samples are recorded at step 0, every ``stride`` steps, and at the final
    step; observers are called at each sample with the state and the current
    lumped mass.  A degeneracy stop ends the run cleanly: the last valid
    state is returned and the series is flagged as stopped.

    Returns
    -------
    (SimState, DiagnosticsSeries)
        Final (or last valid) state and the recorded series.  ``T = 0``
        returns the initial state and an empty series.
    """
    _check_state(initial)
    if stride < 1:
        raise ValueError(f"sampling stride must be >= 1, got {stride}")
    n_steps = cfg.n_steps
    evolving = params.kappa != 0.0
    series = DiagnosticsSeries(evolving=evolving)
    if n_steps == 0:
        return initial, series

    pattern = StiffnessPattern(initial.mesh.triangles, initial.mesh.n_nodes)
    mass = assemble_lumped_mass(initial.mesh)
    min_area = _resolve_min_area(cfg, initial.mesh)

    def sample(state: SimState, current_mass: LumpedMass) -> None:
        series.record(state, current_mass, mesh_quality(state.mesh))
        for obs in observers:
            obs(state, current_mass)

    state = initial
    sample(state, mass)
    for k in range(1, n_steps + 1):
        try:
            state, mass = _advance(state, params, cfg, pattern, mass, min_area)
        except DegeneracyStop as stop:
            series.mark_stopped(str(stop))
            if (k - 1) % stride != 0:  # pre-step state not sampled yet
                sample(state, mass)
            return state, series
        if k % stride == 0 or k == n_steps:
            sample(state, mass)
    return state, series
