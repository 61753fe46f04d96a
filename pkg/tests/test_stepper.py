"""Linear solver, single steps, and full runs of the time integrator."""

import math

import numpy as np
import pytest
import scipy.sparse as sp

from esdib import (
    DegeneracyStop,
    ModeError,
    NumericsError,
    SimState,
    SolverConfig,
    SolverConvergenceError,
    assemble_lumped_mass,
    assemble_stiffness,
    default_params,
    initial_condition,
    run,
    run_stationary,
    solve_spd,
    step,
    surface_area,
)
from esdib.mesh import triangle_areas
from esdib.meshgen import generate_icosphere, generate_square

from conftest import pure_diffusion_params


def make_state(mesh, eta, theta, t=0.0):
    return SimState(t=t, mesh=mesh, eta=np.asarray(eta, float),
                    theta=np.asarray(theta, float))


class TestSolveSpd:
    def test_diagonal_system_exact_in_one_iteration(self):
        diag = np.array([2.0, 3.0, 4.0, 5.0, 0.5])
        A = sp.diags(diag).tocsr()
        rhs = np.array([1.0, -2.0, 3.0, 0.25, 8.0])
        iterations = []
        x = solve_spd(A, rhs, tol=1e-12, callback=lambda xk: iterations.append(1))
        assert len(iterations) == 1
        assert np.array_equal(x, rhs / diag)

    def test_random_spd_matches_dense_solve(self):
        rng = np.random.default_rng(0)
        n = 50
        R = rng.standard_normal((n, n))
        A_dense = R.T @ R + n * np.eye(n)
        rhs = rng.standard_normal(n)
        x = solve_spd(sp.csr_matrix(A_dense), rhs, tol=1e-14)
        expected = np.linalg.solve(A_dense, rhs)
        assert np.max(np.abs(x - expected)) <= 1e-8 * np.max(np.abs(expected))

    def test_zero_rhs_returns_zero(self):
        A = sp.identity(10, format="csr")
        x = solve_spd(A, np.zeros(10))
        assert np.all(x == 0.0)

    def test_satisfied_warm_start_returned_unchanged(self):
        diag = np.array([2.0, 4.0, 8.0])
        A = sp.diags(diag).tocsr()
        rhs = np.array([1.0, 1.0, 1.0])
        x0 = rhs / diag
        x = solve_spd(A, rhs, tol=1e-10, x0=x0)
        assert np.array_equal(x, x0)

    def test_maxiter_exhaustion_reports_residual(self):
        n = 100
        main = 2.0 * np.ones(n)
        off = -1.0 * np.ones(n - 1)
        A = sp.diags([off, main, off], [-1, 0, 1]).tocsr()
        rhs = np.ones(n)
        with pytest.raises(SolverConvergenceError) as exc:
            solve_spd(A, rhs, tol=1e-14, maxiter=3)
        assert exc.value.iterations == 3
        assert exc.value.residual > 0.0

    def test_non_positive_diagonal_rejected(self):
        A = sp.csr_matrix(np.array([[1.0, 0.0], [0.0, 0.0]]))
        with pytest.raises(NumericsError):
            solve_spd(A, np.array([1.0, 1.0]))

    def test_non_finite_rhs_rejected(self):
        A = sp.identity(3, format="csr")
        with pytest.raises(NumericsError):
            solve_spd(A, np.array([1.0, np.nan, 0.0]))
        with pytest.raises(NumericsError):
            solve_spd(A, np.array([1.0, np.inf, 0.0]))


class TestSolverConfig:
    @pytest.mark.parametrize(
        "tau,T,expected",
        [
            (0.1, 1.0, 10),
            (0.3, 1.0, 4),
            (1e-2, 12.0, 1200),
            (0.1, 0.0, 0),
            (0.2, 0.1, 1),
            (0.1, 0.7, 7),
        ],
    )
    def test_step_count(self, tau, T, expected):
        assert SolverConfig(tau=tau, T=T).n_steps == expected

    def test_validation(self):
        with pytest.raises(ValueError):
            SolverConfig(tau=0.0)
        with pytest.raises(ValueError):
            SolverConfig(tau=-0.1)
        with pytest.raises(ValueError):
            SolverConfig(T=-1.0)
        with pytest.raises(ValueError):
            SolverConfig(cg_tol=0.0)
        with pytest.raises(ValueError):
            SolverConfig(cg_maxiter=0)


class TestSingleStep:
    def test_uniform_fields_frozen_surface_are_fixed_points(self):
        mesh = generate_square(2.0, 8)
        params = pure_diffusion_params(kappa=0.0)
        state = make_state(mesh, np.full(mesh.n_nodes, 0.7), np.full(mesh.n_nodes, 0.3))
        cfg = SolverConfig(tau=1e-2, T=1.0)
        for _ in range(5):
            state = step(state, params, cfg)
        assert np.all(state.eta == 0.7)
        assert np.all(state.theta == 0.3)

    def test_one_step_sphere_growth_radius(self):
        mesh = generate_icosphere(1.0, 4)
        params = pure_diffusion_params(kappa=0.2)
        state = make_state(mesh, np.ones(mesh.n_nodes), np.full(mesh.n_nodes, 0.5))
        cfg = SolverConfig(tau=1e-2, T=1e-2)
        new = step(state, params, cfg)
        radii = np.linalg.norm(new.mesh.nodes, axis=1)
        expected = 1.0 + cfg.tau * params.kappa
        assert np.max(np.abs(radii - expected)) <= 1e-6
        assert new.t == pytest.approx(1e-2, rel=1e-15)
        assert new.step_index == 1

    def test_time_and_index_advance(self):
        mesh = generate_square(1.0, 4)
        params = default_params(B=30.0, C=3.0, kappa=0.0)
        fields = initial_condition(mesh, params, seed=0)
        state = make_state(mesh, fields.eta, fields.theta)
        new = step(state, params, SolverConfig(tau=0.25, T=0.25))
        assert new.t == 0.25
        assert new.step_index == 1
        assert new.mesh is state.mesh  # frozen surface reuses the mesh object

    def test_field_shape_mismatch_rejected(self):
        mesh = generate_square(1.0, 4)
        params = default_params(B=30.0, C=3.0)
        state = make_state(mesh, np.zeros(3), np.zeros(mesh.n_nodes))
        with pytest.raises(ValueError):
            step(state, params, SolverConfig())

    def test_non_finite_initial_field_rejected(self):
        mesh = generate_square(1.0, 4)
        params = default_params(B=30.0, C=3.0, kappa=0.0)
        eta = np.zeros(mesh.n_nodes)
        eta[3] = np.nan
        state = make_state(mesh, eta, np.full(mesh.n_nodes, 0.5))
        with pytest.raises(NumericsError):
            step(state, params, SolverConfig())


class TestConservationAndStability:
    def test_coverage_mass_conserved_frozen_surface(self):
        mesh = generate_square(2.0, 10)
        params = pure_diffusion_params(kappa=0.0)
        rng = np.random.default_rng(4)
        theta = 0.5 + 0.2 * rng.uniform(-1.0, 1.0, mesh.n_nodes)
        state = make_state(mesh, np.zeros(mesh.n_nodes), theta)
        mass = assemble_lumped_mass(mesh)
        total0 = float(mass.diag @ theta)
        cfg = SolverConfig(tau=1e-2, T=0.5, cg_tol=1e-12)
        state, _ = run(state, params, cfg)
        total1 = float(mass.diag @ state.theta)
        assert abs(total1 - total0) <= 1e-8 * abs(total0)

    def test_coverage_mass_conserved_growing_surface(self):
        mesh = generate_icosphere(1.0, 2)
        params = pure_diffusion_params(kappa=0.2)
        state = make_state(
            mesh, np.ones(mesh.n_nodes), np.full(mesh.n_nodes, 0.5)
        )
        total0 = float(assemble_lumped_mass(mesh).diag @ state.theta)
        totals = []
        cfg = SolverConfig(tau=1e-2, T=0.2, cg_tol=1e-12)
        state, _ = run(
            state,
            params,
            cfg,
            observers=[lambda s, m: totals.append(float(m.diag @ s.theta))],
            stride=5,
        )
        assert max(abs(t - total0) for t in totals) <= 1e-8 * abs(total0)

    def test_dilution_of_uniform_coverage_tracks_area(self):
        mesh = generate_icosphere(1.0, 2)
        params = pure_diffusion_params(kappa=0.2)
        area0 = surface_area(mesh)
        state = make_state(mesh, np.ones(mesh.n_nodes), np.full(mesh.n_nodes, 0.5))
        cfg = SolverConfig(tau=1e-2, T=0.2, cg_tol=1e-12)
        state, _ = run(state, params, cfg)
        area1 = surface_area(state.mesh)
        assert area1 > area0
        mass1 = assemble_lumped_mass(state.mesh)
        mean_theta = float(mass1.diag @ state.theta) / area1
        assert mean_theta == pytest.approx(0.5 * area0 / area1, rel=1e-6)
        assert np.max(np.abs(state.theta - mean_theta)) <= 1e-3

    def test_no_dilution_of_morphology_under_growth(self):
        mesh = generate_icosphere(1.0, 3)
        params = pure_diffusion_params(kappa=0.2)
        state = make_state(mesh, np.ones(mesh.n_nodes), np.full(mesh.n_nodes, 0.5))
        cfg = SolverConfig(tau=1e-2, T=0.2, cg_tol=1e-12)
        state, _ = run(state, params, cfg)
        assert np.max(np.abs(state.eta - 1.0)) <= 1e-9
        assert np.max(state.eta) - np.min(state.eta) <= 1e-9

    @pytest.mark.parametrize("tau", [1e-2, 1.0, 100.0])
    def test_dirichlet_energy_decays_for_any_step_size(self, tau):
        mesh = generate_square(2.0, 10)
        params = pure_diffusion_params(kappa=0.0)
        rng = np.random.default_rng(8)
        eta = rng.uniform(-1.0, 1.0, mesh.n_nodes)
        state = make_state(mesh, eta, np.full(mesh.n_nodes, 0.5))
        K = assemble_stiffness(mesh)
        cfg = SolverConfig(tau=tau, T=tau, cg_tol=1e-12)
        energy = float(state.eta @ (K @ state.eta))
        for _ in range(5):
            state = step(state, params, cfg)
            next_energy = float(state.eta @ (K @ state.eta))
            assert next_energy <= energy * (1.0 + 1e-12)
            energy = next_energy


class TestRun:
    def setup_method(self):
        self.mesh = generate_square(2.0, 8)
        self.params = default_params(B=30.0, C=3.0, rho=2.0, kappa=0.0)
        fields = initial_condition(self.mesh, self.params, seed=1)
        self.state = make_state(self.mesh, fields.eta, fields.theta)

    def test_zero_horizon_returns_initial_state(self):
        final, series = run(self.state, self.params, SolverConfig(tau=0.1, T=0.0))
        assert final is self.state
        assert len(series.samples) == 0

    def test_sampling_stride(self):
        cfg = SolverConfig(tau=0.1, T=1.0)
        _, series = run(self.state, self.params, cfg, stride=3)
        assert [s.t for s in series.samples] == pytest.approx(
            [0.0, 0.3, 0.6, 0.9, 1.0], rel=1e-12
        )
        _, series_all = run(self.state, self.params, cfg, stride=1)
        assert len(series_all.samples) == 11

    def test_observers_called_at_samples(self):
        seen = []
        cfg = SolverConfig(tau=0.1, T=0.5)
        run(
            self.state,
            self.params,
            cfg,
            observers=[lambda s, m: seen.append((s.step_index, m.total()))],
            stride=2,
        )
        assert [k for k, _ in seen] == [0, 2, 4, 5]
        assert all(total > 0.0 for _, total in seen)

    def test_bad_stride_rejected(self):
        with pytest.raises(ValueError):
            run(self.state, self.params, SolverConfig(), stride=0)

    def test_frozen_surface_run_matches_stationary_solver(self):
        cfg = SolverConfig(tau=1e-2, T=0.25)
        final_a, series_a = run(self.state, self.params, cfg, stride=5)
        final_b, series_b = run_stationary(self.state, self.params, cfg, stride=5)
        assert np.array_equal(final_a.eta, final_b.eta)
        assert np.array_equal(final_a.theta, final_b.theta)
        assert len(series_a.samples) == len(series_b.samples)

    def test_stationary_solver_requires_frozen_surface(self):
        moving = default_params(B=30.0, C=3.0, kappa=0.2)
        with pytest.raises(ModeError):
            run_stationary(self.state, moving, SolverConfig())


class TestDegeneracyStop:
    def shrinking_sphere(self):
        mesh = generate_icosphere(1.0, 1)
        params = pure_diffusion_params(kappa=1.0)
        state = make_state(mesh, -np.ones(mesh.n_nodes), np.full(mesh.n_nodes, 0.5))
        threshold = 0.5 * float(triangle_areas(mesh).min())
        cfg = SolverConfig(tau=0.05, T=1.0, min_triangle_area=threshold)
        return state, params, cfg

    def test_step_raises_with_location(self):
        state, params, cfg = self.shrinking_sphere()
        for _ in range(5):
            state = step(state, params, cfg)
        with pytest.raises(DegeneracyStop) as exc:
            step(state, params, cfg)
        assert exc.value.step_index == 6
        assert exc.value.time == pytest.approx(0.30, rel=1e-12)
        # the input state survives a refused step
        assert np.all(np.isfinite(state.mesh.nodes))

    def test_run_stops_cleanly_and_keeps_last_valid_state(self):
        state, params, cfg = self.shrinking_sphere()
        final, series = run(state, params, cfg, stride=10)
        assert series.stopped
        assert final.step_index == 5
        assert final.t == pytest.approx(0.25, rel=1e-12)
        radii = np.linalg.norm(final.mesh.nodes, axis=1)
        assert np.max(np.abs(radii - 0.75)) <= 1e-2
        # the last valid state is always sampled
        assert series.samples[-1].t == pytest.approx(final.t, rel=1e-12)

    def test_angle_threshold_validation(self):
        cfg = SolverConfig(min_angle_deg=0.5)
        assert cfg.min_angle_deg == 0.5


@pytest.mark.slow
class TestLongLabyrinthRun:
    def test_flat_labyrinth_preset_reaches_final_time_at_default_resolution(self):
        """Regression target: the flat labyrinth experiment should reach its
        nominal final time T=12 at default resolution without tripping the
        degeneracy stop."""
        from esdib import load_config

        cfg = load_config(preset=1)
        mesh = generate_square(cfg.domain.size, cfg.domain.resolution)
        params = cfg.kinetics_params()
        fields = initial_condition(mesh, params, amplitude=cfg.amplitude,
                                   seed=cfg.seed)
        state = SimState(t=0.0, mesh=mesh, eta=fields.eta, theta=fields.theta)
        final, series = run(state, params, cfg.solver, stride=10)
        assert not series.stopped, series.stop_reason
        assert final.t == pytest.approx(12.0, rel=1e-9)
