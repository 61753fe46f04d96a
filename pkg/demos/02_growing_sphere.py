"""Pattern growth on an electrodeposited sphere.

The same kinetics as the flat labyrinth demo, but on a sphere whose surface
moves outward at speed kappa * eta: where the morphology field is positive
the deposit thickens and the mesh balloons locally.  The run records the
surface area history, fits its exponential growth rate, and writes a short
sequence of VTK snapshots for animation.

Output: demos/output/growing_sphere/  (diagnostics.csv, snapshots, final.vtk)
Runtime: a few seconds.
"""

import os

from esdib import (
    SimState,
    SolverConfig,
    area_growth_fit,
    default_params,
    export_mesh_snapshot,
    initial_condition,
    run,
)
from esdib.meshgen import generate_icosphere

out_dir = os.path.join(os.path.dirname(__file__), "output", "growing_sphere")
snap_dir = os.path.join(out_dir, "snapshots")
os.makedirs(snap_dir, exist_ok=True)

mesh = generate_icosphere(3.0, 4)
params = default_params(B=30.0, C=3.0, rho=2.0, kappa=0.2)
fields = initial_condition(mesh, params, seed=7)
state = SimState(t=0.0, mesh=mesh, eta=fields.eta, theta=fields.theta)

print(f"icosphere: {mesh.n_nodes} nodes, radius 3.0")


def snapshot(s, mass):
    if s.step_index % 100 == 0:
        export_mesh_snapshot(
            s, os.path.join(snap_dir, f"step_{s.step_index:06d}.vtk")
        )


print("growing to T = 5 (the degeneracy stop may end the run earlier) ...")
final, series = run(
    state, params, SolverConfig(tau=1e-2, T=5.0),
    observers=[snapshot], stride=10,
)
if series.stopped:
    print(f"stopped early: {series.stop_reason}")

areas = series.areas
print(f"surface area: {areas[0]:.2f} -> {areas[-1]:.2f} "
      f"({areas[-1] / areas[0]:.3f} x) at t = {final.t:.2f}")

# fit the established-growth window: the first unit of time is dominated by
# the onset transient while the pattern is still amplifying out of the noise
times = series.times
late = times >= 1.0
fit = area_growth_fit(times[late], areas[late])
print(f"exponential growth fit (t >= 1): rate {fit.rate:.4f} per unit time, "
      f"r^2 = {fit.r_squared:.4f}")

series.to_csv(os.path.join(out_dir, "diagnostics.csv"))
export_mesh_snapshot(final, os.path.join(out_dir, "final.vtk"))
print(f"artifacts in {out_dir}")
