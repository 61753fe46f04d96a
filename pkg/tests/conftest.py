import numpy as np
import pytest

from esdib import KineticsParams, SurfaceMesh, generate_square


def pure_diffusion_params(d: float = 20.0, kappa: float = 0.0) -> KineticsParams:
    """Parameters whose reaction terms vanish identically (f = g = 0)."""
    return KineticsParams(
        A1=0.0, A2=0.0, B=0.0, C=0.0, D=0.0, alpha=0.5, gamma=0.2,
        k2=2.5, k3=1.5, d=d, rho=1.0, kappa=kappa,
    )


@pytest.fixture
def bumpy_square() -> SurfaceMesh:
    """Small flat grid with the interior nodes jiggled out of plane."""
    flat = generate_square(2.0, 10)
    rng = np.random.default_rng(123)
    offset = 0.02 * rng.standard_normal(flat.nodes.shape)
    return SurfaceMesh(flat.nodes + offset, flat.triangles)
