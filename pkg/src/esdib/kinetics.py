"""Morphochemical reaction kinetics and initial data.

The model couples two scalar fields on the growing deposit surface: eta, the
morphology variable that doubles as the local growth rate of the surface, and
theta, the fractional coverage of the adsorbed chemical species.  Source
terms:

    f(eta, theta) = A1 (1 - theta) eta - A2 eta^3 - B (theta - alpha)
    g(eta, theta) = C (1 + k2 eta)(1 - theta)[1 - gamma (1 - theta)]
                    - D (1 + k3 eta) theta (1 + gamma theta)

The pair (0, alpha) is a spatially uniform equilibrium provided the
desorption coefficient D is tied to the other constants by

    D = C (1 - alpha)(1 - gamma + gamma alpha) / (alpha (1 + gamma alpha)).

Simulations start from that equilibrium plus small uniform noise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mesh import SurfaceMesh


@dataclass(frozen=True)
class KineticsParams:
    """Reaction, diffusion, and surface-motion constants of one experiment.

    ``d`` is the diffusivity ratio of theta relative to eta, ``rho`` the
    scaling factor applied to both source terms, and ``kappa`` the
    proportionality between eta and the normal velocity of the surface
    (``kappa = 0`` freezes the surface).
    """

    A1: float
    A2: float
    B: float
    C: float
    D: float
    alpha: float
    gamma: float
    k2: float
    k3: float
    d: float
    rho: float
    kappa: float

    def __post_init__(self):
        values = [getattr(self, f) for f in self.__dataclass_fields__]
        if not all(np.isfinite(v) for v in values):
            raise ValueError("kinetics parameters must be finite")
        if self.d <= 0.0:
            raise ValueError(f"diffusivity ratio d must be positive, got {self.d}")
        if self.rho <= 0.0:
            raise ValueError(f"scaling rho must be positive, got {self.rho}")
        if self.kappa < 0.0:
            raise ValueError(f"growth coefficient kappa must be >= 0, got {self.kappa}")


def equilibrium_D(C: float, alpha: float, gamma: float) -> float:
    """Desorption coefficient making (0, alpha) a root of g."""
    denom = alpha * (1.0 + gamma * alpha)
    if denom == 0.0:
        raise ValueError("alpha (1 + gamma alpha) must be nonzero to balance g")
    return C * (1.0 - alpha) * (1.0 - gamma + gamma * alpha) / denom


def default_params(
    B: float, C: float, rho: float = 1.0, kappa: float = 0.2
) -> KineticsParams:
    """Parameter set with the standard fixed constants.

    Only B, C, and the run-level factors rho and kappa vary between
    experiments; D is derived from the equilibrium condition.
    """
    alpha, gamma = 0.5, 0.2
    return KineticsParams(
        A1=10.0,
        A2=1.0,
        B=B,
        C=C,
        D=equilibrium_D(C, alpha, gamma),
        alpha=alpha,
        gamma=gamma,
        k2=2.5,
        k3=1.5,
        d=20.0,
        rho=rho,
        kappa=kappa,
    )


def eval_f(eta, theta, p: KineticsParams):
    """Morphology source term, vectorised over nodal values."""
    eta = np.asarray(eta)
    theta = np.asarray(theta)
    return p.A1 * (1.0 - theta) * eta - p.A2 * eta**3 - p.B * (theta - p.alpha)


def eval_g(eta, theta, p: KineticsParams):
    """Coverage source term (adsorption minus desorption), vectorised."""
    eta = np.asarray(eta)
    theta = np.asarray(theta)
    adsorption = p.C * (1.0 + p.k2 * eta) * (1.0 - theta) * (
        1.0 - p.gamma * (1.0 - theta)
    )
    desorption = p.D * (1.0 + p.k3 * eta) * theta * (1.0 + p.gamma * theta)
    return adsorption - desorption


@dataclass
class FieldPair:
    """Nodal coefficient vectors of the two fields."""

    eta: np.ndarray
    theta: np.ndarray


def initial_condition(
    mesh: SurfaceMesh,
    params: KineticsParams,
    amplitude: float = 1e-4,
    seed: int = 0,
    shared_noise: bool = False,
) -> FieldPair:
    """Uniform equilibrium (0, alpha) perturbed by seeded uniform noise.

    Each field receives ``amplitude * r`` with ``r`` drawn i.i.d. from
    U(-1, 1) per node; ``shared_noise=True`` reuses the same draw for both
    fields.  Identical seeds reproduce identical fields bit for bit.
    """
    if amplitude < 0.0:
        raise ValueError(f"noise amplitude must be >= 0, got {amplitude}")
    rng = np.random.default_rng(seed)
    r_eta = rng.uniform(-1.0, 1.0, mesh.n_nodes)
    r_theta = r_eta if shared_noise else rng.uniform(-1.0, 1.0, mesh.n_nodes)
    return FieldPair(
        eta=amplitude * r_eta,
        theta=params.alpha + amplitude * r_theta,
    )
