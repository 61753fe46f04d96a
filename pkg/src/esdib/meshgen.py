"""Generators for the initial computational domains.

Two families cover the supported experiments: a flat square sheet in the
z = 0 plane (structured right-triangle grid, boundary on the perimeter) and
an icosphere (recursively subdivided icosahedron projected onto the sphere,
closed surface).  Both produce consistently wound meshes with outward
normals: +z for the sheet, radial for the sphere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .mesh import SurfaceMesh

#: target edge length used when a resolution is not given explicitly
_DEFAULT_EDGE = 0.2

# icosahedron with outward counter-clockwise faces; vertices on circumscribed
# sphere of radius sqrt(1 + phi^2) before normalisation
_PHI = (1.0 + math.sqrt(5.0)) / 2.0
_ICO_VERTS = np.array(
    [
        (-1.0, _PHI, 0.0),
        (1.0, _PHI, 0.0),
        (-1.0, -_PHI, 0.0),
        (1.0, -_PHI, 0.0),
        (0.0, -1.0, _PHI),
        (0.0, 1.0, _PHI),
        (0.0, -1.0, -_PHI),
        (0.0, 1.0, -_PHI),
        (_PHI, 0.0, -1.0),
        (_PHI, 0.0, 1.0),
        (-_PHI, 0.0, -1.0),
        (-_PHI, 0.0, 1.0),
    ]
)
_ICO_FACES = np.array(
    [
        (0, 11, 5),
        (0, 5, 1),
        (0, 1, 7),
        (0, 7, 10),
        (0, 10, 11),
        (1, 5, 9),
        (5, 11, 4),
        (11, 10, 2),
        (10, 7, 6),
        (7, 1, 8),
        (3, 9, 4),
        (3, 4, 2),
        (3, 2, 6),
        (3, 6, 8),
        (3, 8, 9),
        (4, 9, 5),
        (2, 4, 11),
        (6, 2, 10),
        (8, 6, 7),
        (9, 8, 1),
    ],
    dtype=np.int64,
)


@dataclass(frozen=True)
class DomainSpec:
    """Shape, size, and resolution of an initial domain.

    ``kind`` is ``"square"`` (``size`` = edge length, ``resolution`` = grid
    divisions per edge) or ``"sphere"`` (``size`` = radius, ``resolution`` =
    icosphere subdivision level).
    """

    kind: str
    size: float
    resolution: int

    def __post_init__(self):
        if self.kind not in ("square", "sphere"):
            raise ConfigError(f"unknown domain kind {self.kind!r}")
        if not (self.size > 0.0 and math.isfinite(self.size)):
            raise ConfigError(f"domain size must be positive, got {self.size}")
        if self.resolution < 1:
            raise ConfigError(
                f"domain resolution must be at least 1, got {self.resolution}"
            )


def default_resolution(kind: str, size: float) -> int:
    """Finest resolution whose edge length stays near ``_DEFAULT_EDGE``."""
    if kind == "square":
        return max(1, round(size / _DEFAULT_EDGE))
    if kind == "sphere":
        # unit icosphere edge at level l is about 1.0515 / 2**l
        base_edge = 1.0515 * size
        return max(1, math.ceil(math.log2(base_edge / _DEFAULT_EDGE)))
    raise ConfigError(f"unknown domain kind {kind!r}")


def build_domain(spec: DomainSpec) -> SurfaceMesh:
    """Construct the mesh described by ``spec``."""
    if spec.kind == "square":
        return generate_square(spec.size, spec.resolution)
    return generate_icosphere(spec.size, spec.resolution)


def generate_square(L: float, n: int) -> SurfaceMesh:
    """Structured triangulation of the square [0, L] x [0, L] at z = 0.

    Each of the n x n grid cells is split along its diagonal into two right
    triangles, giving (n+1)^2 nodes and 2 n^2 triangles wound so normals
    point along +z.  The 4 n perimeter nodes form the boundary.
    """
    if L <= 0.0:
        raise ConfigError(f"square edge must be positive, got {L}")
    if n < 1:
        raise ConfigError(f"grid divisions must be at least 1, got {n}")
    ticks = np.linspace(0.0, L, n + 1)
    nodes = np.column_stack(
        [
            np.tile(ticks, n + 1),
            np.repeat(ticks, n + 1),
            np.zeros((n + 1) * (n + 1)),
        ]
    )
    i = np.tile(np.arange(n), n)
    j = np.repeat(np.arange(n), n)
    v00 = j * (n + 1) + i
    v10 = v00 + 1
    v01 = v00 + (n + 1)
    v11 = v01 + 1
    lower = np.stack([v00, v10, v11], axis=1)
    upper = np.stack([v00, v11, v01], axis=1)
    triangles = np.concatenate([lower, upper], axis=0)
    return SurfaceMesh(nodes, triangles)


def generate_icosphere(R: float, level: int) -> SurfaceMesh:
    """Icosphere of radius ``R`` centred at the origin.

    Starts from the regular icosahedron and applies ``level`` rounds of
    midpoint subdivision, projecting every new vertex back onto the sphere.
    Vertex and face counts are 10 * 4**level + 2 and 20 * 4**level; shared
    edge midpoints are deduplicated so the surface stays closed.
    """
    if R <= 0.0:
        raise ConfigError(f"sphere radius must be positive, got {R}")
    if level < 0:
        raise ConfigError(f"subdivision level must be non-negative, got {level}")
    nodes = _ICO_VERTS * (R / np.linalg.norm(_ICO_VERTS[0]))
    faces = _ICO_FACES
    for _ in range(level):
        nodes, faces = _subdivide_on_sphere(nodes, faces, R)
    return SurfaceMesh(nodes, faces)


def _subdivide_on_sphere(nodes, faces, radius):
    """One round of midpoint subdivision with projection to the sphere."""
    n = nodes.shape[0]
    a, b, c = faces[:, 0], faces[:, 1], faces[:, 2]
    pairs = np.concatenate(
        [np.stack([a, b], 1), np.stack([b, c], 1), np.stack([c, a], 1)], axis=0
    )
    lo = pairs.min(axis=1).astype(np.int64)
    hi = pairs.max(axis=1).astype(np.int64)
    codes, inverse = np.unique(lo * n + hi, return_inverse=True)
    mids = 0.5 * (nodes[codes // n] + nodes[codes % n])
    mids *= radius / np.linalg.norm(mids, axis=1)[:, None]

    m = faces.shape[0]
    mid_ab = n + inverse[:m]
    mid_bc = n + inverse[m : 2 * m]
    mid_ca = n + inverse[2 * m :]
    new_faces = np.concatenate(
        [
            np.stack([a, mid_ab, mid_ca], 1),
            np.stack([b, mid_bc, mid_ab], 1),
            np.stack([c, mid_ca, mid_bc], 1),
            np.stack([mid_ab, mid_bc, mid_ca], 1),
        ],
        axis=0,
    )
    return np.vstack([nodes, mids]), new_faces
