"""Triangulated surfaces whose node positions move while connectivity stays fixed.

The central object is :class:`SurfaceMesh`: a triangle mesh validated once at
construction (index ranges, consistent winding, manifoldness, no zero-area
triangle) whose triangles and boundary flags never change afterwards.  Time
stepping only moves nodes, so :func:`displace_nodes` returns a new mesh that
shares connectivity with the old one and skips re-validation.

All geometric queries (areas, vertex normals, quality metrics) are vectorised
over triangles with numpy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGeometryError, MeshStructureError, NumericsError


class SurfaceMesh:
    """Oriented triangulated surface embedded in R^3, possibly with boundary.

    Parameters
    ----------
    nodes : array_like of shape (n_nodes, 3)
        Node coordinates, finite floats.
    triangles : array_like of shape (n_triangles, 3)
        Node indices of each triangle, wound counter-clockwise when seen
        from the outward side of the surface.

    Attributes
    ----------
    nodes : ndarray of shape (n_nodes, 3)
        Read-only coordinate array.
    triangles : ndarray of shape (n_triangles, 3)
        Read-only connectivity array.
    boundary_node : ndarray of bool, shape (n_nodes,)
        True for nodes touching an edge used by exactly one triangle.
        Derived from connectivity at construction; empty boundary on a
        closed surface.

    Raises
    ------
    MeshStructureError
        Index out of range, an edge traversed twice in the same direction
        (inconsistent winding or duplicated triangle), or an edge shared by
        more than two triangles (non-manifold).
    DegenerateGeometryError
        A triangle with zero area (including repeated vertices).
    NumericsError
        Non-finite coordinates.
    """

    __slots__ = ("nodes", "triangles", "boundary_node")

    def __init__(self, nodes, triangles):
        nodes = np.ascontiguousarray(nodes, dtype=np.float64)
        triangles = np.ascontiguousarray(triangles, dtype=np.int64)
        if nodes.ndim != 2 or nodes.shape[1] != 3:
            raise MeshStructureError(
                f"nodes must have shape (n, 3), got {nodes.shape}"
            )
        if triangles.ndim != 2 or triangles.shape[1] != 3:
            raise MeshStructureError(
                f"triangles must have shape (m, 3), got {triangles.shape}"
            )
        if not np.isfinite(nodes).all():
            bad = int(np.flatnonzero(~np.isfinite(nodes).all(axis=1))[0])
            raise NumericsError(f"node {bad} has non-finite coordinates")
        n = nodes.shape[0]
        if triangles.size and (triangles.min() < 0 or triangles.max() >= n):
            bad = int(
                np.flatnonzero(((triangles < 0) | (triangles >= n)).any(axis=1))[0]
            )
            raise MeshStructureError(
                f"triangle {bad} references a node outside [0, {n})"
            )

        areas = _triangle_areas(nodes, triangles)
        if areas.size and areas.min() <= 0.0:
            bad = int(np.argmin(areas))
            raise DegenerateGeometryError(f"triangle {bad} has zero area")

        self.nodes = nodes
        self.triangles = triangles
        self.boundary_node = _boundary_flags(triangles, n)
        for arr in (self.nodes, self.triangles, self.boundary_node):
            arr.setflags(write=False)

    @classmethod
    def _with_nodes(cls, mesh: "SurfaceMesh", nodes: np.ndarray) -> "SurfaceMesh":
        # fast path for node motion: connectivity already validated, share it
        out = cls.__new__(cls)
        nodes = np.ascontiguousarray(nodes, dtype=np.float64)
        nodes.setflags(write=False)
        out.nodes = nodes
        out.triangles = mesh.triangles
        out.boundary_node = mesh.boundary_node
        return out

    @property
    def n_nodes(self) -> int:
        return self.nodes.shape[0]

    @property
    def n_triangles(self) -> int:
        return self.triangles.shape[0]

    def is_closed(self) -> bool:
        """True when the surface has no boundary edge."""
        return not bool(self.boundary_node.any())

    def __repr__(self) -> str:
        kind = "closed" if self.is_closed() else "open"
        return (
            f"SurfaceMesh({self.n_nodes} nodes, {self.n_triangles} triangles, {kind})"
        )


def _boundary_flags(triangles: np.ndarray, n_nodes: int) -> np.ndarray:
    """Validate edge usage and return the boundary-node mask.

    Each directed edge may appear at most once (consistent winding), each
    undirected edge at most twice (manifold).  Undirected edges used once
    are boundary edges.
    """
    u = triangles[:, [0, 1, 2]].ravel().astype(np.int64)
    v = triangles[:, [1, 2, 0]].ravel().astype(np.int64)
    lo = np.minimum(u, v)
    hi = np.maximum(u, v)
    undirected = lo * n_nodes + hi
    codes, counts = np.unique(undirected, return_counts=True)
    if counts.size and counts.max() > 2:
        raise MeshStructureError("non-manifold edge shared by more than two triangles")
    directed = u * n_nodes + v
    _, dir_counts = np.unique(directed, return_counts=True)
    if dir_counts.size and dir_counts.max() > 1:
        raise MeshStructureError(
            "inconsistent winding: a directed edge is traversed more than once"
        )
    flags = np.zeros(n_nodes, dtype=bool)
    rim = codes[counts == 1]
    flags[rim // n_nodes] = True
    flags[rim % n_nodes] = True
    return flags


def _triangle_areas(nodes: np.ndarray, triangles: np.ndarray) -> np.ndarray:
    p = nodes[triangles]
    cross = np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0])
    return 0.5 * np.linalg.norm(cross, axis=1)


def triangle_areas(mesh: SurfaceMesh) -> np.ndarray:
    """Areas of all triangles, shape (n_triangles,)."""
    return _triangle_areas(mesh.nodes, mesh.triangles)


def triangle_area(mesh: SurfaceMesh, t: int) -> float:
    """Area of triangle ``t`` (half the cross-product norm of two edges)."""
    if not 0 <= t < mesh.n_triangles:
        raise IndexError(f"triangle index {t} out of range [0, {mesh.n_triangles})")
    p = mesh.nodes[mesh.triangles[t]]
    return float(0.5 * np.linalg.norm(np.cross(p[1] - p[0], p[2] - p[0])))


def surface_area(mesh: SurfaceMesh) -> float:
    """Total surface area, the sum of all triangle areas."""
    return float(triangle_areas(mesh).sum())


def compute_node_normals(mesh: SurfaceMesh) -> np.ndarray:
    """Outward unit normal at each node, area-weighted over incident triangles.

    The per-triangle contribution is the cross product of two edges (twice
    the area times the unit normal), so larger triangles weigh more.  The
    accumulated vector is normalised per node.

    Returns
    -------
    ndarray of shape (n_nodes, 3)
        Unit normals.

    Raises
    ------
    MeshStructureError
        A node belongs to no triangle (its normal is undefined).
    DegenerateGeometryError
        The accumulated vector of some node vanishes (the incident
        triangles fold over each other).
    """
    tri = mesh.triangles
    n = mesh.n_nodes
    counts = np.bincount(tri.ravel(), minlength=n)
    if counts.min(initial=1) == 0:
        bad = int(np.flatnonzero(counts == 0)[0])
        raise MeshStructureError(f"node {bad} belongs to no triangle")
    p = mesh.nodes[tri]
    cross = np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0])
    accum = np.empty((n, 3))
    idx = tri.ravel()
    for c in range(3):
        accum[:, c] = np.bincount(idx, weights=np.repeat(cross[:, c], 3), minlength=n)
    norms = np.linalg.norm(accum, axis=1)
    if norms.min() == 0.0:
        bad = int(np.flatnonzero(norms == 0.0)[0])
        raise DegenerateGeometryError(
            f"node {bad} has a vanishing normal (folded incident triangles)"
        )
    return accum / norms[:, None]


def displace_nodes(mesh: SurfaceMesh, displacement) -> SurfaceMesh:
    """New mesh with ``nodes + displacement``; connectivity and boundary flags shared.

    Parameters
    ----------
    displacement : array_like of shape (n_nodes, 3)
        Per-node displacement vectors, finite floats.

    Raises
    ------
    NumericsError
        Displacement contains a non-finite entry (names the first bad node).
    """
    disp = np.asarray(displacement, dtype=np.float64)
    if disp.shape != mesh.nodes.shape:
        raise MeshStructureError(
            f"displacement shape {disp.shape} does not match nodes {mesh.nodes.shape}"
        )
    finite = np.isfinite(disp).all(axis=1)
    if not finite.all():
        bad = int(np.flatnonzero(~finite)[0])
        raise NumericsError(f"non-finite displacement at node {bad}")
    return SurfaceMesh._with_nodes(mesh, mesh.nodes + disp)


@dataclass(frozen=True)
class MeshQuality:
    """Worst-case triangle shape metrics of a mesh.

    ``max_aspect_ratio`` is longest edge over twice the inradius, scaled so
    an equilateral triangle scores exactly 1.
    """

    min_angle_deg: float
    min_area: float
    max_aspect_ratio: float


def mesh_quality(mesh: SurfaceMesh) -> MeshQuality:
    """Minimum interior angle, minimum area, and maximum aspect ratio.

    Degenerate triangles report a zero angle and an infinite aspect ratio
    rather than NaN, so threshold checks stay well defined while the mesh
    collapses.
    """
    p = mesh.nodes[mesh.triangles]
    e0 = p[:, 2] - p[:, 1]
    e1 = p[:, 0] - p[:, 2]
    e2 = p[:, 1] - p[:, 0]
    l0 = np.linalg.norm(e0, axis=1)
    l1 = np.linalg.norm(e1, axis=1)
    l2 = np.linalg.norm(e2, axis=1)
    areas = 0.5 * np.linalg.norm(np.cross(e2, -e1), axis=1)

    lengths = np.stack([l0, l1, l2], axis=1)
    longest = lengths.max(axis=1)
    perimeter = lengths.sum(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        # angle at vertex i sits between the two edges that are not opposite it
        cos0 = -np.einsum("ij,ij->i", e1, e2) / (l1 * l2)
        cos1 = -np.einsum("ij,ij->i", e2, e0) / (l2 * l0)
        cos2 = -np.einsum("ij,ij->i", e0, e1) / (l0 * l1)
        cosines = np.clip(np.stack([cos0, cos1, cos2], axis=1), -1.0, 1.0)
        angles = np.degrees(np.arccos(cosines))
        aspect = longest * perimeter / (4.0 * np.sqrt(3.0) * areas)
    min_angles = np.where(areas > 0.0, angles.min(axis=1), 0.0)
    aspect = np.where(areas > 0.0, aspect, np.inf)
    return MeshQuality(
        min_angle_deg=float(min_angles.min(initial=np.inf)),
        min_area=float(areas.min(initial=np.inf)),
        max_aspect_ratio=float(aspect.max(initial=0.0)),
    )
