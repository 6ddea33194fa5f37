"""Triangle meshes of the four-arc body and its scaled copy, as OBJ data.

The boundary decomposes into two planar sides (fanned from the common
endpoint), two ruled strips between paired arc parameters, the two endpoint
triangles, and the chord closing each planar side. Strip quads are split
along whichever diagonal keeps both triangle planes supporting, so the
emitted mesh is a convex-hull triangulation of its vertices.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .construction import SHIFT, curve_points, ruling_data, theta_grid
from .linalg import DomainError

BODY_NAMES = ("C", "Cprime")


@dataclass(frozen=True)
class Mesh:
    which: str
    vertices: np.ndarray   # (v, 3)
    triangles: np.ndarray  # (f, 3) 0-based vertex indices

    @property
    def counts(self):
        return len(self.vertices), len(self.triangles)


def _pick_diagonal(verts, quad, interior):
    """Split quad (a, b, c, d) (a-b and d-c are consecutive rulings) along
    the diagonal whose two triangle planes keep the opposite corner on the
    same side as the body interior."""
    a, b, c, d = quad

    def supports(tri, other):
        p = verts[list(tri)]
        n = np.cross(p[1] - p[0], p[2] - p[0])
        off = n @ p[0]
        s_other = n @ verts[other] - off
        s_int = n @ interior - off
        return s_other * s_int >= -1e-15

    if supports((a, b, c), d) and supports((a, c, d), b):
        return [(a, b, c), (a, c, d)]
    return [(a, b, d), (b, c, d)]


def build_mesh(which, samples_per_curve=64):
    """Triangulate the body boundary with n parameters per curve.

    Vertices: the shared endpoint plus n samples per curve (curves 1 and 4
    at a uniform positive grid, curves 3 and 2 at the partner parameters, so
    ruling endpoints are actual vertices). Faces: 2(n-1)+1 triangles per
    ruled strip, 2n-1 per planar side fan, plus the two endpoint triangles.
    """
    if which not in BODY_NAMES:
        raise DomainError(f"body must be one of {BODY_NAMES}")
    n = int(samples_per_curve)
    if n < 2:
        raise DomainError("mesh needs at least 2 samples per curve")

    thetas = theta_grid(n)
    partners = np.array([ruling_data(th).t for th in thetas])

    verts = [np.zeros(3)]
    idx = {}
    for cid, params in ((1, thetas), (2, partners), (3, partners), (4, thetas)):
        pts = curve_points(cid, params)
        idx[cid] = np.arange(len(verts), len(verts) + n)
        verts.extend(pts)
    verts = np.vstack(verts)
    if which == "Cprime":
        verts = 2.0 * verts + SHIFT

    interior = verts.mean(axis=0)
    tris = []

    # ruled strips: (curve 1, curve 3) and (curve 4, curve 2)
    for a_cid, b_cid in ((1, 3), (4, 2)):
        a, b = idx[a_cid], idx[b_cid]
        tris.append((0, a[0], b[0]))  # collapses onto the shared endpoint
        for j in range(n - 1):
            tris.extend(_pick_diagonal(verts, (a[j], b[j], b[j + 1], a[j + 1]), interior))

    # planar sides fanned from the shared endpoint; the middle fan triangle
    # is the chord between the two arc ends
    for a_cid, b_cid in ((1, 2), (3, 4)):
        boundary = list(idx[a_cid]) + list(idx[b_cid])[::-1]
        tris.extend((0, boundary[k], boundary[k + 1]) for k in range(len(boundary) - 1))

    # endpoint triangles
    tris.append((idx[1][-1], idx[2][-1], idx[3][-1]))
    tris.append((idx[2][-1], idx[3][-1], idx[4][-1]))

    return Mesh(which=which, vertices=verts, triangles=np.asarray(tris, dtype=int))


def write_obj(path, mesh):
    """ASCII OBJ, triangles only, 1-based indices."""
    lines = [f"o {mesh.which}"]
    lines.extend(f"v {x:.17g} {y:.17g} {z:.17g}" for x, y, z in mesh.vertices)
    lines.extend(f"f {a + 1} {b + 1} {c + 1}" for a, b, c in mesh.triangles)
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_obj(path):
    verts, tris = [], []
    with open(path, encoding="ascii") as fh:
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "v":
                verts.append([float(x) for x in parts[1:4]])
            elif parts[0] == "f":
                face = [int(tok.split("/")[0]) - 1 for tok in parts[1:]]
                if len(face) != 3:
                    raise DomainError("mesh must contain triangles only")
                tris.append(face)
    return np.asarray(verts, dtype=float), np.asarray(tris, dtype=int)


@dataclass(frozen=True)
class ConvexityReport:
    n_faces: int
    n_degenerate: int
    worst_violation: float
    passed: bool


def convexity_check(verts, tris, tol=1e-9):
    """Every face plane must have all mesh vertices on one side (orientation
    per face is free); the standard inscribed-hull sanity check."""
    worst = 0.0
    degenerate = 0
    for tri in tris:
        p = verts[tri]
        n = np.cross(p[1] - p[0], p[2] - p[0])
        norm = float(np.linalg.norm(n))
        if norm <= 1e-14:
            degenerate += 1
            continue
        n = n / norm
        s = verts @ n - float(n @ p[0])
        violation = min(float(s.max()), float(-s.min()))
        worst = max(worst, violation)
    return ConvexityReport(
        n_faces=len(tris),
        n_degenerate=degenerate,
        worst_violation=worst,
        passed=(worst <= tol and degenerate == 0),
    )
