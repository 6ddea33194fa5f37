"""Cone-over-body correspondences: lifting exposing pairs one dimension up
and the generator-level polar construction.

A body pair (y, d) with <y, x> <= d on the body lifts to the cone functional
(-d, y), which vanishes exactly on the lifted face and is negative on every
other generator. The polar of the cone over a body is generated by
(-support(dir), dir) over directions plus the deep ray (-1, 0, ..., 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .construction import SHIFT
from .faces import (
    MARGIN_DELTAS,
    ExposingPair,
    ExposureReport,
    label_arrays,
    param_distances,
)
from .linalg import (
    DEFAULT_TOL,
    ConeModel,
    DimensionMismatchError,
    DomainError,
)


@dataclass(frozen=True)
class LiftedPair:
    """Cone functional (-d, y) built from a body exposing pair (y, d)."""

    vector: np.ndarray
    source: ExposingPair


def pair_for_scaled_body(pair):
    """Transfer a pair exposing a face of C to the matching face of
    C' = 2C + SHIFT: the normal is unchanged, the offset becomes
    2*d + <y, SHIFT>."""
    return ExposingPair(
        pair.normal.copy(),
        2.0 * pair.offset + float(pair.normal @ SHIFT),
        pair.provenance,
    )


def lift_pair(pair):
    """Lift a body exposing pair (y, d) to the cone functional (-d, y)."""
    return LiftedPair(
        vector=np.concatenate([[-pair.offset], pair.normal]),
        source=pair,
    )


def verify_cone_exposure(lifted, cone, face, tol=DEFAULT_TOL, deltas=MARGIN_DELTAS):
    """Check that a lifted pair exposes exactly the lifted face on the
    sampled cone: zero on generators over the face, strictly negative off
    it (margins graded by parameter distance), zero at the apex.

    The measured equality set must coincide with the generators whose
    parameters lie on the face, up to the tolerance floor: a generator at
    parameter distance below the smallest margin radius has a margin that
    may sit under eq_abs (margins vanish quadratically toward the face), so
    only generators beyond that radius can be asserted strictly off the
    hyperplane.
    """
    y = np.asarray(lifted.vector, dtype=float)
    g = cone.generators
    if g.shape[1] != y.size:
        raise DimensionMismatchError("lifted pair and cone dimensions differ")
    if not cone.labels:
        raise DomainError("cone generators carry no (curve, t) labels")

    values = g @ y
    dists = param_distances(face, *label_arrays(cone.labels))
    expected = dists <= 1e-9
    measured = np.abs(values) <= tol.eq_abs

    max_res = float(np.abs(values[expected]).max()) if expected.any() else 0.0
    apex_res = abs(float(np.zeros(y.size) @ y))

    margins = {}
    for delta in deltas:
        mask = dists >= delta
        margins[delta] = float((-values[mask]).min()) if mask.any() else math.inf

    on_face_ok = bool(measured[expected].all()) if expected.any() else True
    stray = measured & ~expected & (dists >= min(deltas))
    sets_match = on_face_ok and not bool(stray.any())
    ok = (
        sets_match
        and max_res <= tol.eq_abs
        and apex_res <= tol.eq_abs
        and all(m > 0.0 for m in margins.values())
    )
    return ExposureReport(
        face_label=f"lift:{face.label()}",
        max_onface_residual=max(max_res, apex_res),
        margins=margins,
        onface_count=int(expected.sum()),
        verdict="pass" if ok else "fail",
    )


def support_values(samples, directions):
    """Support function of the sampled body along each direction."""
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    directions = np.atleast_2d(np.asarray(directions, dtype=float))
    return (directions @ samples.T).max(axis=1)


def polar_generator_model(samples, directions, provenance="sampled polar cone"):
    """Generator representation of the polar of cone({1} x samples):
    one generator (-support(dir), dir) per direction, plus the deep ray
    (-1, 0, ..., 0)."""
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    directions = np.atleast_2d(np.asarray(directions, dtype=float))
    if directions.shape[1] != samples.shape[1]:
        raise DimensionMismatchError("directions and samples dimensions differ")
    sups = support_values(samples, directions)
    gens = np.hstack([-sups[:, None], directions])
    deep = np.zeros((1, samples.shape[1] + 1))
    deep[0, 0] = -1.0
    return ConeModel(np.vstack([gens, deep]), provenance=provenance)


@dataclass(frozen=True)
class PolarReport:
    n_directions: int
    min_support: float
    max_membership_residual: float
    min_sharpness_violation: float
    passed: bool


def polar_correspondence_check(samples, directions, interior_margin=1e-6, tol=DEFAULT_TOL):
    """Exercise the polar correspondence on a body with 0 in its interior.

    For each grid direction y with support s = sup <x, y> > 0, the point
    (-1, y/s) must have nonpositive inner product with every cone generator
    (1, x); inflating the direction by 1 + 10*eq_abs must produce a
    violation on some generator (sharpness).
    """
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    directions = np.atleast_2d(np.asarray(directions, dtype=float))
    sups = support_values(samples, directions)
    if float(sups.min()) < interior_margin:
        raise DomainError(
            f"body does not certify 0 in its interior: min support {sups.min():.3g} "
            f"< margin {interior_margin:.3g}"
        )
    # <(-1, y/s), (1, x)> = <y, x>/s - 1; max over x is 0 by construction of s
    vals = (directions @ samples.T) / sups[:, None] - 1.0
    membership_residual = float(vals.max(axis=1).max())
    inflate = 1.0 + 10.0 * tol.eq_abs
    violations = (inflate * (directions @ samples.T) / sups[:, None] - 1.0).max(axis=1)
    min_violation = float(violations.min())
    passed = membership_residual <= tol.eq_abs and min_violation > 0.0
    return PolarReport(
        n_directions=len(directions),
        min_support=float(sups.min()),
        max_membership_residual=membership_residual,
        min_sharpness_violation=min_violation,
        passed=passed,
    )


def apex_exposure_report(cone, tol=DEFAULT_TOL):
    """The functional x -> -x_0 is zero at the apex and strictly negative on
    every generator of a cone over a body on the x_0 = 1 slice."""
    first = cone.generators[:, 0]
    return {
        "max_generator_value": float((-first).max()),
        "apex_value": 0.0,
        "passed": bool((-first).max() < 0.0),
    }


def unit_circle_grid(n):
    """n evenly spaced unit directions in the plane."""
    ang = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
    return np.stack([np.cos(ang), np.sin(ang)], axis=1)


def fibonacci_sphere_grid(n):
    """n roughly even unit directions on the 2-sphere (golden-angle spiral)."""
    k = np.arange(n)
    z = 1.0 - 2.0 * (k + 0.5) / n
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    phi = k * math.pi * (3.0 - math.sqrt(5.0))
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def square_body(points_per_edge=16):
    """Boundary samples of the square [-1, 1]^2 (corners included)."""
    s = np.linspace(-1.0, 1.0, points_per_edge)
    ones = np.ones_like(s)
    return np.unique(
        np.vstack([
            np.stack([s, ones], axis=1),
            np.stack([s, -ones], axis=1),
            np.stack([ones, s], axis=1),
            np.stack([-ones, s], axis=1),
        ]),
        axis=0,
    )


def disc_body(n=256):
    """n samples of the unit circle (boundary of the unit disc)."""
    return unit_circle_grid(n)
