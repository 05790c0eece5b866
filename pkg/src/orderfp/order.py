"""Cone-induced partial orders, order intervals, and cone diagnostics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from orderfp.report import PropertyReport, Violation
from orderfp.space import SpaceSpec, as_vector, norm

# Absolute tolerance on cone boundary tests; boundary points arise from arithmetic.
MEMBERSHIP_TOL = 1e-12

ORTHANT = "orthant"
LORENTZ = "lorentz"


class UnsupportedConeOperation(ValueError):
    """Operation requires lattice structure the cone does not have."""


@dataclass(frozen=True)
class ConeSpec:
    """Closed convex pointed cone: the non-negative orthant or the Lorentz cone
    { (u, t) : t >= ||u||_2 }."""

    kind: str
    dim: int

    def __post_init__(self):
        if self.kind not in (ORTHANT, LORENTZ):
            raise ValueError(f"unknown cone kind {self.kind!r}")
        if self.dim < 1:
            raise ValueError(f"dim must be a positive integer, got {self.dim}")
        if self.kind == LORENTZ and self.dim < 2:
            raise ValueError("lorentz cone needs dim >= 2")


def contains(cone: ConeSpec, x, tol: float = MEMBERSHIP_TOL) -> bool:
    """Cone membership, tolerance-aware on the boundary."""
    return _member_raw(cone, as_vector(x, dim=cone.dim), tol)


def _member_raw(cone: ConeSpec, v: np.ndarray, tol: float) -> bool:
    # hot-loop path: assumes a validated 1-D float array
    if cone.kind == ORTHANT:
        return bool(np.all(v >= -tol))
    return float(v[-1]) >= float(np.linalg.norm(v[:-1])) - tol


def interior_contains(cone: ConeSpec, x, tol: float = MEMBERSHIP_TOL) -> bool:
    """Membership in the cone interior (strict inequalities beyond tol)."""
    v = as_vector(x, dim=cone.dim)
    if cone.kind == ORTHANT:
        return bool(np.all(v > tol))
    head = float(np.linalg.norm(v[:-1]))
    return v[-1] > head + tol


def _same_point(x: np.ndarray, y: np.ndarray, tol: float) -> bool:
    return float(np.max(np.abs(x - y))) <= tol


def leq(cone: ConeSpec, x, y, tol: float = MEMBERSHIP_TOL) -> bool:
    """x <= y iff y - x lies in the cone."""
    xv = as_vector(x, dim=cone.dim)
    yv = as_vector(y, dim=cone.dim)
    return contains(cone, yv - xv, tol=tol)


def geq(cone: ConeSpec, x, y, tol: float = MEMBERSHIP_TOL) -> bool:
    return leq(cone, y, x, tol=tol)


def lt(cone: ConeSpec, x, y, tol: float = MEMBERSHIP_TOL) -> bool:
    """Strict order: x <= y and the points differ (beyond tol)."""
    xv = as_vector(x, dim=cone.dim)
    yv = as_vector(y, dim=cone.dim)
    return leq(cone, xv, yv, tol=tol) and not _same_point(xv, yv, tol)


def ll(cone: ConeSpec, x, y, tol: float = MEMBERSHIP_TOL) -> bool:
    """Interior order: y - x lies in the cone interior."""
    xv = as_vector(x, dim=cone.dim)
    yv = as_vector(y, dim=cone.dim)
    return interior_contains(cone, yv - xv, tol=tol)


def comparable(cone: ConeSpec, x, y, tol: float = MEMBERSHIP_TOL) -> bool:
    return leq(cone, x, y, tol=tol) or leq(cone, y, x, tol=tol)


@dataclass(frozen=True)
class OrderInterval:
    """Order interval [lo, hi] = { z : lo <= z <= hi } under ``cone``."""

    lo: np.ndarray
    hi: np.ndarray
    cone: ConeSpec

    def __post_init__(self):
        object.__setattr__(self, "lo", as_vector(self.lo, dim=self.cone.dim))
        object.__setattr__(self, "hi", as_vector(self.hi, dim=self.cone.dim))
        if not leq(self.cone, self.lo, self.hi):
            raise ValueError("interval endpoints are not ordered: lo <= hi fails")


def interval_contains(interval: OrderInterval, cone: ConeSpec, z, tol: float = MEMBERSHIP_TOL) -> bool:
    """z lies in [lo, hi] iff lo <= z and z <= hi."""
    return leq(cone, interval.lo, z, tol=tol) and leq(cone, z, interval.hi, tol=tol)


def sup_pair(cone: ConeSpec, x, y) -> np.ndarray:
    """Least upper bound of {x, y}; componentwise max for the orthant.

    The Lorentz cone is not minihedral (pairs can have several incomparable
    minimal upper bounds), so it is rejected.
    """
    if cone.kind != ORTHANT:
        raise UnsupportedConeOperation(f"sup_pair needs a minihedral cone, not {cone.kind}")
    xv = as_vector(x, dim=cone.dim)
    yv = as_vector(y, dim=cone.dim)
    return np.maximum(xv, yv)


def inf_pair(cone: ConeSpec, x, y) -> np.ndarray:
    """Greatest lower bound of {x, y}; componentwise min for the orthant."""
    if cone.kind != ORTHANT:
        raise UnsupportedConeOperation(f"inf_pair needs a minihedral cone, not {cone.kind}")
    xv = as_vector(x, dim=cone.dim)
    yv = as_vector(y, dim=cone.dim)
    return np.minimum(xv, yv)


def sup_finite(cone: ConeSpec, points) -> np.ndarray:
    """Supremum of a finite set of points (orthant only: componentwise max)."""
    if cone.kind != ORTHANT:
        raise UnsupportedConeOperation(f"sup_finite needs a strongly minihedral cone, not {cone.kind}")
    arr = np.asarray([as_vector(q, dim=cone.dim) for q in points], dtype=float)
    if arr.size == 0:
        raise ValueError("supremum of an empty set")
    return arr.max(axis=0)


def project_to_cone(cone: ConeSpec, x) -> np.ndarray:
    """Euclidean projection onto the cone."""
    v = as_vector(x, dim=cone.dim)
    if cone.kind == ORTHANT:
        return np.maximum(v, 0.0)
    u, t = v[:-1], float(v[-1])
    nu = float(np.linalg.norm(u))
    if nu <= t:
        return v.copy()
    if nu <= -t:
        return np.zeros_like(v)
    scale = (nu + t) / 2.0
    out = np.concatenate([u * (scale / nu), [scale]])
    return out


def sample_cone_point(cone: ConeSpec, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Draw a point of the cone: a non-negative box draw for the orthant, a
    scaled-axis point with projected perturbation for the Lorentz cone."""
    if cone.kind == ORTHANT:
        return rng.uniform(0.0, scale, size=cone.dim)
    base = np.zeros(cone.dim)
    base[-1] = rng.uniform(0.0, scale)
    pert = rng.normal(0.0, scale / 3.0, size=cone.dim)
    return project_to_cone(cone, base + pert)


def sample_dominated_pair(
    cone: ConeSpec, rng: np.random.Generator, scale: float = 1.0
) -> tuple[np.ndarray, np.ndarray]:
    """Draw (x, y) with 0 <= x <= y: x from the cone, y = x + cone direction."""
    x = sample_cone_point(cone, rng, scale)
    d = sample_cone_point(cone, rng, scale)
    return x, x + d


def normality_constant_estimate(
    cone: ConeSpec, space: SpaceSpec, n_samples: int, seed: int = 0
) -> float:
    """Sampled max of ||x||/||y|| over pairs 0 <= x <= y; a lower bound on the
    normality constant of the cone."""
    if n_samples <= 0:
        raise ValueError(f"n_samples must be positive, got {n_samples}")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_samples):
        x, y = sample_dominated_pair(cone, rng)
        ny = norm(space, y)
        if ny == 0.0:
            continue
        worst = max(worst, norm(space, x) / ny)
    return worst


def is_norm_monotonic(
    cone: ConeSpec,
    space: SpaceSpec,
    n_samples: int,
    seed: int = 0,
    extra_pairs=None,
    tol: float = 1e-12,
) -> PropertyReport:
    """Sampled check that 0 <= x <= y implies ||x|| <= ||y||.

    ``extra_pairs`` lets callers inject specific (x, y) pairs (the harness
    self-test feeds a deliberate violation through here). Each violation is
    recorded with the witness pair.
    """
    if n_samples <= 0:
        raise ValueError(f"n_samples must be positive, got {n_samples}")
    rng = np.random.default_rng(seed)
    pairs = [sample_dominated_pair(cone, rng) for _ in range(n_samples)]
    if extra_pairs is not None:
        pairs.extend((as_vector(a, cone.dim), as_vector(b, cone.dim)) for a, b in extra_pairs)
    report = PropertyReport(name="norm_monotonic", samples=len(pairs))
    for x, y in pairs:
        nx, ny = norm(space, x), norm(space, y)
        if nx > ny + tol:
            report.violations.append(Violation(x=x, y=y, lhs=nx, rhs=ny))
    return report
