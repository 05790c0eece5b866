"""Declarative self-maps on cone/interval/box domains with sampled verifiers.

A mapping is an operation (affine, truncation, translation, box projection,
composition, or a table over a lattice) plus the domain it maps into itself.
Every mapping-class predicate here is a sampled verifier that returns a
``PropertyReport`` with recomputable witnesses; exhaustive checking is only
done for lattice maps, where the pair set is finite.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from orderfp.order import (
    ConeSpec,
    comparable,
    leq,
    sample_cone_point,
    MEMBERSHIP_TOL,
    _member_raw,
)
from orderfp.report import PropertyReport, Violation
from orderfp.space import SpaceSpec, as_vector, norm


class DomainError(ValueError):
    """Point lies outside a mapping's declared domain, or the map escapes it."""


class IncomparableError(ValueError):
    """Arguments are not comparable under the cone order."""


class NotFixedPointError(ValueError):
    """A point supplied as a fixed point has a large residual."""


# Inequality verifiers allow this much slack (absolute plus relative on the
# right-hand side); fixed-point residuals are accepted up to FIXED_POINT_TOL.
INEQ_ATOL = 1e-9
INEQ_RTOL = 1e-9
FIXED_POINT_TOL = 1e-8


def _slack(rhs: float) -> float:
    return INEQ_ATOL + INEQ_RTOL * abs(rhs)


# ---------------------------------------------------------------------------
# map operations


@dataclass
class AffineMap:
    """x -> matrix @ x + offset."""

    matrix: np.ndarray
    offset: np.ndarray

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=float)
        self.offset = as_vector(self.offset)
        if self.matrix.shape != (self.offset.size, self.offset.size):
            raise ValueError(
                f"matrix shape {self.matrix.shape} does not match offset dim {self.offset.size}"
            )

    @property
    def dim(self) -> int:
        return self.offset.size

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        return self.matrix @ x + self.offset


@dataclass
class TruncationMap:
    """x -> componentwise min(x, cap)."""

    cap: np.ndarray

    def __post_init__(self):
        self.cap = as_vector(self.cap)

    @property
    def dim(self) -> int:
        return self.cap.size

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        return np.minimum(x, self.cap)


@dataclass
class TranslationMap:
    """x -> x + shift."""

    shift: np.ndarray

    def __post_init__(self):
        self.shift = as_vector(self.shift)

    @property
    def dim(self) -> int:
        return self.shift.size

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        return x + self.shift


@dataclass
class BoxProjectionMap:
    """x -> componentwise clip of x into [lo, hi]."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        self.lo = as_vector(self.lo)
        self.hi = as_vector(self.hi, dim=self.lo.size)
        if np.any(self.hi < self.lo):
            raise ValueError("box projection bounds are not ordered")

    @property
    def dim(self) -> int:
        return self.lo.size

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        return np.clip(x, self.lo, self.hi)


@dataclass
class CompositionMap:
    """Stages applied in order: stages[0] first."""

    stages: list

    def __post_init__(self):
        if not self.stages:
            raise ValueError("composition needs at least one stage")
        dims = {s.dim for s in self.stages}
        if len(dims) != 1:
            raise ValueError(f"composition stages disagree on dimension: {dims}")

    @property
    def dim(self) -> int:
        return self.stages[0].dim

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        for stage in self.stages:
            x = stage.evaluate(x)
        return x


@dataclass
class GridMap:
    """Map defined by a value table over the lattice origin + step * index.

    ``values`` has shape lattice_shape + (dim,). Arguments must sit on the
    lattice (within ``snap_tol``); images must be lattice points too, so the
    map is exhaustively checkable.
    """

    origin: np.ndarray
    step: float
    values: np.ndarray
    snap_tol: float = 1e-9

    def __post_init__(self):
        self.origin = as_vector(self.origin)
        self.values = np.asarray(self.values, dtype=float)
        if self.step <= 0:
            raise ValueError(f"lattice step must be positive, got {self.step}")
        if self.values.ndim != self.origin.size + 1 or self.values.shape[-1] != self.origin.size:
            raise ValueError(
                f"values shape {self.values.shape} does not match a lattice over dim {self.origin.size}"
            )

    @property
    def dim(self) -> int:
        return self.origin.size

    @property
    def lattice_shape(self) -> tuple[int, ...]:
        return self.values.shape[:-1]

    def index_of(self, x: np.ndarray) -> tuple[int, ...]:
        idx = np.rint((x - self.origin) / self.step).astype(int)
        snapped = self.origin + idx * self.step
        if np.max(np.abs(x - snapped)) > self.snap_tol:
            raise DomainError(f"point {x} is not on the lattice (step {self.step})")
        if np.any(idx < 0) or np.any(idx >= np.array(self.lattice_shape)):
            raise DomainError(f"point {x} lies outside the lattice box")
        return tuple(idx)

    def evaluate(self, x: np.ndarray) -> np.ndarray:
        return self.values[self.index_of(x)].copy()

    def lattice_points(self):
        for idx in itertools.product(*(range(n) for n in self.lattice_shape)):
            yield self.origin + self.step * np.asarray(idx, dtype=float)


# ---------------------------------------------------------------------------
# domains and mapping specs

DOMAIN_CONE = "cone"
DOMAIN_INTERVAL = "interval"
DOMAIN_BOX = "box"


@dataclass(frozen=True)
class Domain:
    """Closed convex domain K: the whole cone, an order interval under the
    cone, or a coordinate box."""

    kind: str
    cone: ConeSpec
    lo: np.ndarray | None = None
    hi: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in (DOMAIN_CONE, DOMAIN_INTERVAL, DOMAIN_BOX):
            raise ValueError(f"unknown domain kind {self.kind!r}")
        if self.kind != DOMAIN_CONE:
            if self.lo is None or self.hi is None:
                raise ValueError(f"{self.kind} domain needs lo and hi bounds")
            object.__setattr__(self, "lo", as_vector(self.lo, dim=self.cone.dim))
            object.__setattr__(self, "hi", as_vector(self.hi, dim=self.cone.dim))

    @property
    def dim(self) -> int:
        return self.cone.dim


def domain_contains(domain: Domain, x, tol: float = MEMBERSHIP_TOL) -> bool:
    return _domain_contains_raw(domain, as_vector(x, dim=domain.dim), tol)


def _domain_contains_raw(domain: Domain, v: np.ndarray, tol: float) -> bool:
    # hot-loop path: assumes a validated 1-D float array
    if domain.kind == DOMAIN_CONE:
        return _member_raw(domain.cone, v, tol)
    if domain.kind == DOMAIN_INTERVAL:
        return _member_raw(domain.cone, v - domain.lo, tol) and _member_raw(
            domain.cone, domain.hi - v, tol
        )
    return bool(np.all(v >= domain.lo - tol) and np.all(v <= domain.hi + tol))


@dataclass
class MappingSpec:
    """An operation together with the domain it is declared to map into itself."""

    op: object
    domain: Domain

    def __post_init__(self):
        if self.op.dim != self.domain.dim:
            raise ValueError(
                f"operation dim {self.op.dim} does not match domain dim {self.domain.dim}"
            )

    @property
    def dim(self) -> int:
        return self.domain.dim


def apply_map(spec: MappingSpec, x, tol: float = MEMBERSHIP_TOL) -> np.ndarray:
    """Evaluate the map at ``x``; raises ``DomainError`` off the domain."""
    v = as_vector(x, dim=spec.dim)
    if not domain_contains(spec.domain, v, tol=tol):
        raise DomainError(f"argument {v} lies outside the declared domain")
    return spec.op.evaluate(v)


def validate_self_map(spec: MappingSpec, n_samples: int = 64, seed: int = 0) -> None:
    """Reject specs whose operation escapes the declared domain on samples."""
    rng = np.random.default_rng(seed)
    for _ in range(n_samples):
        x = sample_domain_point(spec, rng)
        y = spec.op.evaluate(x)
        if not domain_contains(spec.domain, y, tol=1e-9):
            raise DomainError(
                f"not a self-map: image {y} of sample {x} escapes the domain"
            )


def make_mapping(op, domain: Domain, n_check_samples: int = 64, seed: int = 0) -> MappingSpec:
    """Construct a MappingSpec and verify the self-map property on samples."""
    spec = MappingSpec(op=op, domain=domain)
    validate_self_map(spec, n_samples=n_check_samples, seed=seed)
    return spec


# ---------------------------------------------------------------------------
# domain samplers


@dataclass(frozen=True)
class SamplerConfig:
    """Sampling policy for the verifiers; identical seeds reproduce reports."""

    n_samples: int = 200
    seed: int = 0
    scale: float = 1.0
    max_tries: int = 10_000


def sample_domain_point(spec: MappingSpec, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Draw a point of the declared domain (a lattice point for grid maps)."""
    domain = spec.domain
    if isinstance(spec.op, GridMap):
        idx = tuple(rng.integers(0, n) for n in spec.op.lattice_shape)
        return spec.op.origin + spec.op.step * np.asarray(idx, dtype=float)
    if domain.kind == DOMAIN_CONE:
        return sample_cone_point(domain.cone, rng, scale)
    if domain.kind == DOMAIN_BOX or domain.cone.kind == "orthant":
        u = rng.uniform(0.0, 1.0, size=domain.dim)
        return domain.lo + u * (domain.hi - domain.lo)
    # lorentz order interval: stay on the segment, then perturb by rejection
    t = rng.uniform(0.0, 1.0)
    base = domain.lo + t * (domain.hi - domain.lo)
    for shrink in range(8):
        pert = rng.normal(0.0, scale * 0.5 ** shrink, size=domain.dim)
        cand = base + pert
        if domain_contains(domain, cand):
            return cand
    return base


def sample_comparable_pair(
    spec: MappingSpec, rng: np.random.Generator, scale: float = 1.0, max_tries: int = 10_000
) -> tuple[np.ndarray, np.ndarray]:
    """Draw (x, y) in the domain with x <= y under the domain cone.

    Uniform independent draws are almost never comparable, so pairs are built
    as x plus a cone direction, shrinking the direction until the pair stays
    inside the domain.
    """
    domain = spec.domain
    cone = domain.cone
    if isinstance(spec.op, GridMap) and cone.kind == "orthant":
        shape = spec.op.lattice_shape
        a = np.asarray([rng.integers(0, n) for n in shape])
        b = np.asarray([rng.integers(0, n) for n in shape])
        lo_idx, hi_idx = np.minimum(a, b), np.maximum(a, b)
        return (
            spec.op.origin + spec.op.step * lo_idx.astype(float),
            spec.op.origin + spec.op.step * hi_idx.astype(float),
        )
    if domain.kind in (DOMAIN_INTERVAL, DOMAIN_BOX) and cone.kind == "orthant":
        u = rng.uniform(0.0, 1.0, size=domain.dim)
        x = domain.lo + u * (domain.hi - domain.lo)
        v = rng.uniform(0.0, 1.0, size=domain.dim)
        return x, x + v * (domain.hi - x)
    for attempt in range(max_tries):
        x = sample_domain_point(spec, rng, scale)
        d = sample_cone_point(cone, rng, scale * 0.5 ** (attempt % 8))
        y = x + d
        if domain_contains(domain, y):
            return x, y
    raise RuntimeError("could not sample a comparable pair inside the domain")


# ---------------------------------------------------------------------------
# property verifiers


def _cone_margin(cone: ConeSpec, v: np.ndarray) -> float:
    """Nonnegative iff v is in the cone (up to tolerance)."""
    if cone.kind == "orthant":
        return float(np.min(v))
    return float(v[-1] - np.linalg.norm(v[:-1]))


def is_monotone(spec: MappingSpec, cone: ConeSpec, cfg: SamplerConfig | None = None) -> PropertyReport:
    """Sampled check that x <= y implies T x <= T y."""
    cfg = cfg or SamplerConfig()
    rng = np.random.default_rng(cfg.seed)
    report = PropertyReport(name="monotone", samples=cfg.n_samples)
    for _ in range(cfg.n_samples):
        x, y = sample_comparable_pair(spec, rng, cfg.scale, cfg.max_tries)
        margin = _cone_margin(cone, spec.op.evaluate(y) - spec.op.evaluate(x))
        if margin < -MEMBERSHIP_TOL:
            report.violations.append(Violation(x=x, y=y, lhs=-margin, rhs=MEMBERSHIP_TOL))
    return report


def is_monotone_nonexpansive(
    spec: MappingSpec, cone: ConeSpec, space: SpaceSpec, cfg: SamplerConfig | None = None
) -> PropertyReport:
    """Sampled check of monotonicity plus ||Tx - Ty|| <= ||x - y|| on
    comparable pairs."""
    cfg = cfg or SamplerConfig()
    rng = np.random.default_rng(cfg.seed)
    report = PropertyReport(name="monotone_nonexpansive", samples=cfg.n_samples)
    for _ in range(cfg.n_samples):
        x, y = sample_comparable_pair(spec, rng, cfg.scale, cfg.max_tries)
        tx, ty = spec.op.evaluate(x), spec.op.evaluate(y)
        margin = _cone_margin(cone, ty - tx)
        if margin < -MEMBERSHIP_TOL:
            report.violations.append(Violation(x=x, y=y, lhs=-margin, rhs=MEMBERSHIP_TOL))
            continue
        lhs, rhs = norm(space, tx - ty), norm(space, x - y)
        if lhs > rhs + _slack(rhs):
            report.violations.append(Violation(x=x, y=y, lhs=lhs, rhs=rhs))
    return report


def _alpha_rhs(space: SpaceSpec, alpha: float, x, y, tx, ty) -> float:
    return (
        alpha * norm(space, tx - y) ** 2
        + alpha * norm(space, ty - x) ** 2
        + (1.0 - 2.0 * alpha) * norm(space, x - y) ** 2
    )


def is_alpha_nonexpansive(
    spec: MappingSpec,
    cone: ConeSpec,
    space: SpaceSpec,
    alpha: float,
    cfg: SamplerConfig | None = None,
    exhaustive: bool = False,
) -> PropertyReport:
    """Sampled check of the alpha-weighted squared-distance inequality
    (monotonicity included) on comparable pairs; any alpha < 1 is accepted.

    With ``exhaustive=True`` and a lattice map, every comparable lattice pair
    is checked instead of sampling.
    """
    if alpha >= 1.0:
        raise ValueError(f"alpha must be < 1, got {alpha}")
    cfg = cfg or SamplerConfig()
    report = PropertyReport(name="alpha_nonexpansive", samples=0, alpha=alpha)
    if exhaustive:
        if not isinstance(spec.op, GridMap):
            raise ValueError("exhaustive checking is only available for lattice maps")
        pairs = [
            (a, b)
            for a, b in itertools.combinations_with_replacement(list(spec.op.lattice_points()), 2)
            if comparable(cone, a, b)
        ]
        pairs = [(a, b) if leq(cone, a, b) else (b, a) for a, b in pairs]
    else:
        rng = np.random.default_rng(cfg.seed)
        pairs = [
            sample_comparable_pair(spec, rng, cfg.scale, cfg.max_tries)
            for _ in range(cfg.n_samples)
        ]
    report.samples = len(pairs)
    for x, y in pairs:
        tx, ty = spec.op.evaluate(x), spec.op.evaluate(y)
        margin = _cone_margin(cone, ty - tx)
        if margin < -MEMBERSHIP_TOL:
            report.violations.append(Violation(x=x, y=y, lhs=-margin, rhs=MEMBERSHIP_TOL))
            continue
        lhs = norm(space, tx - ty) ** 2
        rhs = _alpha_rhs(space, alpha, x, y, tx, ty)
        if lhs > rhs + _slack(rhs):
            report.violations.append(Violation(x=x, y=y, lhs=lhs, rhs=rhs))
    return report


def is_quasi_nonexpansive(
    spec: MappingSpec,
    cone: ConeSpec,
    space: SpaceSpec,
    fixed_points,
    cfg: SamplerConfig | None = None,
) -> PropertyReport:
    """Sampled check that ||Tx - p|| <= ||x - p|| for supplied fixed points p
    and x comparable with p.

    A supplied point with residual above ``FIXED_POINT_TOL`` raises
    ``NotFixedPointError`` (a usage error, not a property failure).
    """
    fixed_points = [as_vector(p, dim=spec.dim) for p in fixed_points]
    if not fixed_points:
        raise NotFixedPointError("no fixed points supplied")
    for p in fixed_points:
        res = norm(space, spec.op.evaluate(p) - p)
        if res > FIXED_POINT_TOL:
            raise NotFixedPointError(f"supplied point {p} has residual {res:.3e}")
    cfg = cfg or SamplerConfig()
    rng = np.random.default_rng(cfg.seed)
    report = PropertyReport(name="quasi_nonexpansive", samples=0)
    checked = 0
    for k in range(cfg.n_samples):
        p = fixed_points[k % len(fixed_points)]
        if isinstance(spec.op, GridMap):
            # comparable lattice point: join/meet of a random index with p's
            idx_p = np.asarray(spec.op.index_of(p))
            idx = np.asarray([rng.integers(0, n) for n in spec.op.lattice_shape])
            idx = np.maximum(idx, idx_p) if k % 2 == 0 else np.minimum(idx, idx_p)
            x = spec.op.origin + spec.op.step * idx.astype(float)
        else:
            d = sample_cone_point(spec.domain.cone, rng, cfg.scale)
            x = p + d if k % 2 == 0 else p - d
        if not domain_contains(spec.domain, x):
            continue
        checked += 1
        lhs = norm(space, spec.op.evaluate(x) - p)
        rhs = norm(space, x - p)
        if lhs > rhs + _slack(rhs):
            report.violations.append(Violation(x=x, y=p, lhs=lhs, rhs=rhs))
    report.samples = checked
    return report


def check_displacement_bound(
    spec: MappingSpec, cone: ConeSpec, space: SpaceSpec, alpha: float, x, y
) -> bool:
    """Check the displacement-corrected expansion bound on a comparable pair:

        ||Tx-Ty||^2 <= ||x-y||^2 + 2a/(1-a) ||Tx-x||^2
                       + 2|a|/(1-a) ||Tx-x|| (||x-y|| + ||Tx-Ty||)

    Incomparable arguments raise ``IncomparableError``.
    """
    if alpha >= 1.0:
        raise ValueError(f"alpha must be < 1, got {alpha}")
    xv = as_vector(x, dim=spec.dim)
    yv = as_vector(y, dim=spec.dim)
    if not comparable(cone, xv, yv):
        raise IncomparableError(f"pair is incomparable under the {cone.kind} cone")
    tx, ty = spec.op.evaluate(xv), spec.op.evaluate(yv)
    d_im = norm(space, tx - ty)
    d_arg = norm(space, xv - yv)
    disp = norm(space, tx - xv)
    rhs = (
        d_arg ** 2
        + (2.0 * alpha / (1.0 - alpha)) * disp ** 2
        + (2.0 * abs(alpha) / (1.0 - alpha)) * disp * (d_arg + d_im)
    )
    return d_im ** 2 <= rhs + _slack(rhs)


def _polar_inner(space: SpaceSpec, u: np.ndarray, v: np.ndarray) -> float:
    """Inner product recovered from the norm by polarization (p = 2 only)."""
    return 0.25 * (norm(space, u + v) ** 2 - norm(space, u - v) ** 2)


def classify_hilbert_classes(
    spec: MappingSpec,
    space: SpaceSpec,
    cfg: SamplerConfig | None = None,
    ab: tuple[float, float] | None = None,
) -> dict[str, PropertyReport]:
    """Check the inner-product mapping classes on sampled (unordered) pairs.

    Covers the nonspreading, hybrid, and TJ inequalities, plus the
    (a, b)-monotone inequality when ``ab`` is supplied with a > 1/2, b < a.
    Requires p = 2, where polarization recovers the inner product.
    """
    if space.p != 2.0:
        raise ValueError(f"hilbert-class checks need p=2, got p={space.p}")
    if ab is not None:
        a, b = ab
        if not (a > 0.5 and b < a):
            raise ValueError(f"(a, b) must satisfy a > 1/2 and b < a, got {ab}")
    cfg = cfg or SamplerConfig()
    rng = np.random.default_rng(cfg.seed)
    names = ["nonspreading", "hybrid", "tj"] + (["ab_monotone"] if ab is not None else [])
    reports = {n: PropertyReport(name=n, samples=cfg.n_samples) for n in names}
    for _ in range(cfg.n_samples):
        x = sample_domain_point(spec, rng, cfg.scale)
        y = sample_domain_point(spec, rng, cfg.scale)
        tx, ty = spec.op.evaluate(x), spec.op.evaluate(y)
        d_im2 = norm(space, tx - ty) ** 2
        d2 = norm(space, x - y) ** 2
        cross_xy = norm(space, tx - y) ** 2
        cross_yx = norm(space, ty - x) ** 2

        rhs = cross_xy + cross_yx
        if 2.0 * d_im2 > rhs + _slack(rhs):
            reports["nonspreading"].violations.append(Violation(x, y, 2.0 * d_im2, rhs))
        rhs = d2 + _polar_inner(space, x - tx, y - ty)
        if d_im2 > rhs + _slack(rhs):
            reports["hybrid"].violations.append(Violation(x, y, d_im2, rhs))
        rhs = d2 + cross_xy
        if 2.0 * d_im2 > rhs + _slack(rhs):
            reports["tj"].violations.append(Violation(x, y, 2.0 * d_im2, rhs))
        if ab is not None:
            a, b = ab
            lhs = _polar_inner(space, x - y, tx - ty)
            bound = (
                a * d_im2
                + (1.0 - a) * d2
                - b * norm(space, x - tx) ** 2
                - b * norm(space, y - ty) ** 2
            )
            if lhs < bound - _slack(bound):
                reports["ab_monotone"].violations.append(Violation(x, y, lhs, bound))
    return reports


# ---------------------------------------------------------------------------
# independent fixed-point search


@dataclass(frozen=True)
class GridSearchConfig:
    """Bounded lattice scan for fixed points; both bounds must be finite."""

    lo: np.ndarray
    hi: np.ndarray
    points_per_axis: int = 11
    accept_tol: float = 1e-8
    refine_iters: int = 200

    def __post_init__(self):
        object.__setattr__(self, "lo", as_vector(self.lo))
        object.__setattr__(self, "hi", as_vector(self.hi, dim=np.asarray(self.lo).size))
        if not (np.all(np.isfinite(self.lo)) and np.all(np.isfinite(self.hi))):
            raise ValueError("fixed-point search region must be bounded")


def as_affine(op) -> tuple[np.ndarray, np.ndarray] | None:
    """(matrix, offset) view of operations that are affine, else None."""
    if isinstance(op, AffineMap):
        return op.matrix, op.offset
    if isinstance(op, TranslationMap):
        return np.eye(op.dim), op.shift
    if isinstance(op, CompositionMap):
        pair = as_affine(op.stages[0])
        if pair is None:
            return None
        matrix, offset = pair
        for stage in op.stages[1:]:
            nxt = as_affine(stage)
            if nxt is None:
                return None
            m2, b2 = nxt
            matrix, offset = m2 @ matrix, m2 @ offset + b2
        return matrix, offset
    return None


def _affine_fixed_points(
    spec: MappingSpec, matrix: np.ndarray, offset: np.ndarray, residual_tol: float
) -> list[np.ndarray] | None:
    """Exact linear-algebra route for affine operations.

    Returns a list (possibly empty, meaning certifiably no fixed point
    anywhere) or None when the linear system is degenerate with solutions off
    the minimum-norm one, in which case the caller falls back to the grid.
    """
    eye = np.eye(spec.dim)
    spectral_radius = float(np.max(np.abs(np.linalg.eigvals(matrix))))
    system = eye - matrix
    if spectral_radius < 1.0 - 1e-9:
        z = np.linalg.solve(system, offset)
        return [z] if domain_contains(spec.domain, z, tol=1e-9) else []
    z, *_ = np.linalg.lstsq(system, offset, rcond=None)
    gap = float(np.linalg.norm(system @ z - offset))
    if gap > residual_tol * (1.0 + float(np.linalg.norm(offset))):
        return []  # inconsistent system: no fixed point exists at all
    if domain_contains(spec.domain, z, tol=1e-9):
        return [z]
    return None


def fixed_point_oracle(
    spec: MappingSpec,
    grid_cfg: GridSearchConfig | None = None,
    residual_tol: float = FIXED_POINT_TOL,
) -> list[np.ndarray]:
    """Independent search for fixed points inside the domain.

    Affine operations are resolved by linear algebra (exact solve when the
    spectral radius is below one). Everything else scans the bounded lattice
    of ``grid_cfg`` and refines candidates by local iteration while the
    residual shrinks. Duplicates within 1e-8 are merged.
    """
    found: list[np.ndarray] = []
    affine_view = as_affine(spec.op)
    if affine_view is not None:
        direct = _affine_fixed_points(spec, *affine_view, residual_tol)
        if direct is not None:
            return direct
    if isinstance(spec.op, GridMap):
        candidates = [
            x for x in spec.op.lattice_points() if domain_contains(spec.domain, x)
        ]
    else:
        if grid_cfg is None:
            raise ValueError("non-affine fixed-point search needs a bounded GridSearchConfig")
        axes = [
            np.linspace(grid_cfg.lo[i], grid_cfg.hi[i], grid_cfg.points_per_axis)
            for i in range(spec.dim)
        ]
        candidates = [
            np.asarray(pt, dtype=float)
            for pt in itertools.product(*axes)
            if domain_contains(spec.domain, np.asarray(pt, dtype=float))
        ]
    accept = grid_cfg.accept_tol if grid_cfg is not None else residual_tol
    refine_iters = grid_cfg.refine_iters if grid_cfg is not None else 200
    for x in candidates:
        res = float(np.linalg.norm(spec.op.evaluate(x) - x))
        if res > accept:
            continue
        z, z_res = x, res
        for _ in range(refine_iters):
            if z_res <= residual_tol:
                break
            nxt = spec.op.evaluate(z)
            if not domain_contains(spec.domain, nxt, tol=1e-9):
                break
            nxt_res = float(np.linalg.norm(spec.op.evaluate(nxt) - nxt))
            if nxt_res >= z_res:
                break
            z, z_res = nxt, nxt_res
        if z_res <= residual_tol:
            if not any(np.max(np.abs(z - w)) <= 1e-8 for w in found):
                found.append(z)
    return found


# ---------------------------------------------------------------------------
# JSON round trip

_VARIANT_TAGS = {
    AffineMap: "affine",
    TruncationMap: "truncation",
    TranslationMap: "translation",
    BoxProjectionMap: "box_projection",
    CompositionMap: "composition",
    GridMap: "grid",
}


def _op_to_dict(op) -> dict:
    tag = _VARIANT_TAGS[type(op)]
    if isinstance(op, AffineMap):
        body = {"matrix": op.matrix.tolist(), "offset": op.offset.tolist()}
    elif isinstance(op, TruncationMap):
        body = {"cap": op.cap.tolist()}
    elif isinstance(op, TranslationMap):
        body = {"shift": op.shift.tolist()}
    elif isinstance(op, BoxProjectionMap):
        body = {"lo": op.lo.tolist(), "hi": op.hi.tolist()}
    elif isinstance(op, CompositionMap):
        body = {"stages": [_op_to_dict(s) for s in op.stages]}
    else:
        body = {
            "origin": op.origin.tolist(),
            "step": op.step,
            "values": op.values.tolist(),
        }
    return {"variant": tag, **body}


def _op_from_dict(d: dict):
    tag = d["variant"]
    if tag == "affine":
        return AffineMap(matrix=d["matrix"], offset=d["offset"])
    if tag == "truncation":
        return TruncationMap(cap=d["cap"])
    if tag == "translation":
        return TranslationMap(shift=d["shift"])
    if tag == "box_projection":
        return BoxProjectionMap(lo=d["lo"], hi=d["hi"])
    if tag == "composition":
        return CompositionMap(stages=[_op_from_dict(s) for s in d["stages"]])
    if tag == "grid":
        return GridMap(origin=d["origin"], step=d["step"], values=d["values"])
    raise ValueError(f"unknown mapping variant {tag!r}")


def mapping_to_dict(spec: MappingSpec) -> dict:
    domain = {"kind": spec.domain.kind, "cone": {"kind": spec.domain.cone.kind, "dim": spec.domain.cone.dim}}
    if spec.domain.lo is not None:
        domain["lo"] = spec.domain.lo.tolist()
        domain["hi"] = spec.domain.hi.tolist()
    return {**_op_to_dict(spec.op), "domain": domain}


def mapping_from_dict(d: dict, validate: bool = True) -> MappingSpec:
    dd = d["domain"]
    cone = ConeSpec(kind=dd["cone"]["kind"], dim=int(dd["cone"]["dim"]))
    domain = Domain(kind=dd["kind"], cone=cone, lo=dd.get("lo"), hi=dd.get("hi"))
    op = _op_from_dict(d)
    if validate:
        return make_mapping(op, domain)
    return MappingSpec(op=op, domain=domain)


def load_mapping(path, validate: bool = True) -> MappingSpec:
    with Path(path).open("r", encoding="utf-8") as fh:
        return mapping_from_dict(json.load(fh), validate=validate)


def save_mapping(spec: MappingSpec, path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        json.dump(mapping_to_dict(spec), fh, indent=2)
        fh.write("\n")
