"""Shipped example mappings used by the tests and verification campaigns."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from orderfp.mapping import (
    AffineMap,
    BoxProjectionMap,
    CompositionMap,
    Domain,
    GridMap,
    MappingSpec,
    TranslationMap,
    TruncationMap,
    make_mapping,
)
from orderfp.order import ConeSpec
from orderfp.space import SpaceSpec


def _cone_domain(dim: int) -> Domain:
    return Domain(kind="cone", cone=ConeSpec(kind="orthant", dim=dim))


def identity_map(dim: int = 2) -> MappingSpec:
    return make_mapping(AffineMap(matrix=np.eye(dim), offset=np.zeros(dim)), _cone_domain(dim))


def constant_map(value) -> MappingSpec:
    v = np.asarray(value, dtype=float)
    return make_mapping(AffineMap(matrix=np.zeros((v.size, v.size)), offset=v), _cone_domain(v.size))


def affine_contraction(dim: int = 2) -> MappingSpec:
    """x -> x/2 + 1; fixed point at 2 in every coordinate."""
    return make_mapping(
        AffineMap(matrix=0.5 * np.eye(dim), offset=np.ones(dim)), _cone_domain(dim)
    )


def unit_translation(dim: int = 2) -> MappingSpec:
    """x -> x + 1: monotone isometry with no fixed point (unbounded orbits)."""
    return make_mapping(TranslationMap(shift=np.ones(dim)), _cone_domain(dim))


def truncation_cap(dim: int = 2, cap: float = 1.5) -> MappingSpec:
    """x -> min(x, cap): every point below the cap is fixed."""
    return make_mapping(TruncationMap(cap=np.full(dim, cap)), _cone_domain(dim))


def box_clamp(dim: int = 2, hi: float = 1.0) -> MappingSpec:
    """Orthogonal projection onto [0, hi]^dim, as a self-map of the cone."""
    return make_mapping(
        BoxProjectionMap(lo=np.zeros(dim), hi=np.full(dim, hi)), _cone_domain(dim)
    )


def box_drift_down(dim: int = 2, step: float = 0.5, floor: float = -3.0) -> MappingSpec:
    """Shift down by ``step`` and clamp into the box [floor, 0]^dim.

    Every orbit decreases to the box floor; orbits started at x0 <= 0 satisfy
    T x0 <= x0 <= 0, the descending-orbit hypothesis shape.
    """
    lo = np.full(dim, floor)
    hi = np.zeros(dim)
    op = CompositionMap(
        stages=[TranslationMap(shift=np.full(dim, -step)), BoxProjectionMap(lo=lo, hi=hi)]
    )
    domain = Domain(kind="box", cone=ConeSpec(kind="orthant", dim=dim), lo=lo, hi=hi)
    return make_mapping(op, domain)


def steep_step_map() -> MappingSpec:
    """Lattice map on {0, 0.5, ..., 3}: zero below the top node, 1.5 at it.

    Monotone, and fails plain nonexpansiveness across the jump (the images of
    2.5 and 3 are 1.5 apart); the weighted squared-distance inequality holds
    for every alpha >= 0.2106, in particular at the shipped alpha = 1/3. Both
    facts are machine-verified by exhaustive lattice brute force in the tests.
    """
    values = np.zeros((7, 1))
    values[6, 0] = 1.5
    op = GridMap(origin=np.zeros(1), step=0.5, values=values)
    domain = Domain(
        kind="box", cone=ConeSpec(kind="orthant", dim=1), lo=np.zeros(1), hi=np.full(1, 3.0)
    )
    return make_mapping(op, domain)


STEEP_STEP_ALPHA = 1.0 / 3.0


def random_nonneg_affine(
    dim: int, rho: float, rng: np.random.Generator, spectral_cap: float = 0.995, max_tries: int = 50
) -> MappingSpec:
    """Random entrywise non-negative affine self-map of the orthant with
    ||A||_2 = rho and an offset drawn from the cone.

    Draws are rejected while the spectral radius sits above ``spectral_cap``,
    keeping generated maps inside the regime where a finite-budget bounded
    or unbounded verdict is reliable.
    """
    for _ in range(max_tries):
        m = rng.uniform(0.0, 1.0, size=(dim, dim))
        sigma = float(np.linalg.norm(m, 2))
        if sigma <= 0.0:
            continue
        a = rho * m / sigma
        if float(np.max(np.abs(np.linalg.eigvals(a)))) <= spectral_cap:
            b = rng.uniform(0.0, 1.0, size=dim)
            return make_mapping(AffineMap(matrix=a, offset=b), _cone_domain(dim))
    raise RuntimeError(f"could not draw a spectral-radius-capped map at rho={rho}")


@dataclass(frozen=True)
class CorpusEntry:
    """A shipped map with the space it lives in and a class parameter alpha
    at which the weighted inequality is expected to hold."""

    name: str
    spec: MappingSpec
    space: SpaceSpec
    alpha: float


def alpha_corpus() -> list[CorpusEntry]:
    """The shipped mapping corpus. The identity entry carries a negative
    alpha (the inequality is an identity there for any alpha), and the
    lattice entry is the alpha > 0 map that is not nonexpansive."""
    return [
        CorpusEntry("identity", identity_map(2), SpaceSpec(dim=2, p=2.0), alpha=-0.5),
        CorpusEntry("affine_contraction", affine_contraction(2), SpaceSpec(dim=2, p=2.0), alpha=0.0),
        CorpusEntry("truncation", truncation_cap(2), SpaceSpec(dim=2, p=2.0), alpha=0.0),
        CorpusEntry("translation", unit_translation(2), SpaceSpec(dim=2, p=2.0), alpha=0.0),
        CorpusEntry("box_clamp", box_clamp(2), SpaceSpec(dim=2, p=2.0), alpha=0.0),
        CorpusEntry("box_drift_down", box_drift_down(2), SpaceSpec(dim=2, p=2.0), alpha=0.0),
        CorpusEntry("steep_step", steep_step_map(), SpaceSpec(dim=1, p=2.0), alpha=STEEP_STEP_ALPHA),
    ]
