"""Orbit generation, order tracking, and limits."""

import numpy as np
import pytest

from orderfp import corpus
from orderfp.iterate import (
    CONVERGED,
    DECREASING,
    INCREASING,
    IterationConfig,
    MAX_ITER_REACHED,
    NEITHER,
    UNBOUNDED_SUSPECTED,
    check_orbit_monotone,
    mann_orbit,
    monotone_limit,
    picard_orbit,
    read_orbit_points,
    write_orbit_csv,
)
from orderfp.mapping import AffineMap, Domain, DomainError, MappingSpec, make_mapping, TranslationMap
from orderfp.order import ConeSpec
from orderfp.space import SpaceSpec, norm

ORTH2 = ConeSpec(kind="orthant", dim=2)
P2 = SpaceSpec(dim=2, p=2.0)
SMALL = IterationConfig(max_iter=50_000, residual_tol=1e-10, bound_threshold=1e4, window=50)


def swap_shift_map():
    """Monotone (nonnegative matrix) map whose first step can be incomparable."""
    op = AffineMap(matrix=np.array([[0.0, 1.0], [1.0, 0.0]]), offset=np.array([1.0, 0.0]))
    return make_mapping(op, Domain(kind="cone", cone=ORTH2))


class TestPicard:
    def test_fixed_start_converges_immediately(self):
        rec = picard_orbit(corpus.affine_contraction(2), [2.0, 2.0], ORTH2, P2)
        assert rec.verdict == CONVERGED
        assert len(rec) == 1
        assert rec.residuals[0] == 0.0

    def test_translation_orbit_is_exactly_linear(self):
        rec = picard_orbit(corpus.unit_translation(2), [0.0, 0.0], ORTH2, P2, SMALL)
        assert rec.verdict == UNBOUNDED_SUSPECTED
        assert rec.order_monotone == INCREASING
        for n in range(min(len(rec), 200)):
            assert np.array_equal(rec.points[n], np.full(2, float(n)))

    def test_geometric_orbit_matches_closed_form(self):
        rec = picard_orbit(corpus.affine_contraction(2), [0.0, 0.0], ORTH2, P2)
        assert rec.verdict == CONVERGED
        assert rec.order_monotone == INCREASING
        # x_n = 2 - 2^{1-n} componentwise, exact in binary floating point
        for n in range(len(rec)):
            expected = 2.0 - 2.0 ** (1 - n)
            assert np.array_equal(rec.points[n], np.full(2, expected))
        assert norm(P2, rec.points[-1] - np.array([2.0, 2.0])) < 1e-9

    def test_start_outside_domain_rejected(self):
        with pytest.raises(DomainError):
            picard_orbit(corpus.affine_contraction(2), [-1.0, 0.0], ORTH2, P2)

    def test_runtime_domain_escape_detected(self):
        # constructed unchecked: drifts below the orthant after two steps
        esc = MappingSpec(
            op=TranslationMap(shift=np.array([-1.0, -1.0])),
            domain=Domain(kind="cone", cone=ORTH2),
        )
        with pytest.raises(DomainError, match="escaped"):
            picard_orbit(esc, [1.5, 1.5], ORTH2, P2)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            IterationConfig(max_iter=0)
        with pytest.raises(ValueError):
            IterationConfig(residual_tol=0.0)


class TestMann:
    def test_zero_schedule_reproduces_picard_bitwise(self):
        pic = picard_orbit(corpus.affine_contraction(2), [0.0, 0.0], ORTH2, P2)
        man = mann_orbit(corpus.affine_contraction(2), [0.0, 0.0], 0.0, ORTH2, P2)
        assert man.scheme == "mann"
        assert np.array_equal(pic.points, man.points)
        assert np.array_equal(pic.residuals, man.residuals)
        assert pic.verdict == man.verdict

    def test_all_one_schedule_freezes_the_orbit(self):
        cfg = IterationConfig(max_iter=25)
        rec = mann_orbit(corpus.affine_contraction(2), [0.0, 0.0], 1.0, ORTH2, P2, cfg)
        assert rec.verdict == MAX_ITER_REACHED
        assert np.max(np.abs(rec.points)) == 0.0

    def test_half_schedule_converges_to_same_fixed_point(self):
        rec = mann_orbit(corpus.affine_contraction(2), [0.0, 0.0], 0.5, ORTH2, P2)
        assert rec.verdict == CONVERGED
        assert norm(P2, rec.points[-1] - np.array([2.0, 2.0])) < 1e-9

    def test_schedule_as_sequence_and_callable(self):
        seq = mann_orbit(corpus.affine_contraction(2), [0.0, 0.0], [0.5, 0.25], ORTH2, P2)
        fn = mann_orbit(corpus.affine_contraction(2), [0.0, 0.0],
                        lambda n: 0.5 if n == 0 else 0.25, ORTH2, P2)
        assert np.array_equal(seq.points, fn.points)

    def test_invalid_schedule_rejected(self):
        with pytest.raises(ValueError):
            mann_orbit(corpus.affine_contraction(2), [0.0, 0.0], 1.5, ORTH2, P2)
        with pytest.raises(ValueError):
            mann_orbit(corpus.affine_contraction(2), [0.0, 0.0], -0.1, ORTH2, P2)
        with pytest.raises(ValueError):
            mann_orbit(corpus.affine_contraction(2), [0.0, 0.0], [], ORTH2, P2)


class TestOrderTracking:
    def test_constant_orbit_is_both_directions(self):
        cfg = IterationConfig(max_iter=10)
        rec = mann_orbit(corpus.affine_contraction(2), [0.0, 0.0], 1.0, ORTH2, P2, cfg)
        chain = check_orbit_monotone(rec, ORTH2)
        assert chain.increasing and chain.decreasing

    def test_translation_is_increasing_only(self):
        rec = picard_orbit(corpus.unit_translation(2), [0.0, 0.0], ORTH2, P2, SMALL)
        chain = check_orbit_monotone(rec, ORTH2)
        assert chain.increasing and not chain.decreasing
        assert chain.first_down_violation == 0

    def test_incomparable_first_step_flags_neither(self):
        cfg = IterationConfig(max_iter=40)
        rec = picard_orbit(swap_shift_map(), [2.0, 0.0], ORTH2, P2, cfg)
        assert rec.order_monotone == NEITHER
        chain = check_orbit_monotone(rec, ORTH2)
        assert not chain.increasing and not chain.decreasing
        assert chain.first_up_violation == 0
        assert chain.first_down_violation == 0

    def test_descending_orbit(self):
        rec = picard_orbit(corpus.affine_contraction(2), [5.0, 5.0], ORTH2, P2)
        assert rec.order_monotone == DECREASING
        assert rec.verdict == CONVERGED

    def test_empty_record_rejected(self):
        rec = picard_orbit(corpus.affine_contraction(2), [2.0, 2.0], ORTH2, P2)
        rec.points = rec.points[:0]
        with pytest.raises(ValueError):
            check_orbit_monotone(rec, ORTH2)


class TestMonotoneLimit:
    def test_constant_orbit_limit(self):
        rec = picard_orbit(corpus.constant_map([1.0, 1.0]), [1.0, 1.0], ORTH2, P2)
        assert np.array_equal(monotone_limit(rec, ORTH2), [1.0, 1.0])

    def test_geometric_limit_with_order_bound(self):
        rec = picard_orbit(corpus.affine_contraction(2), [0.0, 0.0], ORTH2, P2)
        limit = monotone_limit(rec, ORTH2)
        assert norm(P2, limit - np.array([2.0, 2.0])) < 1e-9

    def test_unbounded_rejected(self):
        rec = picard_orbit(corpus.unit_translation(2), [0.0, 0.0], ORTH2, P2, SMALL)
        with pytest.raises(ValueError, match="unbounded"):
            monotone_limit(rec, ORTH2)

    def test_non_monotone_rejected(self):
        cfg = IterationConfig(max_iter=40)
        rec = picard_orbit(swap_shift_map(), [2.0, 0.0], ORTH2, P2, cfg)
        with pytest.raises(ValueError, match="not order-monotone"):
            monotone_limit(rec, ORTH2)


class TestDistanceAndNormSequences:
    def test_quasi_descent_toward_fixed_point(self):
        z = np.array([2.0, 2.0])
        rec = picard_orbit(corpus.affine_contraction(2), [0.0, 0.0], ORTH2, P2)
        dists = [norm(P2, pt - z) for pt in rec.points]
        assert all(b <= a + 1e-12 for a, b in zip(dists, dists[1:]))
        assert all(d <= dists[0] + 1e-12 for d in dists)

    def test_norm_growth_under_monotonic_norm(self):
        rec = picard_orbit(corpus.affine_contraction(2), [0.0, 0.0], ORTH2, P2)
        diffs = np.diff(rec.norms)
        assert np.all(diffs >= -1e-12)
        limit_norm = norm(P2, monotone_limit(rec, ORTH2))
        assert np.all(rec.norms <= limit_norm + 1e-9)


class TestCsvRoundTrip:
    def test_round_trip_exact(self, tmp_path):
        rec = picard_orbit(corpus.affine_contraction(2), [0.0, 0.0], ORTH2, P2)
        path = tmp_path / "orbit.csv"
        write_orbit_csv(rec, path)
        pts = read_orbit_points(path)
        assert np.array_equal(pts, rec.points)
        header = path.read_text().splitlines()[0]
        assert header == "n,x0,x1,residual,norm,leq_up,leq_down"

    def test_missing_data_rejected(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("n,x0,x1,residual,norm,leq_up,leq_down\n")
        with pytest.raises(ValueError):
            read_orbit_points(path)
