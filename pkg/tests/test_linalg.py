import math

import numpy as np
import pytest

from conelab.linalg import (
    ConeModel,
    DegenerateInputError,
    DimensionMismatchError,
    DomainError,
    LinearConstraintSet,
    Tolerance,
    as_vector,
    conic_membership,
    feasible_interval,
    nullspace,
)

SQRT2 = math.sqrt(2.0)


class TestNullspace:
    def test_face_slice_rows_give_the_known_perp_direction(self):
        rows = [
            [1.0, 0.5, 0.0, 0.5],
            [1.0, 0.5 - SQRT2, 2.0 - SQRT2, 0.5],
            [1.0, SQRT2 - 1.5, SQRT2, 0.5],
        ]
        basis = nullspace(rows)
        assert basis.shape == (1, 4)
        target = np.array([1.0, 0.0, 0.0, -2.0]) / math.sqrt(5.0)
        assert abs(abs(basis[0] @ target) - 1.0) < 1e-12

    def test_identity_has_empty_kernel(self):
        assert nullspace(np.eye(3)).shape == (0, 3)

    def test_single_row_gives_two_orthonormal_vectors(self):
        basis = nullspace([[1.0, 1.0, 0.0]])
        assert basis.shape == (2, 3)
        assert np.allclose(basis @ np.array([1.0, 1.0, 0.0]), 0.0, atol=1e-12)
        assert np.allclose(basis @ basis.T, np.eye(2), atol=1e-12)

    def test_injected_kernel_vector_is_recovered(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            n = rng.integers(2, 6)
            v = rng.normal(size=n)
            v /= np.linalg.norm(v)
            a = rng.normal(size=(n, n))
            a -= np.outer(a @ v, v)  # force v into the kernel
            basis = nullspace(a)
            assert len(basis) >= 1
            cos = np.abs(basis @ v).max()
            assert cos > 1.0 - 1e-8
            # post-conditions: orthonormal, annihilated by a
            assert np.allclose(basis @ basis.T, np.eye(len(basis)), atol=1e-9)
            assert np.abs(a @ basis.T).max() < 1e-9

    def test_empty_matrix_rejected(self):
        with pytest.raises(DegenerateInputError):
            nullspace(np.empty((0, 3)))


class TestConicMembership:
    def test_inside_quadrant(self):
        cone = ConeModel(np.array([[1.0, 0.0], [0.0, 1.0]]))
        verdict = conic_membership([1.0, 1.0], cone)
        assert verdict.inside
        assert np.allclose(verdict.coefficients, [1.0, 1.0], atol=1e-9)
        assert verdict.recheck([1.0, 1.0], cone)

    def test_outside_quadrant_with_separating_normal(self):
        cone = ConeModel(np.array([[1.0, 0.0], [0.0, 1.0]]))
        verdict = conic_membership([-1.0, 0.0], cone)
        assert not verdict.inside
        s = verdict.normal
        assert s[0] < 0 and abs(s[1]) <= abs(s[0]) * 1e-6 + 1e-9
        assert verdict.margin > 0
        assert verdict.recheck([-1.0, 0.0], cone)

    def test_every_verdict_is_recheckable(self):
        rng = np.random.default_rng(8)
        for _ in range(60):
            dim = int(rng.integers(2, 5))
            gens = rng.normal(size=(int(rng.integers(dim, 8)), dim))
            cone = ConeModel(gens)
            if rng.random() < 0.5:
                point = gens.T @ rng.random(len(gens))  # guaranteed inside
            else:
                point = 3.0 * rng.normal(size=dim)
            verdict = conic_membership(point, cone)
            assert verdict.recheck(point, cone)


class TestFeasibleInterval:
    def test_examples(self):
        assert feasible_interval([0.0, 1.0], [3.0]) == (1.0, 3.0)
        assert feasible_interval([5.0], [2.0]) is None
        assert feasible_interval([], []) == (-math.inf, math.inf)

    def test_matches_exhaustive_scan(self):
        rng = np.random.default_rng(21)
        for _ in range(200):
            lowers = rng.normal(size=rng.integers(0, 5)).tolist()
            uppers = rng.normal(size=rng.integers(0, 5)).tolist()
            interval = feasible_interval(lowers, uppers)
            candidates = lowers + uppers + [-10.0, 0.0, 10.0]
            feasible = [
                x for x in candidates
                if all(lo <= x for lo in lowers) and all(x <= hi for hi in uppers)
            ]
            if interval is None:
                assert not feasible
            else:
                lo, hi = interval
                assert lo <= hi
                for x in feasible:
                    assert lo - 1e-12 <= x <= hi + 1e-12


class TestPlumbingTypes:
    def test_as_vector_rejects_nan_and_bad_dims(self):
        with pytest.raises(DomainError):
            as_vector([1.0, math.nan])
        with pytest.raises(DimensionMismatchError):
            as_vector([1.0])
        with pytest.raises(DimensionMismatchError):
            as_vector([1.0, 2.0, 3.0], dim=2)

    def test_tolerance_validation(self):
        with pytest.raises(DomainError):
            Tolerance(eq_abs=0.0)
        assert Tolerance().eq_abs == 1e-9

    def test_constraint_set(self):
        cs = LinearConstraintSet(rows=(((1.0, 0.0), "<=", 1.0), ((0.0, 1.0), "=", 2.0)))
        assert cs.dim == 2
        res = cs.residuals([2.0, 2.0])
        assert res[0] == pytest.approx(1.0)
        assert res[1] == pytest.approx(0.0)
        with pytest.raises(DimensionMismatchError):
            LinearConstraintSet(rows=(((1.0,  0.0), "<=", 1.0), ((1.0,), "<=", 0.0)))
        with pytest.raises(DomainError):
            LinearConstraintSet(rows=(((1.0, 0.0), "<", 1.0),))
