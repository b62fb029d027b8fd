import math
from dataclasses import replace

import numpy as np
import pytest

from bandspec.operator import apply, truncate
from bandspec.recurrence import (
    RENORM_LIMIT,
    DegenerateLambda,
    Kind,
    Mode,
    Origin,
    PairSequence,
    adjoint_eigenvector,
    adjoint_residual,
    closed_form,
    companion,
    decay_rate,
    eigvec,
    inverse_columns,
    solve_recurrence,
    transpose_apply,
)
from bandspec.spectrum import char_roots, chi, membership_ratio
from conftest import random_params


def jordan_points(params):
    """Roots of the quadratic lam -> chi(lam), found from three samples."""
    xs = np.array([0.0, 1.0, -1.0])
    ys = np.array([chi(params, x) for x in xs])
    coef = np.linalg.solve(np.vander(xs, 3).astype(complex), ys)
    return [complex(z) for z in np.roots(coef)]


def max_pair_error(a: PairSequence, b: PairSequence) -> float:
    va, vb = a.values(), b.values()
    scale = np.maximum(np.max(np.abs(vb), axis=1), 1e-300)
    return float(np.max(np.max(np.abs(va - vb), axis=1) / scale))


class TestCompanion:
    def test_t_zero_form(self, ex2):
        lam = 3 + 1j
        u, v = ex2.r1 - lam, ex2.r2 - lam
        m = companion(ex2, lam, "A1").matrix
        np.testing.assert_allclose(m, [[0, -ex2.s2 / u], [0, ex2.s1 * ex2.s2 / (u * v)]], atol=1e-15)

    def test_example_one_at_zero(self, ex1):
        a1 = companion(ex1, 0, Kind.A1)
        assert a1.trace == pytest.approx(0, abs=1e-15)
        assert a1.det == pytest.approx(-1, abs=1e-15)
        assert companion(ex1, 0, Kind.C).det == pytest.approx(-1, abs=1e-15)

    def test_char_poly_matches_roots(self, rng):
        for _ in range(50):
            p = random_params(rng)
            lam = complex(*rng.normal(size=2))
            roots = char_roots(p, lam)
            for kind in (Kind.A1, Kind.A2):
                cm = companion(p, lam, kind)
                assert cm.trace == pytest.approx(roots.alpha1 + roots.alpha2, rel=1e-10, abs=1e-12)
                assert cm.det == pytest.approx(roots.alpha1 * roots.alpha2, rel=1e-10, abs=1e-12)

    def test_adjoint_companion_reciprocal_roots(self, rng):
        for _ in range(50):
            p = random_params(rng, t_zero=False)
            lam = complex(*rng.normal(size=2))
            roots = char_roots(p, lam)
            got = np.sort_complex(np.linalg.eigvals(companion(p, lam, Kind.C).matrix))
            want = np.sort_complex(np.array([1 / roots.alpha1, 1 / roots.alpha2]))
            np.testing.assert_allclose(got, want, rtol=1e-9)

    def test_c_needs_t(self, ex2):
        with pytest.raises(ValueError):
            companion(ex2, 5, Kind.C)

    def test_degenerate(self, ex1):
        with pytest.raises(DegenerateLambda):
            companion(ex1, ex1.r2, Kind.A1)


def test_eigvec_examples():
    v = eigvec(np.array([[2, 1], [0, 3]], dtype=complex), 3)
    np.testing.assert_allclose(v, [1, 1])
    # first component forced to zero
    v = eigvec(np.array([[1, 0], [5, 2]], dtype=complex), 2)
    np.testing.assert_allclose(v, [0, 1])


class TestInverseColumns:
    def test_difference_operator(self, delta_op):
        seq = inverse_columns(delta_op, 3, "A", K=4)
        want = -0.5 * 0.5 ** np.arange(8)
        np.testing.assert_allclose(seq.flat(), want, rtol=1e-15)
        # the original bands (s = -1) differ by the similarity diag(1, -1, 1, ...)
        signs = np.array([1, -1] * 4)
        orig = np.linalg.inv(_section(delta_op, 8, original=True) - 3 * np.eye(8))[:, 0]
        np.testing.assert_allclose(orig, want * signs, rtol=1e-15)

    def test_matches_dense_inverse(self, rng):
        for _ in range(10):
            p = random_params(rng)
            lam = complex(*(3 * rng.normal(size=2)))
            n = 20
            a = np.linalg.inv(_section(p, n) - lam * np.eye(n))
            np.testing.assert_allclose(inverse_columns(p, lam, "A", n // 2).flat(), a[:, 0],
                                       rtol=1e-9, atol=1e-12 * np.abs(a[:, 0]).max())
            np.testing.assert_allclose(inverse_columns(p, lam, "B", n // 2 - 1).flat(), a[1:-1, 1],
                                       rtol=1e-9, atol=1e-12 * np.abs(a[:, 1]).max())

    def test_rejects_diagonal(self, ex1):
        with pytest.raises(DegenerateLambda):
            inverse_columns(ex1, ex1.r1)
        with pytest.raises(ValueError):
            inverse_columns(ex1, 5, "C")

    def test_renormalization(self, ex1):
        lam = 0.9 + 1e-3j  # deep inside, columns grow fast
        seq = inverse_columns(ex1, lam, "A", K=3000)
        assert np.all(np.isfinite(seq.pairs))
        assert seq.log_scale[-1] > 0
        assert np.max(np.abs(seq.pairs)) <= RENORM_LIMIT * 1e3
        growth = decay_rate(seq)
        assert growth == pytest.approx(1 / membership_ratio(ex1, lam), rel=1e-3)


def _section(p, n, original=False):
    return truncate(p, n).toarray(original=original)


class TestClosedForm:
    def test_t_zero_constant(self, delta_op):
        sol = solve_recurrence(delta_op, 3)
        assert sol.mode is Mode.TZERO
        assert sol.c1 == pytest.approx((delta_op.r2 - 3) / (delta_op.s1 * delta_op.s2), rel=1e-15)
        assert sol.c1 == pytest.approx(-2)

    def test_t_zero_constant_random(self, rng):
        for _ in range(20):
            p = random_params(rng, t_zero=True)
            lam = complex(*rng.normal(size=2))
            sol = solve_recurrence(p, lam)
            assert sol.c1 == pytest.approx((p.r2 - lam) / (p.s1 * p.s2), rel=1e-12)

    @pytest.mark.parametrize("which", ["A", "B"])
    def test_matches_forward_recurrence(self, rng, which):
        for _ in range(100):
            p = random_params(rng)
            lam = complex(*(2 * rng.normal(size=2)))
            _, seq = closed_form(p, lam, which, K=50)
            assert max_pair_error(seq, inverse_columns(p, lam, which, K=50)) <= 1e-9

    def test_first_pair_reconstructed(self, rng):
        for _ in range(50):
            p = random_params(rng, t_zero=False)
            lam = complex(*rng.normal(size=2))
            sol = solve_recurrence(p, lam)
            want = [1 / (p.r1 - lam), -p.s1 / ((p.r1 - lam) * (p.r2 - lam))]
            np.testing.assert_allclose(sol.pair(1), want, rtol=1e-10)

    def test_jordan_points(self, rng):
        hits = 0
        while hits < 10:
            p = random_params(rng, t_zero=False)
            for lam in jordan_points(p):
                if min(abs(lam - p.r1), abs(lam - p.r2)) < 1e-3:
                    continue
                sol, seq = closed_form(p, lam, "A", K=50)
                assert sol.mode is Mode.JORDAN
                assert max_pair_error(seq, inverse_columns(p, lam, "A", K=50)) <= 1e-9
                hits += 1

    def test_example_one_double_root(self, ex1):
        sol, seq = closed_form(ex1, 1 + 1j, K=50)
        assert sol.mode is Mode.JORDAN
        assert max_pair_error(seq, inverse_columns(ex1, 1 + 1j, K=50)) <= 1e-9

    def test_gauge_invariance(self, rng):
        # rescaling eigenvectors changes the constants, not the sequence
        p = random_params(rng, t_zero=False)
        lam = 0.3 + 0.2j
        sol = solve_recurrence(p, lam)
        scaled = replace(sol, eigvec1=2j * sol.eigvec1, eigvec2=-3 * sol.eigvec2,
                         c1=sol.c1 / 2j, c2=sol.c2 / -3)
        for k in (1, 5, 20):
            np.testing.assert_allclose(scaled.pair(k), sol.pair(k), rtol=1e-13)


class TestDecayRate:
    def test_geometric(self):
        pairs = np.array([[0.5 ** k, 0] for k in range(1, 41)])
        assert decay_rate(PairSequence(pairs, Origin.INVERSE_A)) == pytest.approx(0.5, rel=1e-12)

    def test_difference_operator(self, delta_op):
        assert decay_rate(inverse_columns(delta_op, 3, K=60)) == pytest.approx(0.25, rel=5e-3)

    def test_example_one_far_point(self, ex1):
        lam = 5 + 5j
        rate = decay_rate(inverse_columns(ex1, lam, K=60))
        assert rate == pytest.approx(1 / membership_ratio(ex1, lam), rel=2e-2)

    def test_too_short(self):
        with pytest.raises(ValueError):
            decay_rate(PairSequence(np.ones((4, 2)), Origin.INVERSE_A))


class TestSummability:
    def test_dichotomy(self, rng):
        # inverse columns are summable exactly off the spectrum
        for _ in range(40):
            p = random_params(rng)
            lam = complex(*(2 * rng.normal(size=2)))
            ratio = membership_ratio(p, lam)
            if abs(ratio - 1) < 0.1:
                continue
            rate = decay_rate(inverse_columns(p, lam, K=200))
            assert (rate < 1) == (ratio > 1)


class TestAdjoint:
    def test_at_diagonal_entries(self, ex2):
        x = adjoint_eigenvector(ex2, 2, ex2.r1, K=6)
        assert adjoint_residual(ex2, ex2.r1, x) <= 1e-15
        assert x.flat()[0] == 1 and not np.any(x.flat()[1:])
        y = adjoint_eigenvector(ex2, 2, ex2.r2, K=6)
        assert adjoint_residual(ex2, ex2.r2, y) <= 1e-15
        assert not np.any(y.flat()[2:])

    def test_difference_operator(self, delta_op):
        x = adjoint_eigenvector(delta_op, 2, 1.5, K=4).flat()
        np.testing.assert_allclose(x, 0.5 ** np.arange(8), rtol=1e-15)
        res = transpose_apply(delta_op, x) - 1.5 * x
        assert np.max(np.abs(res[:-2])) <= 1e-15
        # original bands: x_{n+1} = (r - lam) x_n / 1 = -x_n / 2
        orig = x * np.array([1, -1] * 4)
        dense = _section(delta_op, 8, original=True).T - 1.5 * np.eye(8)
        assert np.max(np.abs(dense @ orig)[:-1]) <= 1e-15

    def test_residuals(self, preset_params, rng):
        count = 0
        while count < 20:
            lam = complex(*(2 * rng.normal(size=2)))
            if lam in (preset_params.r1, preset_params.r2) or membership_ratio(preset_params, lam) > 0.9:
                continue
            x = adjoint_eigenvector(preset_params, 2, lam, K=50)
            assert x.flat()[0] == pytest.approx(1)
            assert adjoint_residual(preset_params, lam, x) <= 1e-10
            assert decay_rate(x) < 1
            count += 1

    def test_outside_raises(self, ex2):
        with pytest.raises(ValueError):
            adjoint_eigenvector(ex2, 2, 5)

    def test_residual_of_first_basis_vector(self, ex2):
        e1 = np.zeros(6)
        e1[0] = 1
        assert adjoint_residual(ex2, ex2.r1, e1) == 0
        assert adjoint_residual(ex2, ex2.r1 + 1, e1) == pytest.approx(1)
        with pytest.raises(ValueError):
            adjoint_residual(ex2, 0, [])

    def test_transpose_is_adjoint_of_apply(self, rng):
        p = random_params(rng)
        x = rng.normal(size=10) + 1j * rng.normal(size=10)
        y = rng.normal(size=12) + 1j * rng.normal(size=12)
        # <Bx, y> = <x, B^T y> for the bilinear pairing
        assert np.sum(apply(p, x) * y) == pytest.approx(np.sum(x * transpose_apply(p, y)[:10]), rel=1e-12)


def test_space_independent_vector(ex2):
    a = adjoint_eigenvector(ex2, 1.5, 2, K=10).flat()
    b = adjoint_eigenvector(ex2, 3, 2, K=10).flat()
    np.testing.assert_array_equal(a, b)
    assert math.isfinite(np.abs(a).sum())
