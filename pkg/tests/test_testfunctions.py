import numpy as np
import pytest

from ctgrad import (
    BREAKPOINTS,
    DomainError,
    PiecewiseQuadratic,
    QuadraticObjective,
    FunctionBatch,
    grad,
    sample_function,
    sector_alpha,
    value,
)

# hessians accepted by the single-minimum screen, used as a fixed example
GOOD = (0.5, 0.3, -0.2, 0.4, 0.5, -0.1, 0.6, 0.1, 0.9)


def brute_value(f, x, n=200001):
    # integrate the closed-form gradient numerically from 0 to x
    xs = np.linspace(0.0, x, n)
    gs = f.grad(xs)
    return float(np.trapezoid(gs, xs))


class TestPiecewiseQuadratic:
    def test_validation(self):
        with pytest.raises(ValueError):
            PiecewiseQuadratic((1.0,) * 8, 0.25)
        with pytest.raises(ValueError):
            PiecewiseQuadratic((-0.5,) + (1.0,) * 8, 0.25)  # tail not positive
        with pytest.raises(ValueError):
            PiecewiseQuadratic((0.5,) * 4 + (0.1,) + (0.5,) * 4, 0.25)  # centre < mu
        with pytest.raises(DomainError):
            PiecewiseQuadratic((0.5,) * 9, 0.0)
        with pytest.raises(ValueError):
            PiecewiseQuadratic((0.5, 1.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5), 0.25)

    def test_rejects_multiple_minima(self):
        # strongly negative curvature right of the centre drives the
        # gradient negative again at x > 0
        h = (0.5, 0.1, 0.1, 0.1, 0.3, -1.0, 0.1, 0.1, 0.5)
        with pytest.raises(ValueError):
            PiecewiseQuadratic(h, 0.25)

    def test_stationary_at_origin(self):
        f = PiecewiseQuadratic(GOOD, 0.25)
        assert f.grad(0.0) == 0.0
        assert f.value(0.0) == 0.0

    def test_grad_example(self):
        # inside I6 the gradient is grad(0.5) + I6-curvature * (x - 0.5)
        f = PiecewiseQuadratic(GOOD, 0.25)
        assert f.grad(1.0) == pytest.approx(0.5 * 0.5 + (-0.1) * 0.5)

    def test_gradient_continuous_at_breakpoints(self):
        f = PiecewiseQuadratic(GOOD, 0.25)
        for bp in BREAKPOINTS:
            left = f.grad(bp - 1e-9)
            right = f.grad(bp + 1e-9)
            assert left == pytest.approx(right, abs=1e-8)

    def test_value_continuous_at_breakpoints(self):
        f = PiecewiseQuadratic(GOOD, 0.25)
        for bp in BREAKPOINTS:
            assert f.value(bp - 1e-9) == pytest.approx(f.value(bp + 1e-9), abs=1e-8)

    def test_value_matches_integrated_gradient(self):
        f = PiecewiseQuadratic(GOOD, 0.25)
        for x in (-6.0, -3.7, -1.0, 0.3, 2.0, 4.1, 7.5):
            assert f.value(x) == pytest.approx(brute_value(f, x), abs=1e-6)

    def test_curvature_matches_hessians(self):
        f = PiecewiseQuadratic(GOOD, 0.25)
        probes = [-5.0, -4.0, -3.0, -1.5, 0.0, 1.5, 3.0, 4.0, 5.0]
        for x, h in zip(probes, GOOD):
            fd = (f.grad(x + 1e-6) - f.grad(x - 1e-6)) / 2e-6
            assert fd == pytest.approx(h, abs=1e-6)

    def test_gradient_lipschitz(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            f = sample_function(rng, 0.1)
            xs = rng.uniform(-10, 10, 100)
            ys = rng.uniform(-10, 10, 100)
            assert np.all(np.abs(f.grad(xs) - f.grad(ys)) <= np.abs(xs - ys) + 1e-12)

    def test_array_and_scalar_forms_agree(self):
        f = PiecewiseQuadratic(GOOD, 0.25)
        xs = np.array([-5.5, -0.2, 0.7, 3.3])
        assert f.grad(xs) == pytest.approx([f.grad(float(x)) for x in xs])
        assert f.value(xs) == pytest.approx([f.value(float(x)) for x in xs])

    def test_module_level_helpers(self):
        f = PiecewiseQuadratic(GOOD, 0.25)
        assert grad(f, 1.0) == f.grad(1.0)
        assert value(f, 1.0) == f.value(1.0)

    def test_dict_roundtrip(self):
        f = PiecewiseQuadratic(GOOD, 0.25)
        f2 = PiecewiseQuadratic.from_dict(f.to_dict())
        assert f2.hessians == f.hessians and f2.mu == f.mu


class TestQuadraticObjective:
    def test_values(self):
        q = QuadraticObjective(0.5)
        assert q.grad(2.0) == 1.0
        assert q.value(2.0) == 1.0

    def test_domain(self):
        with pytest.raises(DomainError):
            QuadraticObjective(0.0)
        with pytest.raises(DomainError):
            QuadraticObjective(1.5)


class TestSampleFunction:
    def test_deterministic_given_generator_state(self):
        f1 = sample_function(np.random.default_rng(7), 0.25)
        f2 = sample_function(np.random.default_rng(7), 0.25)
        assert f1.hessians == f2.hessians

    def test_ranges(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            f = sample_function(rng, 0.25)
            h = f.hessians
            assert 0.0 < h[0] <= 1.0 and 0.0 < h[8] <= 1.0
            assert 0.25 <= h[4] <= 1.0
            assert all(-1.0 <= v <= 1.0 for v in h)

    def test_single_minimum_holds(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            f = sample_function(rng, 0.5)
            xs = np.linspace(-8, 8, 1601)
            gs = f.grad(xs)
            assert np.all(gs[xs > 0] > 0)
            assert np.all(gs[xs < 0] < 0)

    def test_mu_domain(self):
        with pytest.raises(DomainError):
            sample_function(np.random.default_rng(0), 0.0)


class TestSectorAlpha:
    def test_uniform_curvature(self):
        # all curvatures equal: the sector bound is that curvature
        lam = 0.375
        f = PiecewiseQuadratic((lam,) * 9, lam)
        assert sector_alpha(f) == pytest.approx(lam, rel=1e-12)

    def test_matches_secant_infimum(self):
        # the secant g(x)/x is monotone between breakpoints with limits
        # h[0] and h[8] at infinity, so its infimum over x != 0 is the
        # minimum over the breakpoints, the center slope, and the two tails
        rng = np.random.default_rng(9)
        for _ in range(25):
            f = sample_function(rng, 0.2)
            bp = BREAKPOINTS
            expect = min([f.grad(x) / x for x in bp]
                         + [f.hessians[0], f.hessians[4], f.hessians[8]])
            assert sector_alpha(f) == pytest.approx(expect, rel=1e-12)
            # alpha is a valid lower bound on every finite secant
            xs = np.concatenate([np.linspace(-30, -1e-4, 20000),
                                 np.linspace(1e-4, 30, 20000)])
            secants = f.grad(xs) / xs
            assert sector_alpha(f) <= secants.min() + 1e-12

    def test_can_drop_below_central_curvature(self):
        # the sector bound can be smaller than 1/kappa even though the
        # curvature near the origin is at least 1/kappa
        kappa = 4.0
        rng = np.random.default_rng(12)
        found = False
        for _ in range(200):
            f = sample_function(rng, 1.0 / kappa)
            if 0.0 < sector_alpha(f) < 1.0 / kappa:
                found = True
                break
        assert found


class TestFunctionBatch:
    def test_matches_individual_gradients(self):
        rng = np.random.default_rng(3)
        funcs = [sample_function(rng, 0.25) for _ in range(5)]
        batch = FunctionBatch(funcs)
        X = rng.uniform(-6, 6, (5, 3))
        got = batch.grad(X)
        for i, f in enumerate(funcs):
            assert got[i] == pytest.approx(f.grad(X[i]), rel=1e-15, abs=0)

    def test_row_subset(self):
        rng = np.random.default_rng(6)
        funcs = [sample_function(rng, 0.25) for _ in range(4)]
        batch = FunctionBatch(funcs)
        X = rng.uniform(-3, 3, (2, 1))
        got = batch.grad(X, rows=np.array([2, 0]))
        assert got[0] == pytest.approx(funcs[2].grad(X[0]))
        assert got[1] == pytest.approx(funcs[0].grad(X[1]))
