import math

import numpy as np
import pytest

from wtan.core import (
    SolverConfig,
    branch_identity_residual,
    derivative,
    eval_real,
    halley_step,
    second_derivative,
    validate_branch,
)
from wtan.errors import (
    AtBranchPoint,
    NoConvergence,
    NonFiniteArgument,
    PoleProximity,
    SignedZeroRequired,
)

from conftest import w_real_oracle

# Table-row branch point values rounded to six decimals; close enough to the
# true point that the derivative guard has to fire.
X1_PRINTED = complex(-1.650611, 2.059981)
Y1_PRINTED = complex(2.106196, 1.125364)


class TestEvalReal:
    def test_special_value_pi_over_4(self):
        assert eval_real(math.pi / 4, 1) == pytest.approx(math.pi / 4, abs=1e-15)

    def test_large_x_asymptote(self):
        assert abs(eval_real(1e8, 1) - math.pi / 2 * (1 - 1e-8)) < 1e-12

    def test_positive_unit_argument(self):
        # bisection oracle on (0, pi/2) gives 0.8603335890193797
        assert eval_real(1.0, 1) == pytest.approx(0.8603335890193797, abs=1e-12)
        assert eval_real(1.0, 1) == pytest.approx(w_real_oracle(1.0, 1), abs=1e-12)

    def test_negative_unit_argument(self):
        # bisection oracle on (pi/2, pi) gives 2.7983860457838867
        assert eval_real(-1.0, 1) == pytest.approx(2.7983860457838867, abs=1e-12)
        assert eval_real(-1.0, 1) == pytest.approx(w_real_oracle(-1.0, 1), abs=1e-12)

    @pytest.mark.parametrize("x,n", [(0.3, 1), (5.0, 2), (17.0, 3), (-4.2, 2),
                                     (-0.7, 4), (123.0, 5), (-250.0, 5)])
    def test_against_bisection_oracle(self, x, n):
        assert eval_real(x, n) == pytest.approx(w_real_oracle(x, n), abs=1e-11)

    def test_branch_windows(self):
        rng = np.random.default_rng(7)
        for _ in range(300):
            x = float(rng.uniform(-50, 50)) or 1.0
            n = int(rng.integers(1, 6))
            w = eval_real(x, n)
            if x > 0:
                assert (n - 1) * math.pi < w < (n - 0.5) * math.pi
            else:
                assert (n - 0.5) * math.pi < w < n * math.pi

    def test_odd_symmetry_exact(self):
        for x in (-3.0, -0.5, 0.25, 2.0, 40.0):
            for n in (1, 2, 5):
                assert eval_real(x, -n) == -eval_real(x, n)

    def test_residual_invariant(self):
        rng = np.random.default_rng(11)
        for _ in range(500):
            x = float(rng.uniform(-1000, 1000)) or 1.0
            n = int(rng.integers(1, 6)) * (1 if rng.random() < 0.5 else -1)
            w = eval_real(x, n)
            assert abs(w * math.tan(w) - x) <= 1e-12 * (1 + abs(x))

    def test_limit_matching_at_zero(self):
        # w(n) at 0- meets w(n+1) at 0+, both at n*pi
        for n in (1, 2, 3):
            left = eval_real(-1e-12, n)
            right = eval_real(1e-12, n + 1)
            assert abs(left - n * math.pi) < 1e-6
            assert abs(right - n * math.pi) < 1e-6

    def test_monotone_on_principal_branch(self):
        xs = np.linspace(1e-6, 50, 400)
        ws = [eval_real(float(x), 1) for x in xs]
        assert all(b > a for a, b in zip(ws, ws[1:]))

    def test_signed_zero(self):
        with pytest.raises(SignedZeroRequired):
            eval_real(0.0, 1)
        assert eval_real(0.0, 1, side=+1) == 0.0
        assert eval_real(0.0, 1, side=-1) == math.pi
        assert eval_real(0.0, 3, side=+1) == 2 * math.pi
        assert eval_real(0.0, -2, side=-1) == -2 * math.pi

    def test_nonfinite_rejected(self):
        with pytest.raises(NonFiniteArgument):
            eval_real(math.nan, 1)
        with pytest.raises(NonFiniteArgument):
            eval_real(math.inf, 1)

    def test_branch_validation(self):
        with pytest.raises(ValueError):
            eval_real(1.0, 0)
        with pytest.raises(TypeError):
            validate_branch(1.5)

    def test_no_convergence_when_tolerance_unreachable(self):
        cfg = SolverConfig(tol=1e-30, max_iter=3)
        with pytest.raises(NoConvergence):
            eval_real(1.0, 1, cfg)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            SolverConfig(tol=0.0)
        with pytest.raises(ValueError):
            SolverConfig(max_iter=0)


class TestHalleyStep:
    def test_fixed_point(self):
        root = 0.8603335890193797
        assert abs(halley_step(1.0, root) - root) < 1e-12

    def test_converges_within_four_iterations(self):
        y = 0.8
        for _ in range(4):
            y = halley_step(1.0, y)
        assert abs(y * math.tan(y) - 1.0) < 1e-13

    def test_converges_to_special_value(self):
        y = 0.7
        for _ in range(6):
            y = halley_step(math.pi / 4, y)
        assert abs(y - math.pi / 4) < 1e-13

    def test_pole_guard(self):
        with pytest.raises(PoleProximity):
            halley_step(1.0, math.pi / 2)

    def test_complex_step(self):
        y = 1.2 + 0.2j
        for _ in range(8):
            y = halley_step(2 + 2j, y)
        assert abs(y * np.tan(y) - (2 + 2j)) < 1e-12


class TestDerivatives:
    def test_special_point(self):
        d = derivative(math.pi / 4, math.pi / 4)
        assert d == pytest.approx(1.0 / (1.0 + math.pi / 2), rel=1e-14)

    def test_small_x_square_root_behavior(self):
        # q = w^2 + x^2 + x ~ 2x near the origin, so stay above the
        # branch-point guard; the limit dw/dx * 2 sqrt(x) -> 1 has O(x) error
        x = 1e-3
        w = eval_real(x, 1)
        assert derivative(x, w) * 2 * math.sqrt(x) == pytest.approx(1.0, rel=5e-3)
        x = 1e-4
        w = eval_real(x, 1)
        assert derivative(x, w) * 2 * math.sqrt(x) == pytest.approx(1.0, rel=5e-4)

    def test_branch_point_guard(self):
        with pytest.raises(AtBranchPoint):
            derivative(X1_PRINTED, Y1_PRINTED)
        with pytest.raises(AtBranchPoint):
            second_derivative(X1_PRINTED, Y1_PRINTED)

    def test_against_finite_differences(self):
        for x in [-10, -7, -3, -1, 1, 2, 5, 10]:
            for n in (1, 2, 3):
                h = 1e-6 * (1 + abs(x))
                fd = (eval_real(x + h, n) - eval_real(x - h, n)) / (2 * h)
                d = derivative(x, eval_real(x, n))
                assert d == pytest.approx(fd, rel=1e-6)

    def test_second_derivative_against_finite_differences(self):
        x = math.pi / 4
        w = eval_real(x, 1)
        h = 1e-4
        fd2 = (eval_real(x + h, 1) - 2 * w + eval_real(x - h, 1)) / h ** 2
        assert second_derivative(x, w) == pytest.approx(fd2, rel=1e-6)

    def test_second_derivative_large_x_tail(self):
        # differentiating the large-argument series twice: w'' -> -pi/x^3
        x = 1e4
        w = eval_real(x, 1)
        assert second_derivative(x, w) == pytest.approx(-math.pi / x ** 3, rel=1e-3)


class TestBranchIdentity:
    def test_special_value(self):
        assert branch_identity_residual(math.pi / 4, 1, math.pi / 4) < 1e-13

    def test_negative_argument(self):
        w = eval_real(-1.0, 1)
        assert branch_identity_residual(-1.0, 1, w) < 1e-12

    def test_higher_branch(self):
        w = eval_real(5.0, 3)
        assert branch_identity_residual(5.0, 3, w) < 1e-12

    def test_randomized_grid(self):
        rng = np.random.default_rng(23)
        for _ in range(200):
            x = float(rng.uniform(-20, 20)) or 0.5
            n = int(rng.integers(1, 5)) * (1 if rng.random() < 0.5 else -1)
            assert branch_identity_residual(x, n, eval_real(x, n)) < 1e-11
