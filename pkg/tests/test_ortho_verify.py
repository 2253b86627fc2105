import math

import pytest
from scipy import integrate
from scipy import special as sc

from macdonald import (
    ConvergenceError,
    DomainError,
    NearDiagonalError,
    PairSpec,
    QuadratureSpec,
    RangeError,
    TestFunctionSpec,
    arg_gamma_imag,
    asymptotic_envelope,
    delta_model,
    diagonal_limit,
    kernel_asymptotic,
    kernel_boundary,
    kernel_quadrature,
    kl_weight,
    phase_function,
    weak_limit_test,
)

import oracles


class TestKernelBoundary:
    def test_swap_symmetry_bitwise(self):
        a = kernel_boundary(PairSpec(1.0, 2.0, 0.1)).value
        b = kernel_boundary(PairSpec(2.0, 1.0, 0.1)).value
        assert a == b

    def test_deep_tail_bound(self):
        v = kernel_boundary(PairSpec(1.0, 2.0, 20.0)).value
        assert abs(v) <= (math.pi / 40.0) * math.exp(-40.0)

    def test_matches_quadrature(self):
        b = kernel_boundary(PairSpec(1.0, 2.0, 0.1)).value
        q = kernel_quadrature(PairSpec(1.0, 2.0, 0.1)).value
        assert abs(b - q) <= 1e-8

    def test_near_diagonal_redirected(self):
        with pytest.raises(NearDiagonalError):
            kernel_boundary(PairSpec(1.0, 1.0 + 1e-9, 0.1))


class TestKernelQuadrature:
    def test_diagonal_nonnegative(self):
        assert kernel_quadrature(PairSpec(1.0, 1.0, 0.5)).value >= 0.0

    def test_tail_regime(self):
        for nu, nup in [(0.5, 1.0), (1.0, 3.0)]:
            v = kernel_quadrature(PairSpec(nu, nup, 10.0)).value
            assert abs(v) <= (math.pi / 40.0) * math.exp(-20.0)

    def test_identity_grid(self):
        # the integration-by-parts identity, over a representative grid
        for nu, nup in [(0.5, 1.0), (1.0, 5.0), (2.0, 5.0)]:
            for xi in (1e-3, 0.1, 1.0):
                pair = PairSpec(nu, nup, xi)
                b = kernel_boundary(pair).value
                q = kernel_quadrature(pair).value
                assert abs(b - q) <= 1e-8 + 1e-8 * abs(b), (nu, nup, xi)

    @pytest.mark.filterwarnings("ignore::UserWarning")
    @pytest.mark.filterwarnings("ignore:.*roundoff error.*")
    def test_tight_budget_raises(self):
        spec = QuadratureSpec(abs_tol=1e-16, rel_tol=1e-16)
        with pytest.raises(ConvergenceError) as exc_info:
            kernel_quadrature(PairSpec(1.0, 2.0, 1e-3), spec)
        assert exc_info.value.estimate is not None


class TestKernelAsymptotic:
    def test_prefactor_on_diagonal_form(self):
        # at nu = nu' = 1 the prefactor reduces to pi/(2 sinh pi); probe it
        # through the reflected term of a nearly diagonal pair
        pair = PairSpec(1.0, 1.0 + 1e-6, 1e-3)
        lg = math.log(pair.xi / 2.0)
        g1 = arg_gamma_imag(pair.nu)
        g2 = arg_gamma_imag(pair.nu_prime)
        v = kernel_asymptotic(pair).value
        first = math.sin(-(pair.nu - pair.nu_prime) * lg + g1 - g2) / (pair.nu - pair.nu_prime)
        second = math.sin(-(pair.nu + pair.nu_prime) * lg + g1 + g2) / (pair.nu + pair.nu_prime)
        prefactor = v / (first + second)
        assert prefactor == pytest.approx(math.pi / (2.0 * math.sinh(math.pi)), rel=1e-4)

    def test_swap_symmetry(self):
        a = kernel_asymptotic(PairSpec(1.0, 1.5, 1e-3)).value
        b = kernel_asymptotic(PairSpec(1.5, 1.0, 1e-3)).value
        assert a == pytest.approx(b, rel=1e-14)

    def test_agrees_with_boundary_at_small_xi(self):
        pair = PairSpec(1.0, 1.5, 1e-4)
        diff = abs(kernel_asymptotic(pair).value - kernel_boundary(pair).value)
        assert diff <= 20.0 * 1e-8  # C * xi^2 with a generous constant

    def test_envelope_shrinks_fourfold(self):
        e1 = asymptotic_envelope(1.0, 1.5, 1e-3)
        e2 = asymptotic_envelope(1.0, 1.5, 5e-4)
        assert e1 / e2 == pytest.approx(4.0, rel=0.25)

    def test_range_guard(self):
        with pytest.raises(RangeError):
            kernel_asymptotic(PairSpec(1.0, 1.5, 0.2))


class TestPhaseFunction:
    def test_zero_at_origin_exact(self):
        assert phase_function(1.0, 0.0) == 0.0

    def test_half_step_value(self):
        expected = oracles.ARG_GAMMA_I - oracles.ARG_GAMMA_HALF_I
        assert phase_function(1.0, 0.5) == pytest.approx(expected, rel=1e-12)

    def test_finite_slope(self):
        for eta in (-0.3, -0.1, 0.1, 0.3):
            assert abs(phase_function(1.0, eta) / eta) < 5.0

    def test_continuity_across_sweep(self):
        # unwrapped values change smoothly even where principal args wrap
        vals = [phase_function(5.0, eta) for eta in [i / 100 for i in range(-450, 451, 5)]]
        steps = [abs(b - a) for a, b in zip(vals, vals[1:])]
        assert max(steps) < 0.5

    def test_domain_guard(self):
        with pytest.raises(DomainError):
            phase_function(1.0, 1.5)


class TestDeltaModel:
    def test_zero_of_sine(self):
        assert delta_model(math.pi, 1.0) == pytest.approx(0.0, abs=1e-15)

    def test_removable_singularity(self):
        assert delta_model(2.0, 0.0) == pytest.approx(2.0 / math.pi, rel=1e-14)

    def test_unit_mass_via_sine_integral(self):
        a = 100.0
        v, _ = integrate.quad(
            lambda e: delta_model(a, e), -1.0, 1.0, points=[0.0], limit=400, epsabs=1e-12
        )
        si, _ = sc.sici(a)
        assert v == pytest.approx(2.0 / math.pi * si, abs=1e-8)

    def test_phase_perturbed_removable_value(self):
        f = lambda eta: phase_function(1.0, eta)
        h = 1e-6
        fp0 = (f(h) - f(-h)) / (2 * h)
        assert delta_model(3.0, 0.0, f) == pytest.approx((3.0 + fp0) / math.pi, rel=1e-12)

    def test_normalization_against_bump(self):
        f = lambda eta: phase_function(1.0, eta)
        phi = TestFunctionSpec("gaussian-bump", 0.1, 0.25)
        errs = []
        for xi in (1e-2, 1e-4, 1e-6):
            a = -math.log(xi / 2.0)
            v, _ = integrate.quad(
                lambda e: delta_model(a, e, f) * phi(e),
                -0.9,
                0.9,
                points=[0.0],
                limit=400,
                epsabs=1e-11,
            )
            errs.append(abs(v - phi(0.0)) / phi(0.0))
        assert errs[0] > errs[1] > errs[2]
        assert errs[2] < 0.02


class TestDiagonalLimit:
    def test_equals_quadrature(self):
        d = diagonal_limit(1.0, 0.3)
        q = kernel_quadrature(PairSpec(1.0, 1.0, 0.3)).value
        assert d == pytest.approx(q, abs=1e-6)

    def test_near_diagonal_continuity(self):
        d = diagonal_limit(1.0, 0.3)
        nb = kernel_boundary(PairSpec(1.0, 1.0 + 1e-5, 0.3)).value
        assert nb == pytest.approx(d, abs=1e-4)

    def test_logarithmic_growth(self):
        xi = 1e-8
        ratio = diagonal_limit(1.0, xi) / (kl_weight(1.0) * (-math.log(xi / 2.0) / math.pi))
        assert ratio == pytest.approx(1.0, abs=0.1)


class TestTestFunctionSpec:
    def test_center_value_is_one(self):
        assert TestFunctionSpec("gaussian-bump", 1.0, 0.2)(1.0) == 1.0
        assert TestFunctionSpec("smooth-compact-bump", 1.0, 0.5)(1.0) == 1.0

    def test_compact_support(self):
        phi = TestFunctionSpec("smooth-compact-bump", 1.0, 0.5)
        assert phi(0.4) == 0.0
        assert phi(1.6) == 0.0

    def test_bad_kind_rejected(self):
        with pytest.raises(DomainError):
            TestFunctionSpec("triangle", 1.0, 0.2)

    def test_mass_fraction(self):
        phi = TestFunctionSpec("gaussian-bump", 1.0, 0.2)
        assert phi.mass_fraction_outside_positive_axis() < 1e-6


class TestWeakLimit:
    def test_convergence_run(self):
        phi = TestFunctionSpec("gaussian-bump", 1.0, 0.2)
        rep = weak_limit_test(1.0, [1e-2, 1e-3, 1e-4, 1e-6], phi)
        assert rep.target == pytest.approx(kl_weight(1.0), rel=1e-14)
        # monotone decrease, allowing one backstep below 10%
        backsteps = [
            later / earlier - 1.0
            for earlier, later in zip(rep.errors, rep.errors[1:])
            if later > earlier
        ]
        assert len(backsteps) <= 1 and all(b < 0.1 for b in backsteps)
        assert rep.errors[-1] / rep.target < 0.05

    def test_target_weight_value(self):
        phi = TestFunctionSpec("gaussian-bump", 1.0, 0.2)
        rep = weak_limit_test(1.0, [1e-2], phi)
        assert rep.target == pytest.approx(math.pi**2 / (2.0 * math.sinh(math.pi)), rel=1e-14)

    def test_reflected_term_small(self):
        phi = TestFunctionSpec("gaussian-bump", 1.0, 0.2)
        rep = weak_limit_test(1.0, [1e-2, 1e-4], phi)
        assert rep.reflected_term_bound < 1e-2 * rep.target

    def test_a_sequence_reported(self):
        phi = TestFunctionSpec("gaussian-bump", 1.0, 0.2)
        rep = weak_limit_test(1.0, [1e-2, 1e-4], phi)
        assert rep.a_sequence == tuple(-math.log(x / 2.0) for x in rep.xi_sequence)

    def test_non_decreasing_sequence_rejected(self):
        phi = TestFunctionSpec("gaussian-bump", 1.0, 0.2)
        with pytest.raises(DomainError):
            weak_limit_test(1.0, [1e-4, 1e-2], phi)

    def test_support_mass_guard(self):
        phi = TestFunctionSpec("gaussian-bump", 0.1, 0.25)  # heavy mass below 0
        with pytest.raises(DomainError):
            weak_limit_test(1.0, [1e-2], phi)
