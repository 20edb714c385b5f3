"""Fractional integral/derivative contracts, oracles, and structural laws.

Analytic oracles: the one-sided fractional integral and derivative of
exp(lam*s) are lam^{-a} exp(lam*s) and lam^{a} exp(lam*s); conjugation
transports the identity to every profile.  Quadrature cross-checks use
scipy.integrate.quad on the classical (conjugated) integral, which is
independent of the graded-mesh engine under test.
"""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from subjtime.corpus import (DampedExponential, GaussianPacket,
                             standard_packet, standard_profiles)
from subjtime.geometry import GridFunction
from subjtime.operators import (FracOrder, TailEnvelopeError, first_order,
                                left_inverse_check, weyl_derivative_marchaud,
                                weyl_derivative_rl, weyl_integral)
from subjtime.quadrature import QuadratureSpec

Q = QuadratureSpec()
PROFILES = standard_profiles()


def eval_points(profile, packet, n=7, half_width=1.0):
    s = np.linspace(packet.center - half_width, packet.center + half_width, n)
    return np.asarray(profile.psi_inv(s), dtype=float)


class TestWeylIntegral:
    def test_classical_exponential_identity(self):
        p = PROFILES["linear_unit"]
        f = DampedExponential(p, 1.0)
        v = weyl_integral(0.5, f, p, 0.0, Q, support=f.support_for(0.0))
        assert v.real == pytest.approx(1.0, rel=1e-10)

    def test_classical_rate_two(self):
        p = PROFILES["linear_unit"]
        f = DampedExponential(p, 2.0)
        v = weyl_integral(0.5, f, p, 0.0, Q, support=f.support_for(0.0))
        assert v.real == pytest.approx(2.0 ** -0.5, rel=1e-10)

    def test_scipy_quad_cross_check(self):
        # independent singular-weight quadrature of the classical integral,
        # int_0^X s^(a-1) exp(t-s) ds / Gamma(a)
        a, t = 0.7, 0.4
        ref, ref_err = quad(lambda s: math.exp(t - s) / math.gamma(a),
                            0.0, 40.0, weight="alg", wvar=(a - 1.0, 0.0))
        assert ref_err < 1e-7
        p = PROFILES["linear_unit"]
        f = DampedExponential(p, 1.0)
        v = weyl_integral(a, f, p, t, Q, support=f.support_for(t))
        assert v.real == pytest.approx(ref, rel=1e-7)

    def test_eigen_identity_every_profile(self):
        lam = 1.0
        for name, p in PROFILES.items():
            f = DampedExponential(p, lam)
            t = float(p.psi_inv(p.range_inf + 50.0)) \
                if math.isfinite(p.range_inf) else 1.0
            x = float(p.psi(t))
            for a in (0.3, 0.8, 1.3):
                v = weyl_integral(a, f, p, t, Q, support=f.support_for(x, 1e-16))
                assert abs(v - lam ** (-a) * complex(f(t))) / abs(f(t)) < 1e-8, \
                    (name, a)

    def test_requires_envelope_for_callables(self):
        p = PROFILES["linear_unit"]
        with pytest.raises(TailEnvelopeError):
            weyl_integral(0.5, lambda t: np.exp(-np.asarray(t) ** 2), p, 0.0, Q)

    def test_rejects_nonpositive_order(self):
        p = PROFILES["linear_unit"]
        pk = standard_packet(p)
        with pytest.raises(ValueError):
            weyl_integral(0.0, pk, p, 0.0, Q)

    def test_before_support_is_zero(self):
        p = PROFILES["linear_unit"]
        pk = GaussianPacket(p, center=5.0, width=0.3)
        assert weyl_integral(0.5, pk, p, -5.0, Q) == 0.0


class TestMarchaudDerivative:
    def test_constant_weighted_state_is_zero(self):
        # omega*f constant: the difference quotient vanishes identically
        p = PROFILES["exp_weight"]
        f = lambda t: 1.0 / np.asarray(p.omega(t), dtype=float)
        v = weyl_derivative_marchaud(0.5, f, p, 0.4, Q, support=(-60.0, 10.0),
                                     difference_decays=True)
        assert abs(v) < 1e-12

    def test_normalization_constant(self):
        assert 0.5 / math.gamma(0.5) == pytest.approx(0.2820947917738781,
                                                      rel=1e-13)

    def test_eigen_identity_every_profile(self):
        lam = 1.0
        for name, p in PROFILES.items():
            f = DampedExponential(p, lam)
            t = float(p.psi_inv(p.range_inf + 50.0)) \
                if math.isfinite(p.range_inf) else 1.0
            x = float(p.psi(t))
            for a in (0.3, 0.8):
                v = weyl_derivative_marchaud(a, f, p, t, Q,
                                             support=f.support_for(x, 1e-16))
                assert abs(v - lam ** a * complex(f(t))) / abs(f(t)) < 1e-8, \
                    (name, a)

    def test_complex_rate_windowed(self):
        p = PROFILES["linear_unit"]
        lam = 0.5 + 2.0j
        f = DampedExponential(p, lam)
        for a in (0.5, 0.8):
            v = weyl_derivative_marchaud(a, f, p, 1.0, Q,
                                         support=f.support_for(1.0, 1e-16))
            ref = lam ** a * complex(f(1.0))
            assert abs(v - ref) / abs(ref) < 1e-10

    def test_rejects_degenerate_orders(self):
        p = PROFILES["linear_unit"]
        pk = standard_packet(p)
        for a in (0.0, 1.0):
            with pytest.raises(ValueError):
                weyl_derivative_marchaud(a, pk, p, 0.0, Q)


class TestRLForm:
    def test_agrees_with_marchaud_on_corpus(self):
        worst = 0.0
        for name, p in PROFILES.items():
            pk = standard_packet(p, width=0.5)
            for a in (0.3, 0.8):
                scale = 0.0
                for t in eval_points(p, pk, n=5):
                    m = weyl_derivative_marchaud(a, pk, p, float(t), Q)
                    r = weyl_derivative_rl(a, pk, p, float(t), Q)
                    scale = max(scale, abs(m))
                    worst = max(worst, abs(m - r))
                assert worst / scale < 1e-5, (name, a)

    def test_eigen_identity(self):
        p = PROFILES["exp_weight"]
        f = DampedExponential(p, 1.0)
        v = weyl_derivative_rl(0.5, f, p, 0.5, Q, support=f.support_for(0.5, 1e-16))
        assert abs(v - complex(f(0.5))) / abs(f(0.5)) < 1e-7

    def test_close_to_first_order_as_alpha_to_one(self):
        p = PROFILES["linear_unit"]
        pk = standard_packet(p, width=1.0)
        t = 0.3
        d_frac = weyl_derivative_rl(0.999, pk, p, t, Q)
        d_one = first_order(pk, p, t)
        assert abs(d_frac - d_one) / abs(d_one) < 1e-2


class TestFirstOrder:
    def test_plain_derivative(self):
        p = PROFILES["linear_unit"]
        v = first_order(lambda t: np.asarray(t, dtype=float) ** 2, p, 3.0)
        assert v.real == pytest.approx(6.0, rel=1e-9)

    def test_inverse_weight_is_annihilated(self):
        p = PROFILES["exp_weight"]
        f = lambda t: 1.0 / np.asarray(p.omega(t), dtype=float)
        assert abs(first_order(f, p, 1.0)) < 1e-9

    def test_chain_rule_eigenfunction(self):
        p = PROFILES["exp_scale"]
        f = DampedExponential(p, 0.7)
        t = 1.2
        v = first_order(f, p, t)
        assert abs(v - 0.7 * complex(f(t))) / abs(f(t)) < 1e-8


class TestLeftInverse:
    def test_identity_on_corpus(self):
        for name, p in PROFILES.items():
            pk = standard_packet(p, width=0.5)
            grid = eval_points(p, pk, n=7)
            err = left_inverse_check(0.5, pk, p, grid, Q)
            assert err < 1e-5, name

    def test_exponential_geometry(self):
        p = PROFILES["exp_scale"]
        pk = standard_packet(p, width=0.5)
        grid = eval_points(p, pk, n=7)
        assert left_inverse_check(0.8, pk, p, grid, Q) < 1e-4

    def test_zero_function(self):
        p = PROFILES["linear_unit"]

        class Zero:
            subjective_support = (-5.0, 5.0)

            def __call__(self, t):
                return np.zeros_like(np.asarray(t, dtype=float))

            def conjugated(self, s):
                return np.zeros_like(np.asarray(s, dtype=float))

        err = left_inverse_check(0.5, Zero(), p, np.linspace(-1, 1, 5), Q)
        assert err == 0.0


class TestStructuralLaws:
    def test_semigroup(self):
        p = PROFILES["linear_unit"]
        pk = standard_packet(p, width=0.7)
        inner_q = Q.tightened()
        for a, b in ((0.3, 0.4), (0.5, 0.5)):
            for t in (-0.5, 0.5):
                class Inner:
                    subjective_support = (pk.subjective_support[0], math.inf)

                    def __call__(self, tau):
                        tau = np.asarray(tau, dtype=float)
                        if tau.ndim == 0:
                            return weyl_integral(a, pk, p, float(tau), inner_q)
                        return np.array(
                            [weyl_integral(a, pk, p, float(tk), inner_q)
                             for tk in tau.ravel()]).reshape(tau.shape)

                nested = weyl_integral(b, Inner(), p, t, Q)
                direct = weyl_integral(a + b, pk, p, t, Q)
                assert abs(nested - direct) / abs(direct) < 1e-5

    def test_linearity(self):
        p = PROFILES["exp_scale"]
        pk1 = standard_packet(p, width=0.5)
        pk2 = standard_packet(p, width=0.8)
        ca, cb = 1.7, -0.6 + 0.3j
        lo = min(pk1.subjective_support[0], pk2.subjective_support[0])
        hi = max(pk1.subjective_support[1], pk2.subjective_support[1])
        t = float(p.psi_inv(pk1.center))

        class Mix:
            subjective_support = (lo, hi)

            def __call__(self, tau):
                return ca * pk1(tau) + cb * pk2(tau)

            def conjugated(self, s):
                return ca * pk1.conjugated(s) + cb * pk2.conjugated(s)

        for op in (lambda f, sup: weyl_integral(0.7, f, p, t, Q, support=sup),
                   lambda f, sup: weyl_derivative_marchaud(0.4, f, p, t, Q,
                                                           support=sup)):
            lhs = op(Mix(), (lo, hi))
            rhs = ca * op(pk1, (lo, hi)) + cb * op(pk2, (lo, hi))
            assert abs(lhs - rhs) / abs(lhs) < 1e-10

    def test_gridfunction_input(self):
        # grid-sampled state evaluated against the closed-form callable
        p = PROFILES["exp_weight"]
        pk = standard_packet(p, width=0.6)
        from subjtime.corpus import packet_grid
        g = GridFunction.from_callable(pk, packet_grid(pk, n=4097))
        t = 0.4
        direct = weyl_derivative_marchaud(0.6, pk, p, t, Q)
        gridded = weyl_derivative_marchaud(0.6, g, p, t, Q)
        assert abs(direct - gridded) / abs(direct) < 1e-4


def test_frac_order_carrier():
    assert FracOrder(0.5).alpha == 0.5
    with pytest.raises(ValueError):
        FracOrder(-0.1)
    p = PROFILES["linear_unit"]
    f = DampedExponential(p, 1.0)
    v = weyl_integral(FracOrder(0.5), f, p, 0.0, Q, support=f.support_for(0.0))
    assert v.real == pytest.approx(1.0, rel=1e-10)
