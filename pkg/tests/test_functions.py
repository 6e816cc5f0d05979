import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from pshlab.config import parse_function
from pshlab.errors import DomainError, NotNonvanishingError
from pshlab.functions import (AbsHarmonicPower, AbsPower, Affine, Blaschke, Constant, Mobius, Monomial,
                              PoissonExtension, Power, PowerBranch, Product, ProductDensity, RadialPolynomialDensity,
                              RealPart, Sum, laplacian_abs_p, taylor_partial_sum)

FLEET = ["z", "mono 3", "affine 1 0.5", "affine 2 -1", "poly 1 -0.5 0.25", "mobius 1 0.3 0.5 2",
         "pow 0.2", "pow 0.7 1.5", "taylor 0.3 6", "blaschke 1 0.5 -0.3+0.4j", "mul (z) (pow 0.4)",
         "add (affine 1 1) (mono 2)", "scale 0.9 z", "rpow 0.5 (affine 0.5 1)", "const 2-1j"]

interior = st.builds(lambda r, t: r * complex(math.cos(t), math.sin(t)), st.floats(0.0, 0.9),
                     st.floats(-math.pi, math.pi))


def _fd_laplacian(fun, z, h=1e-4):
    return (fun(z + h) + fun(z - h) + fun(z + 1j * h) + fun(z - 1j * h) - 4 * fun(z)) / (h * h)


@pytest.mark.parametrize("expr", FLEET)
def test_expression_round_trip(expr):
    f = parse_function(expr)
    g = parse_function(f.to_expr())
    assert g.to_expr() == f.to_expr()
    z = np.array([0.1 + 0.2j, -0.5j, 0.7])
    np.testing.assert_allclose(g.eval(z), f.eval(z), rtol=1e-15)


@pytest.mark.parametrize("expr", FLEET)
def test_derivative_matches_finite_differences(expr):
    f = parse_function(expr)
    z, h = 0.3 - 0.25j, 1e-6
    fd = (f.eval(z + h) - f.eval(z - h)) / (2 * h)
    assert complex(f.deriv(z)) == pytest.approx(complex(fd), rel=1e-7, abs=1e-8)


@pytest.mark.parametrize("expr", ["affine 1 0.5", "pow 0.2", "blaschke 1 0.5", "mobius 1 0.3 0.5 2"])
@pytest.mark.parametrize("p", [1.0, 2.0, 3.0])
def test_laplacian_abs_p_matches_finite_differences(expr, p):
    f = parse_function(expr)
    z = -0.2 + 0.35j
    fd = _fd_laplacian(lambda w: abs(complex(f.eval(w))) ** p, z) / (2 * math.pi)
    assert laplacian_abs_p(f, p, z) == pytest.approx(fd, rel=1e-5)


def test_density_laplacians_match_finite_differences():
    z = 0.4 + 0.1j
    h = RealPart(Affine(1, 0.2))
    cases = [AbsHarmonicPower(h, 3.0), RadialPolynomialDensity((1.0, -2.0, 0.5)),
             ProductDensity(AbsPower(Affine(1, 1), 2.0), RadialPolynomialDensity((0.0, 1.0)))]
    for phi in cases:
        fd = _fd_laplacian(lambda w: float(np.real(phi.value(np.array([w]))[0])), z) / (2 * math.pi)
        assert float(np.asarray(phi.laplacian(np.array([z])))[0]) == pytest.approx(fd, rel=1e-5)


def test_laplacian_at_zero():
    f = Affine(1, -0.5)
    assert laplacian_abs_p(f, 2.0, 0.5) == pytest.approx(4 / (2 * math.pi))
    assert laplacian_abs_p(f, 1.0, 0.5) == 0.0


def test_taylor_coefficients():
    a, n = 0.3, 10
    poly = taylor_partial_sum(a, n)
    expect = [special.binom(k + a - 1, k) for k in range(n + 1)]
    np.testing.assert_allclose(np.real(poly.coeffs), expect, rtol=1e-14)
    assert complex(poly.eval(0.2)) == pytest.approx((1 - 0.2) ** -a, rel=1e-7)


def test_power_branch_values_and_singularity():
    f = PowerBranch(0.2)
    assert complex(f.eval(0.5)) == pytest.approx(0.5 ** -0.2)
    assert f.singularities() == ((0.0, 0.2),)
    assert f.boundary(0.0) == complex(np.inf, 0.0)
    # finite just off the singular angle, including tiny angles
    assert np.isfinite(f.boundary(1e-300))
    rot = PowerBranch(0.5, 1.0)
    assert complex(rot.eval(0.3j)) == pytest.approx((1 - np.exp(-1j) * 0.3j) ** -0.5)


def test_blaschke_product():
    b = Blaschke((0.5, -0.3 + 0.4j), 2)
    th = np.linspace(-3, 3, 101)
    np.testing.assert_allclose(np.abs(b.boundary(th)), 1.0, atol=1e-13)
    assert sorted(abs(w) for w in b.zeros()) == pytest.approx([0, 0, 0.5, 0.5])
    assert abs(complex(b.eval(0.5))) == 0.0
    with pytest.raises(DomainError):
        Blaschke((1.2,))
    with pytest.raises(DomainError):
        Blaschke((0.0,))


def test_zeros_and_nonvanishing():
    assert Affine(1, -0.5).zeros() == [0.5]
    assert Affine(1, 1).zeros() == []
    assert Affine(1, 1).is_nonvanishing()
    assert not Monomial(1).is_nonvanishing()
    assert PowerBranch(0.3).is_nonvanishing()
    assert Product((Affine(1, -0.5), Affine(1, 0.5j))).zeros() == [0.5, -0.5j]
    assert Sum((Monomial(1), Constant(1.0))).zeros() is None


def test_real_power_needs_nonvanishing_base():
    with pytest.raises(NotNonvanishingError):
        Power(Affine(1, -0.5), 0.5)
    f = Power(Affine(1, 2), 0.5)
    assert complex(f.eval(0.5)) == pytest.approx(math.sqrt(2.5))


def test_mobius_validation():
    with pytest.raises(DomainError):
        Mobius(1, 0, 2, 1)
    with pytest.raises(DomainError):
        Mobius(1, 1, 1, 1)
    assert Mobius(1, 0, -1, 1).singularities() == ((0.0, 1.0),)


def test_singularities_combine():
    f = Product((PowerBranch(0.2), PowerBranch(0.3)))
    assert f.singularities() == ((0.0, pytest.approx(0.5)),)
    g = Sum((PowerBranch(0.2), PowerBranch(0.3)))
    assert g.singularities() == ((0.0, 0.3),)


def test_poisson_extension_reproduces_trig_samples():
    n = 64
    th = 2 * np.pi * np.arange(n) / n
    samples = 1 + np.cos(th) - 0.5 * np.sin(3 * th)
    h = PoissonExtension(samples)
    z = 0.4 * np.exp(0.7j)
    expect = 1 + (z).real - 0.5 * (z ** 3).imag
    assert float(h.eval(z)) == pytest.approx(expect, abs=1e-13)


@settings(max_examples=40, deadline=None)
@given(interior, interior)
def test_product_is_pointwise(z, a):
    f = Product((Affine(1, -a), PowerBranch(0.4)))
    assert complex(f.eval(z)) == pytest.approx(complex((z - a) * (1 - z) ** -0.4), rel=1e-12, abs=1e-14)


@settings(max_examples=40, deadline=None)
@given(interior, st.floats(-2, 2))
def test_log_branch_is_consistent(z, q):
    f = Power(PowerBranch(0.6) * Affine(1, 2), q)
    base = complex((1 - z) ** -0.6 * (z + 2))
    assert abs(complex(f.eval(z))) == pytest.approx(abs(base) ** q, rel=1e-12)
