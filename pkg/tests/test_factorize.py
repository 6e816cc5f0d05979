import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pshlab.errors import BlaschkeConditionError, DomainError, NonMemberError, UnsupportedFixtureError
from pshlab.factorize import (OuterFunction, ball_probe, blaschke_from_sequence, blaschke_product, deflate,
                              isometry_apply, isometry_inverse, isometry_report, outer_eval, split_zeros)
from pshlab.functions import Affine, Constant, Monomial, PowerBranch, Product, Sum
from pshlab.hardy import classical_norm, weighted_norm_boundary
from pshlab.kernels import poisson
from pshlab.measures import RieszMeasure
from pshlab.quadrature import integrate_circle

DELTA0 = RieszMeasure.atom(0.0)
DELTA05 = RieszMeasure.atom(0.5)

interior = st.builds(lambda r, t: r * complex(math.cos(t), math.sin(t)), st.floats(0.05, 0.9),
                     st.floats(-math.pi, math.pi))


def test_blaschke_product_examples():
    assert complex(blaschke_product([0.5]).eval(0.0)) == pytest.approx(0.5)
    z = np.array([0.3, -0.2 + 0.5j])
    np.testing.assert_allclose(blaschke_product([], 2).eval(z), z ** 2)
    th = 2 * np.pi * np.arange(1024) / 1024
    b = blaschke_product([0.5, -0.5j])
    assert np.max(np.abs(np.abs(b.boundary(th)) - 1)) <= 1e-12
    with pytest.raises(DomainError):
        blaschke_product([1.0])


def test_blaschke_sequence_condition():
    ok = blaschke_from_sequence(lambda j: 1 - 1 / j ** 2, 200)
    assert ok.decay_exponent == pytest.approx(2.0, rel=1e-3)
    assert ok.tail_mass == pytest.approx(1 / 200, rel=0.05)
    with pytest.raises(BlaschkeConditionError):
        blaschke_from_sequence(lambda j: 1 - 1 / (j + 1), 200)


def test_split_zeros():
    B, g = split_zeros(Affine(1, -0.5))
    assert B.zero_list == (0.5,)
    z = np.array([0.1 + 0.2j, -0.7])
    np.testing.assert_allclose(g.eval(z), -(1 - 0.5 * z), rtol=1e-14)
    B, g = split_zeros(Affine(1, 1))
    assert B.zero_list == () and B.origin_order == 0 and g == Affine(1, 1)
    B, _ = split_zeros(Product((Monomial(2), Affine(1, 0.5j))))
    assert B.origin_order == 2 and B.zero_list == (-0.5j,)
    with pytest.raises(UnsupportedFixtureError):
        split_zeros(Sum((Monomial(1), Constant(0.5))))


def test_deflate_examples():
    _, g, rep = deflate(Affine(1, -0.5), 2.0, DELTA0)
    assert classical_norm(g, 2.0).value ** 2 == pytest.approx(1.25, rel=1e-10)
    assert rep.norm_f.value ** 2 == pytest.approx(1.25, rel=1e-10)
    _, _, rep = deflate(Affine(1, -0.5), 2.0, RieszMeasure.atom(0.3))
    assert rep.relative_gap <= 1e-4 and rep.min_abs_g > 0


@pytest.mark.parametrize("p", [0.5, 1.0, 1.5])
def test_deflate_small_p(p):
    _, _, rep = deflate(Affine(1, -0.5), p, RieszMeasure.atom(0.3))
    assert rep.relative_gap <= 1e-3


@settings(max_examples=30, deadline=None)
@given(interior, interior)
def test_deflation_modulus_identity(a, z):
    f = Affine(1, -a)
    B, g = split_zeros(f)
    assert abs(complex(f.eval(z))) <= abs(complex(g.eval(z))) * (1 + 1e-12)
    th = np.linspace(-3, 3, 64)
    np.testing.assert_allclose(np.abs(f.boundary(th)), np.abs(g.boundary(th)), rtol=1e-10)


def test_outer_constant_densities():
    A = OuterFunction(DELTA0)
    z = np.array([0.0, 0.5j, -0.9])
    np.testing.assert_allclose(A.eval(z), 1.0, atol=1e-14)
    A3 = OuterFunction(RieszMeasure.atom(0.0, 3.0))
    np.testing.assert_allclose(A3.eval(z), 3.0, rtol=1e-14)


def test_outer_geometric_mean():
    for a in (0.5, 0.3 - 0.6j, 0.9):
        A = OuterFunction(RieszMeasure.atom(a))
        direct = integrate_circle(lambda t: np.log(poisson(a, t)), tol=1e-13,
                                  peaks=[(math.atan2(a.imag, a.real) if isinstance(a, complex) else 0.0, 1 - abs(a))])
        assert abs(complex(A.eval(0.0))) == pytest.approx(math.exp(direct.value), rel=1e-6)


def test_outer_series_matches_quadrature():
    A = OuterFunction(DELTA05 + RieszMeasure.radial_power(0.5))
    z = np.array([0.2 + 0.3j, -0.6, 0.8j])
    # the continuous part of log α keeps a cusp at θ = 0, so the FFT series is good to about 1e-8
    np.testing.assert_allclose(outer_eval(A, z, method="quadrature", tol=1e-12), outer_eval(A, z), rtol=1e-6)
    A0 = OuterFunction(DELTA05)
    np.testing.assert_allclose(outer_eval(A0, z, method="quadrature", tol=1e-12), outer_eval(A0, z), rtol=1e-11)
    with pytest.raises(DomainError):
        outer_eval(A, 1.0)


def test_outer_radial_limit():
    A = OuterFunction(DELTA05)
    th = 2 * np.pi * np.arange(256) / 256
    alpha = poisson(0.5, th)
    gaps = [np.max(np.abs(np.abs(A.eval(r * np.exp(1j * th))) - alpha)) for r in (0.9, 0.99, 0.999)]
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] <= 1e-2


def test_isometry_examples():
    f = Affine(1, 1)
    F = isometry_apply(f, 2.0, DELTA0)
    z = np.array([0.1, 0.4 - 0.3j])
    np.testing.assert_allclose(F.eval(z), f.eval(z), rtol=1e-13)
    nu = RieszMeasure.atom(0.3, 2.5)
    assert classical_norm(isometry_apply(Constant(1.0), 2.0, nu), 2.0).value == pytest.approx(math.sqrt(2.5),
                                                                                             rel=1e-8)
    rep = isometry_report(f, 2.0, DELTA05)
    assert rep.relative_gap <= 1e-3
    assert rep.round_trip_error <= 1e-10
    with pytest.raises(NonMemberError):
        isometry_apply(PowerBranch(0.3), 2.0, RieszMeasure.radial_power(0.5))


@settings(max_examples=20, deadline=None)
@given(interior, st.sampled_from([1.0, 1.5, 2.0, 3.0]))
def test_isometry_round_trip(z, p):
    A = OuterFunction(DELTA05)
    f = Affine(1, 0.3)
    back = isometry_inverse(isometry_apply(f, p, DELTA05, A, check_membership=False), p, DELTA05, A)
    assert complex(back.eval(z)) == pytest.approx(complex(f.eval(z)), rel=1e-10)


def test_isometry_boundary_identity():
    # |Φf*|^p = |f*|^p α, so classical and weighted norms agree for p = 1.5
    nu = RieszMeasure.atom(0.4j)
    F = isometry_apply(Affine(1, 1), 1.5, nu)
    assert classical_norm(F, 1.5).value == pytest.approx(weighted_norm_boundary(Affine(1, 1), 1.5, nu).value,
                                                         rel=1e-6)


def test_probe_examples():
    rep = ball_probe(Constant(1.2), 2.0, [0.5, 0.9])
    np.testing.assert_allclose(rep.values, 1.44, rtol=1e-12)
    assert rep.witness == 0.5
    rep = ball_probe(Affine(0.9, 0.0), 2.0, [0.9, 0.99, 0.999, 0.9999])
    assert rep.certified and rep.maximum <= 1 + 1e-10
    rep = ball_probe(Affine(1, 0.5), 2.0, [0.9, 0.99, 0.999, 0.9999])
    assert np.all(np.diff(rep.values) > 0) and rep.values[-1] < 2.25
    assert rep.values[-1] == pytest.approx(2.25, abs=1e-3)
    assert rep.witness == 0.9
    with pytest.raises(DomainError):
        ball_probe(Constant(1.0), 2.0, [1.0])


@settings(max_examples=20, deadline=None)
@given(st.floats(0.01, 0.999), st.floats(-math.pi, math.pi))
def test_probe_witness_has_unit_mass(t, ang):
    assert ball_probe(Constant(1.0), 2.0, [t], angle=ang).values[0] == pytest.approx(1.0, abs=1e-10)
