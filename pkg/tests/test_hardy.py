import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pshlab.errors import DomainError
from pshlab.functions import (AbsPower, Affine, Constant, ConstantDensity, HarmonicDensity, Mobius, Monomial,
                              PowerBranch, RadialPolynomialDensity, RealPart)
from pshlab.hardy import (DEFAULT_R_GRID, boundary_integral, circle_means, classical_norm, demailly_functional,
                          harmonic_norm, membership, norm_report, partial_density, weak_star_gap,
                          weighted_norm_boundary, weighted_norm_interior)
from pshlab.kernels import poisson
from pshlab.measures import RieszMeasure, boundary_density, total_mass
from scipy import special

DELTA0 = RieszMeasure.atom(0.0)
DELTA05 = RieszMeasure.atom(0.5)
U05 = RieszMeasure.radial_power(0.5)
ABS_Z2 = RadialPolynomialDensity((0.0, 1.0))
H_MOB = RealPart(Mobius(1, 0, -0.8, 1))

atoms = st.lists(st.tuples(st.floats(0, 0.9), st.floats(-math.pi, math.pi), st.floats(0.1, 3.0)),
                 min_size=1, max_size=2).map(
    lambda xs: RieszMeasure(tuple((r * complex(math.cos(t), math.sin(t)), m) for r, t, m in xs)))


def test_classical_norm_examples():
    assert classical_norm(Monomial(1), 2.0).value == pytest.approx(1.0, rel=1e-12)
    assert classical_norm(Affine(1, 1), 2.0).value == pytest.approx(math.sqrt(2), rel=1e-12)
    # |1 - e^{iθ}|^{-0.6} has mean Γ(0.4)/Γ(0.7)^2
    oracle = math.sqrt(special.gamma(0.4) / special.gamma(0.7) ** 2)
    assert classical_norm(PowerBranch(0.3), 2.0).value == pytest.approx(oracle, rel=1e-6)
    assert classical_norm(PowerBranch(0.6), 2.0).divergent


def test_circle_means_increase_to_classical_norm():
    f = PowerBranch(0.2)
    m = circle_means(f, 2.0, [0.5, 0.9, 0.99, 0.999])
    assert np.all(np.diff(m) > 0)
    assert m[-1] < classical_norm(f, 2.0).value


def test_weighted_boundary_examples():
    for f in (Monomial(1), Affine(1, 1), PowerBranch(0.2)):
        assert weighted_norm_boundary(f, 2.0, DELTA0).value == pytest.approx(classical_norm(f, 2.0).value, rel=1e-10)
    for nu in (DELTA05, U05):
        assert weighted_norm_boundary(Constant(2.0), 2.0, nu).value == pytest.approx(
            2.0 * math.sqrt(total_mass(nu)), rel=1e-9)
    r = weighted_norm_boundary(PowerBranch(0.3), 2.0, U05)
    assert r.divergent and r.exponent == pytest.approx(1.1)
    with pytest.raises(DomainError):
        weighted_norm_boundary(Monomial(1), 0.0, DELTA0)


def test_weighted_interior_examples():
    assert weighted_norm_interior(Monomial(1), 2.0, DELTA0).value == pytest.approx(1.0, rel=1e-9)
    assert weighted_norm_interior(Constant(3.0), 2.0, DELTA05).value == pytest.approx(3.0, rel=1e-12)
    rep = norm_report(Affine(1, 1), 2.0, DELTA05)
    assert rep.agreement_gap <= 1e-4
    assert rep.classical_value.value == pytest.approx(math.sqrt(2))
    assert weighted_norm_interior(PowerBranch(0.3), 2.0, U05).divergent


def test_harmonic_norm_examples():
    assert harmonic_norm(RealPart(Constant(2.0)), 2.0, DELTA05).value == pytest.approx(2.0, rel=1e-10)
    assert harmonic_norm(RealPart(Monomial(1)), 2.0, DELTA0).value == pytest.approx(math.sqrt(0.5), rel=1e-10)
    rep = harmonic_norm(H_MOB, 2.0, DELTA05, interior=True)
    assert rep.agreement_gap <= 1e-3
    with pytest.raises(DomainError):
        harmonic_norm(H_MOB, 1.0, DELTA05)


def test_demailly_examples():
    for rho in (0.3, 0.7):
        assert demailly_functional(DELTA0, math.log(rho), ABS_Z2).value == pytest.approx(rho * rho, rel=1e-8)
    for r in (-2.0, -0.1):
        assert demailly_functional(DELTA0, r, ConstantDensity(1.0)).value == pytest.approx(1.0, rel=1e-12)
    with pytest.raises(DomainError):
        demailly_functional(DELTA0, 0.0, ABS_Z2)


def test_demailly_monotone_toward_boundary_value():
    res = [demailly_functional(DELTA05, r, ABS_Z2) for r in (-1.0, -0.5, -0.1, -0.01)]
    v = np.array([x.value for x in res])
    e = np.array([x.error_estimate for x in res])
    assert np.all(v[1:] - v[:-1] >= -2 * (e[1:] + e[:-1]))
    assert boundary_integral(ABS_Z2, DELTA05).value == pytest.approx(1.0, rel=1e-12)
    assert abs(v[-1] - 1.0) < abs(v[0] - 1.0)


def test_demailly_radial_weight_monotone():
    phi = AbsPower(Affine(1, 1), 2.0)
    res = [demailly_functional(U05, r, phi, tol=1e-6) for r in (-1.0, -0.1, -0.01)]
    for a, b in zip(res, res[1:]):
        assert b.value >= a.value - 2 * (a.error_estimate + b.error_estimate)


def test_partial_density_examples():
    th = np.array([0.0, 1.0, math.pi])
    np.testing.assert_allclose(partial_density(DELTA05, -0.3, th), poisson(0.5, th), rtol=1e-14)
    np.testing.assert_allclose(partial_density(DELTA0, -2.0, th), 1.0)
    a, b = partial_density(U05, -0.1, math.pi), partial_density(U05, -0.01, math.pi)
    assert a <= b <= float(boundary_density(U05, np.array([math.pi]))[0])
    with pytest.raises(DomainError):
        partial_density(DELTA0, 0.5, 0.0)


def test_weak_star_examples():
    one = RealPart(Constant(1.0))
    assert weak_star_gap(DELTA05, one, ConstantDensity(1.0), -0.1) == pytest.approx(0.0, abs=1e-12)
    g = [weak_star_gap(DELTA05, H_MOB, HarmonicDensity(RealPart(Monomial(1))), r) for r in (-0.5, -0.1, -0.02)]
    assert g[0] > g[1] > g[2]
    # classical radial convergence for the origin weight
    h = RealPart(Affine(1, 1))
    g0 = [weak_star_gap(DELTA0, h, ABS_Z2, r) for r in (-0.5, -0.05)]
    assert g0[1] < g0[0]


def test_membership_examples():
    rep = membership(PowerBranch(0.3), 2.0, U05)
    assert rep.verdict == "non_member" and rep.exponent == pytest.approx(1.1) and rep.classical_member
    assert rep.fitted_slope == pytest.approx(rep.predicted_slope, rel=0.1)
    assert membership(PowerBranch(0.2), 2.0, U05).verdict == "member"
    assert membership(PowerBranch(0.3), 2.0, DELTA0).verdict == "member"
    bad = membership(PowerBranch(0.6), 2.0, DELTA0)
    assert bad.verdict == "non_member" and not bad.classical_member


@settings(max_examples=20, deadline=None)
@given(atoms, atoms)
def test_norm_additive_in_weight(nu1, nu2):
    f = Affine(1, 0.5)
    lhs = weighted_norm_boundary(f, 2.0, nu1 + nu2).value ** 2
    rhs = weighted_norm_boundary(f, 2.0, nu1).value ** 2 + weighted_norm_boundary(f, 2.0, nu2).value ** 2
    assert lhs == pytest.approx(rhs, rel=1e-8)


@settings(max_examples=20, deadline=None)
@given(atoms, atoms, st.sampled_from([1.0, 1.5, 2.0]))
def test_adding_mass_never_decreases_norm(nu, extra, p):
    f = PowerBranch(0.2)
    assert weighted_norm_boundary(f, p, nu + extra).value >= weighted_norm_boundary(f, p, nu).value


@settings(max_examples=15, deadline=None)
@given(st.floats(0.05, 0.9), st.floats(-math.pi, math.pi), st.floats(-0.9, 0.9))
def test_partial_density_below_density(rad, ang, r_level):
    nu = RieszMeasure.atom(rad * complex(math.cos(ang), math.sin(ang))) + U05
    th = np.array([0.5, 2.0])
    r1, r2 = -1.0, -1.0 + 0.5 * (r_level + 1.0) * 0.99
    p1, p2 = partial_density(nu, r1, th), partial_density(nu, r2, th)
    assert np.all(p1 <= p2 + 1e-12)
    assert np.all(p2 <= boundary_density(nu, th) + 1e-12)


def test_classical_anchor_routes():
    for f in (Monomial(1), Affine(1, -0.5)):
        b = weighted_norm_boundary(f, 2.0, DELTA0).value
        i = weighted_norm_interior(f, 2.0, DELTA0).value
        assert b == pytest.approx(i, rel=1e-6)


def test_default_grid():
    assert DEFAULT_R_GRID == (-1.0, -0.3, -0.1, -0.03, -0.01, -0.003, -0.001)
