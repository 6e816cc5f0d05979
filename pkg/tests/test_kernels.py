import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pshlab.errors import DomainError
from pshlab.kernels import NORMALIZATION, blaschke_factor, blaschke_factor_deriv, green, herglotz, poisson
from pshlab.quadrature import integrate_circle

disk_points = st.builds(lambda r, t: r * complex(math.cos(t), math.sin(t)),
                        st.floats(0.0, 0.999), st.floats(-math.pi, math.pi))


def test_normalization_constants():
    assert NORMALIZATION.lambda_is_normalized
    assert NORMALIZATION.laplacian_scale == pytest.approx(1 / (2 * math.pi))


def test_poisson_examples():
    assert float(poisson(0.5, 0.0)) == pytest.approx(3.0)
    assert float(poisson(0.5, math.pi)) == pytest.approx(1 / 3)
    assert float(poisson(0.0, 1.234)) == 1.0
    with pytest.raises(DomainError):
        poisson(1.0, 0.0)


def test_poisson_accurate_near_boundary():
    # at the peak P = (1+r)/(1-r), with 1 - r represented exactly
    r = 1 - 1e-12
    assert float(poisson(r, 0.0)) == pytest.approx((1 + r) / (1 - r), rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(disk_points, st.floats(-math.pi, math.pi))
def test_herglotz_real_part_is_poisson(z, theta):
    h = complex(herglotz(z, theta))
    direct = (np.exp(1j * theta) + z) / (np.exp(1j * theta) - z)
    assert h.real == float(poisson(z, theta))
    assert h == pytest.approx(direct, rel=1e-9, abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.builds(lambda r, t: r * complex(math.cos(t), math.sin(t)), st.floats(0.0, 0.95), st.floats(-3, 3)))
def test_poisson_integrates_to_one(z):
    r = integrate_circle(lambda t: poisson(z, t), peaks=[(float(np.angle(z)), max(1 - abs(z), 1e-3))],
                         tol=1e-12, rtol=1e-12)
    assert r.value == pytest.approx(1.0, abs=1e-10)


@settings(max_examples=60, deadline=None)
@given(disk_points, disk_points)
def test_green_symmetric_and_negative(z, w):
    if z == w:
        return
    g1, g2 = float(green(z, w)), float(green(w, z))
    assert g1 <= 0
    assert g1 == pytest.approx(g2, rel=1e-9, abs=1e-14)


def test_green_values():
    assert float(green(0.5, 0.0)) == pytest.approx(math.log(0.5))
    assert float(green(0.0, 0.0)) == -math.inf
    # relative accuracy next to the circle: G(1-d, 0) = log(1-d)
    assert float(green(1 - 1e-12, 0.0)) == pytest.approx(math.log1p(-1e-12), rel=1e-9)


def test_blaschke_factor():
    theta = 2 * np.pi * np.arange(1024) / 1024
    for a in (0.5, -0.3 + 0.4j, 0.99j):
        b = blaschke_factor(np.exp(1j * theta), a)
        assert np.max(np.abs(np.abs(b) - 1)) < 1e-12
        assert abs(complex(blaschke_factor(a, a))) == 0.0
    assert complex(blaschke_factor(0.0, 0.5)) == pytest.approx(0.5)
    with pytest.raises(DomainError):
        blaschke_factor(0.1, 0.0)


def test_blaschke_factor_derivative_fd():
    a, z, h = 0.3 - 0.2j, 0.1 + 0.4j, 1e-6
    fd = (blaschke_factor(z + h, a) - blaschke_factor(z - h, a)) / (2 * h)
    assert complex(blaschke_factor_deriv(z, a)) == pytest.approx(complex(fd), rel=1e-8)
