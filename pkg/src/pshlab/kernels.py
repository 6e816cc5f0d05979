"""Poisson, Green and Herglotz kernels of the unit disk and Blaschke factors.

Normalisation used everywhere in the package:

* boundary measure ``λ = dθ / 2π`` (total mass 1);
* Laplacian ``Δ̃ = Δ / 2π`` against area measure, so that
  ``Δ̃ log|z - a|`` is the unit point mass at ``a``.

All functions accept numpy arrays and broadcast.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class Normalization:
    """The fixed measure conventions (see module docstring)."""

    lambda_is_normalized: bool = True
    laplacian_scale: float = 1.0 / (2.0 * math.pi)


NORMALIZATION = Normalization()


def _check_open_disk(z, name="z"):
    if np.any(np.abs(z) >= 1.0):
        raise DomainError(f"{name} must lie in the open unit disk")


def poisson(z, theta):
    """Poisson kernel ``(1 - |z|^2) / |e^{iθ} - z|^2``.

    Examples
    --------
    >>> float(poisson(0.5, 0.0))
    3.0
    """
    z = np.asarray(z, dtype=complex)
    _check_open_disk(z)
    return poisson_unchecked(z, theta)


def poisson_unchecked(z, theta):
    z = np.asarray(z, dtype=complex)
    theta = np.asarray(theta, dtype=float)
    # |e^{iθ} - z|^2 = (1 - |z|)^2 + 4|z| sin^2((θ - arg z)/2), free of cancellation
    r = np.abs(z)
    s = np.sin(0.5 * (theta - np.angle(z)))
    den = (1.0 - r) ** 2 + 4.0 * r * s * s
    return (1.0 - r) * (1.0 + r) / den


def herglotz(z, theta):
    """Herglotz kernel ``(e^{iθ} + z) / (e^{iθ} - z)``; its real part is the Poisson kernel."""
    z = np.asarray(z, dtype=complex)
    _check_open_disk(z)
    return herglotz_unchecked(z, theta)


def herglotz_unchecked(z, theta):
    z = np.asarray(z, dtype=complex)
    theta = np.asarray(theta, dtype=float)
    r = np.abs(z)
    s = np.sin(0.5 * (theta - np.angle(z)))
    den = (1.0 - r) ** 2 + 4.0 * r * s * s
    imag = 2.0 * (z * np.exp(-1j * theta)).imag / den
    return (1.0 - r) * (1.0 + r) / den + 1j * imag


def green(z, w):
    """Green function ``log|(z - w) / (1 - w̄ z)|`` of the disk.

    Symmetric in its arguments; ``-inf`` when ``z == w``.  Computed as
    ``0.5 * log1p(-q)`` with ``q = (1-|z|^2)(1-|w|^2) / |1 - w̄ z|^2`` when that
    is more accurate, which keeps full relative accuracy near the boundary.
    """
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    _check_open_disk(z, "z")
    _check_open_disk(w, "w")
    return green_unchecked(z, w)


def green_unchecked(z, w):
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    num = np.abs(z - w)
    den = np.abs(1.0 - np.conj(w) * z)
    az = np.abs(z)
    aw = np.abs(w)
    q = (1.0 - az) * (1.0 + az) * (1.0 - aw) * (1.0 + aw) / (den * den)
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = np.log(num) - np.log(den)
        safe = 0.5 * np.log1p(-np.minimum(q, 1.0))
    out = np.where(q < 0.5, safe, direct)
    return np.where(num == 0.0, -np.inf, out)


def blaschke_factor(z, a):
    """Normalised Blaschke factor ``(-ā/|a|)(z - a)/(1 - ā z)``.

    Its value at 0 is ``|a|`` and it is unimodular on the circle.  ``a = 0``
    is rejected: use the monomial ``z`` for zeros at the origin.
    """
    a = complex(a)
    if a == 0:
        raise DomainError("zero at the origin: use the monomial z instead")
    if abs(a) >= 1.0:
        raise DomainError("Blaschke zero must lie in the open unit disk")
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) > 1.0 + 1e-12):
        raise DomainError("z must lie in the closed unit disk")
    ac = a.conjugate()
    return (-ac / abs(a)) * (z - a) / (1.0 - ac * z)


def blaschke_factor_deriv(z, a):
    a = complex(a)
    ac = a.conjugate()
    z = np.asarray(z, dtype=complex)
    return (-ac / abs(a)) * (1.0 - abs(a) ** 2) / (1.0 - ac * z) ** 2
