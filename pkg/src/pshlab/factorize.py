"""Blaschke deflation, outer functions and the isometry onto classical H^p.

The outer function of a weight has boundary modulus ``α`` and is
``A = exp(α̃)`` with ``α̃(z) = ∫ H(z, θ) log α(θ) dλ(θ)`` (``H`` the Herglotz
kernel).  It is stored through the Taylor coefficients of ``α̃``, obtained by
FFT of ``log α`` on a doubling grid.  When a radial part makes ``α``
unbounded at ``θ = 0`` like ``θ**-β``, the exact term ``-β log(1 - z)`` is
split off first so that the FFT only sees a continuous remainder.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import BlaschkeConditionError, DomainError, NonMemberError, UnsupportedFixtureError
from .functions import (Affine, AnalyticFunction, Blaschke, Constant, Mobius, Monomial, Outer, Polynomial, Power,
                        Product, Scale, Sum)
from .kernels import herglotz_unchecked, poisson_unchecked
from .measures import BoundaryDensity, RieszMeasure, boundary_density
from .quadrature import QuadratureResult, integrate_circle

log = logging.getLogger(__name__)

FFT_TAIL_TOL = 1e-15
FFT_MAX = 2**16


def blaschke_product(zeros: Sequence[complex] = (), origin_order: int = 0) -> Blaschke:
    """Finite Blaschke product with the given nonzero zeros and a zero of order ``origin_order`` at 0."""
    return Blaschke(tuple(zeros), origin_order)


@dataclass(frozen=True)
class TruncatedBlaschke:
    product: Blaschke
    decay_exponent: float
    tail_mass: float


def blaschke_from_sequence(zero_at: Callable[[int], complex], n_terms: int, fit_window: int = 16) -> TruncatedBlaschke:
    """Truncate an infinite zero sequence ``a_1, a_2, ...`` after ``n_terms`` zeros.

    The decay ``1 - |a_j| ~ C j**-s`` is fitted on the last ``fit_window``
    terms.  ``s <= 1`` means the Blaschke sum diverges and raises
    :class:`BlaschkeConditionError`; otherwise the estimated tail
    ``sum_{j > n} (1 - |a_j|)`` is reported as the truncation error.
    """
    zs = [complex(zero_at(j)) for j in range(1, n_terms + 1)]
    j = np.arange(max(1, n_terms - fit_window + 1), n_terms + 1)
    gaps = np.array([1.0 - abs(zs[k - 1]) for k in j])
    if np.any(gaps <= 0):
        raise DomainError("zeros must lie inside the disk")
    slope, icpt = np.polyfit(np.log(j), np.log(gaps), 1)
    s = -slope
    if s <= 1.0 + 1e-3:
        raise BlaschkeConditionError(f"1 - |a_j| decays like j^-{s:.3f}; the Blaschke sum diverges")
    c = math.exp(icpt)
    tail = c * n_terms ** (1.0 - s) / (s - 1.0)
    return TruncatedBlaschke(blaschke_product([a for a in zs if a != 0], sum(1 for a in zs if a == 0)), s, tail)


# ------------------------------------------------------------------ outer

class OuterFunction:
    """Outer function ``A`` with ``|A*| = α`` for a Riesz measure's density ``α``.

    Parameters
    ----------
    nu : RieszMeasure
        Source of the boundary density.
    max_size : int
        Largest FFT grid; the grid doubles from 64 until the Taylor
        coefficients of the continuous part drop to roundoff level.
    """

    def __init__(self, nu: RieszMeasure, max_size: int = FFT_MAX):
        self.nu = nu
        self.density = BoundaryDensity(nu)
        self.beta = nu.boundary_exponent()
        n = 64
        while True:
            theta = 2.0 * math.pi * (np.arange(n) + 0.5) / n
            g = np.log(boundary_density(nu, theta))
            if self.beta > 0:
                g = g + self.beta * np.log(2.0 * np.abs(np.sin(0.5 * theta)))
            c = np.fft.fft(g) / n * np.exp(-1j * math.pi * np.arange(n) / n)
            half = n // 2
            coeffs = np.concatenate([[c[0].real], 2.0 * c[1:half]])
            upper = np.abs(coeffs[half // 2:])
            tail = float(np.sum(upper))
            if upper.max() < FFT_TAIL_TOL * max(1.0, float(np.max(np.abs(g)))) or n >= max_size:
                break
            n *= 2
        self.grid_size = n
        self.tail_estimate = tail
        self.coeffs = coeffs
        self._dcoeffs = coeffs[1:] * np.arange(1, coeffs.size)
        if tail > 1e-10:
            log.info("outer function: Fourier tail %.2e at grid %d", tail, n)

    def log(self, z):
        """``α̃(z)``, the holomorphic logarithm of ``A``."""
        z = np.asarray(z, dtype=complex)
        out = np.polyval(self.coeffs[::-1], z)
        if self.beta > 0:
            out = out - self.beta * np.log1p(-z)
        return out

    def eval(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.exp(self.log(z))
        if self.beta > 0:
            # the truncated series converges slowly on the circle; use the exact modulus there
            onc = np.abs(np.abs(z) - 1.0) <= 1e-15
            if np.any(onc):
                th = np.angle(z[onc])
                out[onc] = boundary_density(self.nu, th) * np.exp(1j * np.angle(out[onc]))
        return out

    def deriv(self, z):
        z = np.asarray(z, dtype=complex)
        d = np.polyval(self._dcoeffs[::-1], z) if self._dcoeffs.size else np.zeros(z.shape, dtype=complex)
        if self.beta > 0:
            d = d + self.beta / (1.0 - z)
        return d * np.exp(self.log(z))

    def singularities(self):
        return self.density.singular_angles

    def peaks(self):
        return self.density.peaks

    def as_function(self) -> Outer:
        return Outer(self)


def outer_eval(A: OuterFunction, z, method: str = "series", tol: float = 1e-11):
    """Value of the outer function at interior points.

    ``method="series"`` uses the stored Taylor coefficients;
    ``method="quadrature"`` integrates the Herglotz kernel against
    ``log α`` directly (graded at the singular angle, with the value of
    ``log α`` at ``arg z`` subtracted to tame the Poisson peak).
    """
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) >= 1.0):
        raise DomainError("outer_eval needs points inside the disk")
    if method == "series":
        return A.eval(z)
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")
    out = np.empty(z.size, dtype=complex)
    for i, zi in enumerate(z.ravel()):
        out[i] = np.exp(_herglotz_log_integral(A.nu, complex(zi), tol))
    return out.reshape(z.shape) if z.ndim else complex(out[0])


def _herglotz_log_integral(nu, z, tol):
    dens = BoundaryDensity(nu)
    t0 = math.atan2(z.imag, z.real)
    width = max(1.0 - abs(z), 1e-300)
    g0 = float(np.log(boundary_density(nu, t0))) if abs(z) > 0 else 0.0
    if not np.isfinite(g0):
        g0 = 0.0
    peaks = [(t0, width)] if abs(z) > 0.5 else []
    peaks += list(dens.peaks)
    logs = [t for t, _ in dens.singular_angles] + list(dens.log_angles)

    def gre(th):
        return poisson_unchecked(z, th) * (np.log(boundary_density(nu, th)) - g0)

    def gim(th):
        return herglotz_unchecked(z, th).imag * (np.log(boundary_density(nu, th)) - g0)

    re = integrate_circle(gre, (), tol, peaks=peaks, log_angles=logs)
    im = integrate_circle(gim, (), tol, peaks=peaks, log_angles=logs)
    return re.value + g0 + 1j * im.value


# ------------------------------------------------------------------ deflation

def split_zeros(f: AnalyticFunction):
    """Structural factorisation ``f = B g`` with ``B`` a Blaschke product.

    Returns ``(B, g)``; ``g`` has no zeros in the disk.  Raises
    :class:`UnsupportedFixtureError` when the zero set of ``f`` is not
    structurally known (sums of functions).
    """
    zeros, order, g = _split(f)
    return Blaschke(tuple(zeros), order), g


def _affine_without_root(c1: complex, r: complex) -> Affine:
    # c1 (z - r) = b_r(z) * (c1 |r| z - c1 |r| / conj(r))
    m = abs(r)
    return Affine(c1 * m, -c1 * m / r.conjugate())


def _split(f):
    if isinstance(f, Constant):
        if f.c == 0:
            raise UnsupportedFixtureError("the zero function has no factorisation")
        return [], 0, f
    if isinstance(f, Monomial):
        return [], f.m, Constant(1.0)
    if isinstance(f, Affine):
        zs = f.zeros()
        if not zs:
            return [], 0, f
        r = zs[0]
        if abs(r) < 1e-300:
            return [], 1, Constant(complex(f.c1))
        return [r], 0, _affine_without_root(complex(f.c1), r)
    if isinstance(f, Polynomial):
        roots = f.roots()
        factors = [Constant(f.coeffs[-1])]
        zeros, order = [], 0
        for r in roots:
            r = complex(r)
            if r == 0:
                order += 1
            elif abs(r) < 1.0 - 1e-13:
                zeros.append(r)
                factors.append(_affine_without_root(1.0, r))
            else:
                factors.append(Affine(1.0, -r))
        return zeros, order, _simplify(factors)
    if isinstance(f, Mobius):
        a, b, c, d = (complex(x) for x in (f.a, f.b, f.c, f.d))
        den = Constant(1.0 / d) if c == 0 else Power(Affine(c, d), -1.0)
        if a == 0:
            return [], 0, f
        zeros, order, num = _split(Affine(a, b))
        return zeros, order, _simplify([num, den])
    if isinstance(f, Blaschke):
        return list(f.zero_list), f.origin_order, Constant(1.0)
    if isinstance(f, Product):
        zeros, order, parts = [], 0, []
        for factor in f.factors:
            z, o, g = _split(factor)
            zeros += z
            order += o
            parts.append(g)
        return zeros, order, _simplify(parts)
    if isinstance(f, Scale):
        z, o, g = _split(f.base)
        return z, o, _simplify([Constant(f.c), g])
    if isinstance(f, Sum):
        raise UnsupportedFixtureError(f"zeros of the sum {f.to_expr()} are not structurally known")
    if f.zeros() == []:
        return [], 0, f
    raise UnsupportedFixtureError(f"cannot factor {f.to_expr()}")


def _simplify(parts):
    const = 1.0 + 0j
    rest = []
    for g in parts:
        if isinstance(g, Constant):
            const *= complex(g.c)
        else:
            rest.append(g)
    if not rest:
        return Constant(const)
    body = rest[0] if len(rest) == 1 else Product(tuple(rest))
    return body if const == 1 else Scale(const, body)


def nonvanishing_on_grid(g: AnalyticFunction, n: int = 64) -> float:
    """Minimum of ``|g|`` over the points of an ``n x n`` grid inside the disk."""
    x = np.linspace(-1.0, 1.0, n)
    zz = (x[:, None] + 1j * x[None, :]).ravel()
    zz = zz[np.abs(zz) < 1.0]
    return float(np.min(np.abs(g.eval(zz))))


@dataclass(frozen=True)
class DeflationReport:
    blaschke: Blaschke
    g: AnalyticFunction
    p: float
    norm_f: QuadratureResult
    norm_g: QuadratureResult
    relative_gap: float
    min_abs_g: float
    route: str


def deflate(f: AnalyticFunction, p: float, nu: RieszMeasure, tol: float = 1e-9):
    """Divide out the zeros of ``f``: ``f = B g`` with ``‖g‖ = ‖f‖`` in ``H^p_u``.

    The norm of ``f`` is computed on the boundary, the norm of ``g`` through
    the interior (Riesz) route; for ``p < 2`` the latter is taken as
    ``‖g^{p/2}‖_{H^2_u}^{2/p}``, which needs no Laplacian of ``|g|^p`` at
    zeros.  Returns ``(B, g, report)``.
    """
    from . import hardy

    B, g = split_zeros(f)
    nf = hardy.weighted_norm_boundary(f, p, nu, tol=tol)
    if p < 2:
        ng = hardy.weighted_norm_interior(Power(g, p / 2.0), 2.0, nu, tol=tol)
        ng = ng.power(2.0 / p) if not ng.divergent else ng
        route = "interior, p/2 power"
    else:
        ng = hardy.weighted_norm_interior(g, p, nu, tol=tol)
        route = "interior"
    gap = abs(ng.value - nf.value) / nf.value if not (nf.divergent or ng.divergent) else math.nan
    report = DeflationReport(B, g, p, nf, ng, gap, nonvanishing_on_grid(g), route)
    return B, g, report


# ------------------------------------------------------------------ isometry

def isometry_apply(f: AnalyticFunction, p: float, nu: RieszMeasure, outer: OuterFunction | None = None,
                   check_membership: bool = True) -> AnalyticFunction:
    """``Φf = A^{1/p} f``, an isometry of ``H^p_u`` onto classical ``H^p``."""
    if check_membership:
        from .hardy import membership

        verdict = membership(f, p, nu, diagnostics=False)
        if verdict.verdict != "member":
            raise NonMemberError(f"{f.to_expr()} is not in the weighted space", verdict)
    A = outer or OuterFunction(nu)
    return Product((Power(A.as_function(), 1.0 / p), f))


def isometry_inverse(F: AnalyticFunction, p: float, nu: RieszMeasure,
                     outer: OuterFunction | None = None) -> AnalyticFunction:
    """``A^{-1/p} F``, mapping classical ``H^p`` into ``H^p_u``."""
    A = outer or OuterFunction(nu)
    return Product((Power(A.as_function(), -1.0 / p), F))


@dataclass(frozen=True)
class IsometryReport:
    p: float
    image_norm: QuadratureResult
    weighted_norm: QuadratureResult
    relative_gap: float
    round_trip_error: float


def isometry_report(f: AnalyticFunction, p: float, nu: RieszMeasure, tol: float = 1e-9,
                    outer: OuterFunction | None = None) -> IsometryReport:
    """Compare ``‖A^{1/p} f‖_{H^p}`` with ``‖f‖_{H^p_u}``.

    The left side uses the interior route with the classical weight, the
    right side the boundary route, so the two share no quadrature.
    """
    from . import hardy

    A = outer or OuterFunction(nu)
    F = isometry_apply(f, p, nu, A)
    lhs = hardy.weighted_norm_interior(F, p, RieszMeasure.atom(0.0), tol=tol)
    rhs = hardy.weighted_norm_boundary(f, p, nu, tol=tol)
    back = isometry_inverse(F, p, nu, A)
    x = np.linspace(-0.95, 0.95, 32)
    zz = (x[:, None] + 1j * x[None, :]).ravel()
    zz = zz[np.abs(zz) < 0.99]
    fv = f.eval(zz)
    rt = float(np.max(np.abs(back.eval(zz) - fv)))
    gap = abs(lhs.value - rhs.value) / rhs.value
    return IsometryReport(p, lhs, rhs, gap, rt)


# ------------------------------------------------------------------ probe

@dataclass(frozen=True)
class ProbeReport:
    t_grid: tuple[float, ...]
    values: tuple[float, ...]
    errors: tuple[float, ...]
    maximum: float
    witness: float | None
    certified: bool
    boundary_sup: float
    angle: float


def ball_probe(f: AnalyticFunction, p: float, t_grid: Sequence[float], angle: float = 0.0,
               tol: float = 1e-12) -> ProbeReport:
    """Weighted norms ``∫ P(t e^{iφ}, θ) |f*|^p dλ`` for the Green witnesses ``G(·, t e^{iφ})``.

    Each witness has unit Riesz mass.  The report gives the first ``t`` whose
    value exceeds 1 (if any) and, when ``sup |f*| <= 1`` on the boundary,
    certifies that no value exceeds 1 beyond the quadrature error.
    """
    sings = [(t, p * e) for t, e in f.singularities()]
    vals, errs = [], []
    for t in t_grid:
        if not 0.0 < t < 1.0:
            raise DomainError("probe parameters must lie in (0, 1)")
        a = t * complex(math.cos(angle), math.sin(angle))
        g = lambda th, a=a: poisson_unchecked(a, th) * np.abs(f.boundary(th)) ** p
        r = integrate_circle(g, sings, tol, rtol=tol, peaks=[(angle, 1.0 - t)] + list(f.peaks()))
        vals.append(r.value)
        errs.append(r.error_estimate)
    theta = 2.0 * math.pi * np.arange(4096) / 4096
    sup = float(np.max(np.abs(f.boundary(theta)))) if not sings else math.inf
    witness = next((t for t, v in zip(t_grid, vals) if v > 1.0), None)
    certified = sup <= 1.0 and all(v <= 1.0 + 1e-10 for v in vals)
    return ProbeReport(tuple(t_grid), tuple(vals), tuple(errs), max(vals), witness, certified, sup, angle)
