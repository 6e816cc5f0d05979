"""Weighted Hardy norms, the Lelong-Jensen functional and membership tests.

Two independent routes compute ``‖f‖_{H^p_u}^p``:

* boundary route: ``∫ |f*|^p α dλ``;
* interior route: ``∫ |f|^p dν - ∫ u Δ̃|f|^p dA``.

The interior route is evaluated by default in Fubini order,
``∫ M(w) dν(w)`` with ``M(w) = |f(w)|^p + ∫ -G(z, w) Δ̃|f|^p(z) dA(z)``, where
the inner area integral is taken in the Möbius chart centred at ``w``
(in which ``G(·, w)`` becomes ``log|ζ|``).  This never needs ``u`` itself and
never touches the boundary values of ``f``.  ``method="potential"`` instead
integrates ``-u Δ̃|f|^p`` over the disk with ``u`` evaluated pointwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError
from .functions import (AbsHarmonicPower, AbsPower, AnalyticFunction, HarmonicDensity, HarmonicFunction, Power,
                        ProductDensity, TestDensity)
from .kernels import poisson_unchecked
from .measures import TINY, BoundaryDensity, RieszMeasure, evaluate_u, mu_u, poisson_radial
from .quadrature import (DEFAULT_BUDGET, QuadratureResult, integrate_circle, integrate_interval, integrate_pieces,
                         polar_batch)

DEFAULT_R_GRID = (-1.0, -0.3, -0.1, -0.03, -0.01, -0.003, -0.001)
TAIL_CUTOFF = 1e-4


def _canon(theta):
    t = math.remainder(float(theta), 2.0 * math.pi)
    return 0.0 if t == 0.0 else t


def _exponent_at(sings, theta=0.0):
    return sum(e for t, e in sings if _canon(t) == _canon(theta))


# ------------------------------------------------------------------ boundary route

def classical_norm(f: AnalyticFunction, p: float, tol: float = 1e-11) -> QuadratureResult:
    """``‖f‖_{H^p}`` as the ``L^p(λ)`` norm of the boundary trace.

    For ``f`` in ``H^p`` this is the increasing limit of the circle means
    (see :func:`circle_means`).  A boundary exponent ``p e >= 1`` gives a
    divergence verdict.
    """
    sings = [(t, p * e) for t, e in f.singularities()]
    r = integrate_circle(lambda th: np.abs(f.boundary(th)) ** p, sings, tol, rtol=tol, peaks=f.peaks())
    return r.power(1.0 / p)


def circle_means(f: AnalyticFunction, p: float, radii: Sequence[float], tol: float = 1e-11) -> np.ndarray:
    """``(∫ |f(r e^{iθ})|^p dλ)^{1/p}`` for each radius ``r < 1``; nondecreasing in ``r``."""
    out = []
    for r in radii:
        peaks = [(t, 1.0 - r) for t, _ in f.singularities()] + [(t, w + 1.0 - r) for t, w in f.peaks()]
        res = integrate_circle(lambda th: np.abs(f.eval(r * np.exp(1j * th))) ** p, (), tol, rtol=tol, peaks=peaks)
        out.append(res.value ** (1.0 / p))
    return np.array(out)


def boundary_integral(phi: TestDensity, nu: RieszMeasure, tol: float = 1e-11) -> QuadratureResult:
    """``μ_u(φ*) = ∫ φ* α dλ`` with exponent bookkeeping."""
    return mu_u(nu, phi.boundary, phi.singularities(), tol=tol, rtol=tol, peaks=phi.peaks())


def weighted_norm_boundary(f: AnalyticFunction, p: float, nu: RieszMeasure, tol: float = 1e-11) -> QuadratureResult:
    """``‖f*‖_{L^p(μ_u)} = (∫ |f*|^p α dλ)^{1/p}``, or a divergence verdict."""
    if p <= 0:
        raise DomainError("p must be positive")
    return boundary_integral(AbsPower(f, p), nu, tol).power(1.0 / p)


def harmonic_norm(h: HarmonicFunction, p: float, nu: RieszMeasure, tol: float = 1e-11, interior: bool = False):
    """``(∫ |h*|^p α dλ)^{1/p}`` for ``p > 1``.

    With ``interior=True`` returns a :class:`NormReport` that also carries the
    interior route built on ``Δ̃|h|^p = (p(p-1)/2π)|h|^{p-2}|∇h|^2``.
    """
    if p <= 1:
        raise DomainError("harmonic norms are defined here for p > 1")
    phi = AbsHarmonicPower(h, p)
    b = boundary_integral(phi, nu, tol).power(1.0 / p)
    if not interior:
        return b
    i = riesz_integral(phi, nu, tol=max(tol, 1e-10)).power(1.0 / p)
    return NormReport(b, i, None, _gap(b, i))


# ------------------------------------------------------------------ interior route

def _mobius_preimage(points, w):
    """``φ_w^{-1}(points) = (P - w) / (1 - w̄ P)`` for each ``w`` (rows) and point (columns)."""
    P = np.asarray(points, dtype=complex)[None, :]
    w = np.asarray(w, dtype=complex)[:, None]
    return (P - w) / (1.0 - np.conj(w) * P)


def majorant(phi: TestDensity, w, gap=None, *, tol: float = 1e-10, rtol: float = 1e-10,
             budget: int = 2**13):
    """Least harmonic majorant ``M(w) = φ(w) + ∫ -G(z, w) Δ̃φ(z) dA(z)`` for an array of ``w``.

    ``gap`` may supply ``1 - |w|^2`` accurately (needed for ``w`` close to
    the circle).  ``budget`` caps the radial nodes per point; each radial
    node runs one angular integral.  Returns ``(values, errors, converged)``.
    """
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    n = w.size
    aw = np.abs(w)
    gap = (1.0 - aw) * (1.0 + aw) if gap is None else np.atleast_1d(np.asarray(gap, dtype=float))
    sings = list(phi.singularities())
    peaks = list(phi.peaks())
    zeros = list(phi.zero_points())
    sing_pre = _mobius_preimage([complex(math.cos(t), math.sin(t)) for t, _ in sings], w)
    peak_pre = _mobius_preimage([(1.0 + wd) * complex(math.cos(t), math.sin(t)) for t, wd in peaks], w)
    zero_pre = _mobius_preimage(zeros, w)
    sing_ang = np.angle(sing_pre)
    peak_ang, peak_rad = np.angle(peak_pre), np.abs(peak_pre)
    zero_ang, zero_rad = np.angle(zero_pre), np.abs(zero_pre)
    comp_ang = np.angle(-w)
    right = max((e for _, e in sings), default=0.0)
    radial_points = []
    for k in range(n):
        inner = sorted({float(r) for r in zero_rad[k] if 1e-12 < r < 1.0 - 1e-12})
        radial_points.append(np.array([0.0] + inner + [1.0]))

    def anchors(rho, k):
        r = rho[:, None]
        ang = [sing_ang[k], peak_ang[k], zero_ang[k], comp_ang[k][:, None]]
        wid = [np.broadcast_to(1.0 - r, sing_ang[k].shape), peak_rad[k] - r, np.abs(r - zero_rad[k]),
               1.0 - r * aw[k][:, None]]
        A = np.concatenate([np.broadcast_to(a, (rho.size, a.shape[1])) for a in ang], axis=1)
        W = np.concatenate([np.broadcast_to(x, (rho.size, x.shape[1])) for x in wid], axis=1)
        return A, np.ones_like(A), np.maximum(W, TINY)

    def F(rho, psi, k):
        zeta = rho * np.exp(1j * psi)
        den = 1.0 + np.conj(w[k]) * zeta
        z = (zeta + w[k]) / den
        jac = (gap[k] / np.abs(den) ** 2) ** 2
        with np.errstate(divide="ignore", invalid="ignore"):
            return -rho * np.log(rho) * phi.laplacian(z) * jac

    val, err, _, ok = polar_batch(F, n, radial_points=radial_points, angular_anchors=anchors, right_exponent=right,
                                  tol=tol, rtol=rtol, inner_rtol=min(1e-12, rtol * 1e-2), inner_atol=tol * 1e-3,
                                  budget=budget)
    return phi.value(w) + val, err, ok


def _fit_tail(d_fit, m_fit, gamma, beta, kappa, d_min):
    """Analytic ``κ ∫_0^{d_min} M(1-d) d^{-β} dd`` from a local power model of ``M``."""
    if gamma > 0:
        bases = [lambda d: d ** -gamma, lambda d: np.ones_like(d), lambda d: d ** (1.0 - gamma)]
        moments = [d_min ** (1 - beta - gamma) / (1 - beta - gamma), d_min ** (1 - beta) / (1 - beta),
                   d_min ** (2 - beta - gamma) / (2 - beta - gamma)]
    else:
        bases = [lambda d: np.ones_like(d), lambda d: d, lambda d: d * d]
        moments = [d_min ** (1 - beta) / (1 - beta), d_min ** (2 - beta) / (2 - beta),
                   d_min ** (3 - beta) / (3 - beta)]
    tails = []
    for nb in (2, 3):
        X = np.stack([b(d_fit) for b in bases[:nb]], axis=1)
        coef, *_ = np.linalg.lstsq(X, m_fit, rcond=None)
        tails.append(kappa * float(np.dot(coef, moments[:nb])))
    return tails[0], abs(tails[0] - tails[1])


def riesz_integral(phi: TestDensity, nu: RieszMeasure, tol: float = 1e-9, rtol: float = 1e-9,
                   tail_cutoff: float = TAIL_CUTOFF) -> QuadratureResult:
    """``∫ M dν`` for the majorant ``M`` of ``φ``: the interior route for ``μ_u(φ*)``.

    For a radial part reaching the circle, ``M(1-d)`` below ``d = tail_cutoff``
    is replaced by a fitted model ``A d^{-γ} + B`` (``γ`` the boundary
    exponent of ``φ`` at angle 0) and integrated in closed form.
    """
    sings = phi.singularities()
    gamma = _exponent_at(sings, 0.0)
    parts = []
    nodes = 0
    converged = True
    if nu.atoms:
        loc = np.array([a for a, _ in nu.atoms])
        mass = np.array([c for _, c in nu.atoms])
        m, e, ok = majorant(phi, loc, tol=tol, rtol=rtol)
        parts.append((float(np.dot(mass, m)), float(np.dot(mass, e))))
        converged &= bool(ok.all())
    for comp in nu.radial:
        if comp.reaches_boundary and comp.beta + gamma >= 1.0:
            return QuadratureResult.diverges(comp.beta + gamma)
        worst = [0.0]

        def M(d):
            m, e, ok = majorant(phi, 1.0 - d, gap=d * (2.0 - d), tol=max(tol * 1e-2, 1e-8), rtol=max(rtol * 1e-2, 1e-8))
            worst[0] = max(worst[0], float(np.max(e / np.maximum(np.abs(m), 1e-300))))
            return m

        lo = comp.d_lo if not comp.reaches_boundary else tail_cutoff
        g = lambda d, _k: comp.weight(d) * M(d)
        half = 0.5 * (1.0 - lo)
        val, err, used, ok = integrate_pieces(g, [lo, 1.0], [1.0, -1.0], [half, half], [0, 0], 1, q=[1.0, 1.0],
                                              width=[lo if comp.reaches_boundary else 0.0, 0.0],
                                              tol=tol, rtol=rtol)
        v, e = float(val[0]), float(err[0]) + worst[0] * abs(float(val[0]))
        nodes += int(used[0])
        converged &= bool(ok[0])
        if comp.reaches_boundary:
            d_fit = tail_cutoff * np.array([1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0])
            t, te = _fit_tail(d_fit, M(d_fit), gamma, comp.beta, comp.kappa, tail_cutoff)
            v, e = v + t, e + te
        parts.append((v, e))
    return QuadratureResult(math.fsum(p for p, _ in parts), sum(e for _, e in parts), nodes, converged)


def weighted_norm_interior(f: AnalyticFunction, p: float, nu: RieszMeasure, tol: float = 1e-9,
                           method: str = "majorant") -> QuadratureResult:
    """``(∫ |f|^p dν - ∫ u Δ̃|f|^p dA)^{1/p}``, or a divergence verdict.

    For ``p <= 1``, and for ``p < 2`` when ``f`` has zeros, the zeros are
    divided out first (``f = B g``) and ``‖g^{p/2}‖_{H^2_u}^{2/p}`` is
    returned, so that no Laplacian of ``|f|^p`` is taken near a zero.
    """
    if p <= 0:
        raise DomainError("p must be positive")
    zs = f.zeros()
    if p <= 1 or (p < 2 and zs):
        from .factorize import split_zeros

        _, g = split_zeros(f)
        inner = weighted_norm_interior(Power(g, p / 2.0), 2.0, nu, tol, method)
        return inner.power(2.0 / p)
    phi = AbsPower(f, p)
    if method == "majorant":
        return riesz_integral(phi, nu, tol=tol, rtol=tol).power(1.0 / p)
    if method == "potential":
        return potential_integral(phi, nu, tol=tol).power(1.0 / p)
    raise ValueError(f"unknown method {method!r}")


def potential_integral(phi: TestDensity, nu: RieszMeasure, tol: float = 1e-9) -> QuadratureResult:
    """``∫ φ dν - ∫ u Δ̃φ dA`` with ``u`` evaluated at every area node."""
    sings = phi.singularities()
    gamma = _exponent_at(sings, 0.0)
    mass_part = radial_mass(nu, lambda w: phi.value(w), gamma, tol=tol)
    if mass_part.divergent:
        return mass_part
    feats = [(a, 0.0) for a, _ in nu.atoms] + [(z0, 0.0) for z0 in phi.zero_points()]
    area = _area_integral(lambda z: -evaluate_u(nu, z, strict=False) * phi.laplacian(z), 1.0, feats,
                          sings, phi.peaks(), max((e for _, e in sings), default=0.0), tol)
    return mass_part + area


def _area_integral(F, radius, points, sings, peaks, right_exponent, tol):
    """``∫_{|z| < radius} F dA`` in polar coordinates with anchors at interior points and boundary features."""
    pts = np.array([complex(a) for a, _ in points], dtype=complex)
    rad = np.abs(pts)
    ang = np.angle(pts)
    inner = sorted({float(r) for r in rad if 1e-12 < r < radius})
    radial_points = [np.array([0.0] + inner + [radius])]
    s_ang = np.array([t for t, _ in sings] + [t for t, _ in peaks])
    s_w = np.array([0.0 for _ in sings] + [w for _, w in peaks])

    def anchors(rho, k):
        r = rho[:, None]
        A = np.concatenate([np.broadcast_to(ang, (rho.size, ang.size)),
                            np.broadcast_to(s_ang, (rho.size, s_ang.size)),
                            np.zeros((rho.size, 1))], axis=1)
        W = np.concatenate([np.abs(r - rad[None, :]) + 0.0 * r, (1.0 - r) + s_w[None, :], np.ones((rho.size, 1))],
                           axis=1)
        return A, np.ones_like(A), np.maximum(W, TINY)

    def G(rho, psi, k):
        with np.errstate(divide="ignore", invalid="ignore"):
            return rho * F(rho * np.exp(1j * psi))

    val, err, used, ok = polar_batch(G, 1, radial_points=radial_points, angular_anchors=anchors,
                                     right_exponent=right_exponent if radius == 1.0 else 0.0, tol=tol, rtol=tol,
                                     inner_rtol=1e-12, inner_atol=tol * 1e-3)
    return QuadratureResult(float(val[0]), float(err[0]), int(used[0]), bool(ok[0]))


def radial_mass(nu: RieszMeasure, value, gamma: float = 0.0, tol: float = 1e-10,
                intervals=None) -> QuadratureResult:
    """``∫ value dν`` (atoms plus radial parts), optionally restricted to ``d``-intervals per radial part."""
    parts = [QuadratureResult(math.fsum(c * float(np.real(value(np.array([a]))[0])) for a, c in nu.atoms),
                              0.0, 0, True)]
    for i, comp in enumerate(nu.radial):
        pieces = [(comp.d_lo, 1.0)] if intervals is None else intervals[i]
        for lo, hi in pieces:
            if hi <= lo:
                continue
            touches = lo == 0.0
            if touches and comp.beta + gamma >= 1.0:
                return QuadratureResult.diverges(comp.beta + gamma)
            ex = (comp.beta + gamma, 0.0) if touches else (0.0, 0.0)
            r = integrate_interval(lambda d, c=comp: c.weight(d) * np.real(value(1.0 - d)), lo, hi, ex, tol,
                                   rtol=tol)
            parts.append(r)
    out = parts[0]
    for r in parts[1:]:
        out = out + r
    return out


# ------------------------------------------------------------------ reports

@dataclass(frozen=True)
class NormReport:
    boundary_value: QuadratureResult
    interior_value: QuadratureResult | None
    classical_value: QuadratureResult | None
    agreement_gap: float


def _gap(b, i):
    if b is None or i is None or b.divergent or i.divergent:
        return math.nan
    return abs(b.value - i.value) / max(1.0, b.value)


def norm_report(f: AnalyticFunction, p: float, nu: RieszMeasure, tol: float = 1e-9,
                classical: bool = True) -> NormReport:
    b = weighted_norm_boundary(f, p, nu, tol=min(tol, 1e-10))
    i = weighted_norm_interior(f, p, nu, tol=tol) if not b.divergent else b
    c = classical_norm(f, p) if classical else None
    return NormReport(b, i, c, _gap(b, i))


# ------------------------------------------------------------------ Lelong-Jensen

def _u_lower_bound(nu: RieszMeasure, rho):
    """A lower bound for ``u`` on the circle ``|z| = rho``.

    Along a circle the pseudo-hyperbolic distance to a point ``a`` is
    smallest at ``arg a``; radial parts live on the positive radius.
    """
    rho = np.asarray(rho, dtype=float)
    out = np.zeros(rho.shape)
    for a, c in nu.atoms:
        m = abs(a)
        with np.errstate(divide="ignore"):
            out += c * np.log(np.abs(rho - m) / (1.0 - m * rho))
    if nu.radial:
        out += evaluate_u(RieszMeasure(radial=nu.radial), rho.astype(complex), strict=False)
    return out


def level_radius(nu: RieszMeasure, r: float) -> float:
    """Radius beyond which ``u >= r`` everywhere, so that ``B_{u,r}`` lies inside it."""
    x = np.concatenate([np.logspace(-15, -1, 281), np.linspace(0.1, 1.0, 181)[1:]])
    rho = 1.0 - x
    lb = _u_lower_bound(nu, rho)
    below = np.nonzero(lb < r)[0]
    if below.size == 0:
        return 0.0
    k = below[0]
    if k == 0:
        return 1.0 - 1e-15
    hi, lo = rho[k - 1], rho[k]
    return float(brentq(lambda t: float(_u_lower_bound(nu, np.array([t]))[0]) - r, lo, hi, xtol=1e-15, rtol=1e-15))


def sublevel_intervals(comp_index: int, nu: RieszMeasure, r: float):
    """``d``-intervals of a radial part on which ``u(1 - d) < r``."""
    comp = nu.radial[comp_index]
    d = np.unique(np.concatenate([np.logspace(-14, 0, 561), np.linspace(comp.d_lo, 1.0, 201)]))
    # u vanishes on the circle, so d = 0 is never in the sublevel set
    d = d[(d >= comp.d_lo) & (d > 0.0) & (d <= 1.0)]
    ud = np.real(evaluate_u(nu, (1.0 - d).astype(complex) + 0j, strict=False)) if d.size else d
    inside = ud < r
    f = lambda t: float(evaluate_u(nu, np.array([1.0 - t], dtype=complex), strict=False)[0]) - r
    out = []
    start = d[0] if inside[0] else None
    for k in range(1, d.size):
        if inside[k] and not inside[k - 1]:
            start = brentq(f, d[k - 1], d[k], xtol=1e-15)
        elif not inside[k] and inside[k - 1]:
            out.append((start, brentq(f, d[k - 1], d[k], xtol=1e-15)))
            start = None
    if start is not None:
        out.append((start, d[-1]))
    return out


def demailly_functional(nu: RieszMeasure, r: float, phi: TestDensity, tol: float = 1e-9) -> QuadratureResult:
    """``μ_{u,r}(φ) = ∫_B φ dν + ∫_B (r - u) Δ̃φ dA`` with ``B = {u < r}``.

    ``B`` is decided pointwise at the quadrature nodes; atoms always lie in it.
    """
    if r >= 0:
        raise DomainError("the level r must be negative")
    intervals = [sublevel_intervals(i, nu, r) for i in range(len(nu.radial))]
    mass = radial_mass(nu, lambda w: phi.value(w), 0.0, tol=tol, intervals=intervals)
    R = level_radius(nu, r)
    feats = [(a, 0.0) for a, _ in nu.atoms] + [(z0, 0.0) for z0 in phi.zero_points() if abs(z0) < R]

    def F(z):
        u = evaluate_u(nu, z, tol=tol * 1e-2, rtol=1e-10, strict=False)
        return np.maximum(r - u, 0.0) * np.where(u < r, phi.laplacian(z), 0.0)

    area = _area_integral(F, R, feats, (), (), 0.0, tol)
    return mass + area


def partial_density(nu: RieszMeasure, r: float, theta, tol: float = 1e-12):
    """``p_r(θ) = ∫_{B_{u,r}} P(w, θ) dν(w)``; increases to ``α(θ)`` as ``r -> 0``."""
    if r >= 0:
        raise DomainError("the level r must be negative")
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    out = np.zeros(theta.size)
    for a, c in nu.atoms:
        out += c * poisson_unchecked(a, theta)
    for i, comp in enumerate(nu.radial):
        for lo, hi in sublevel_intervals(i, nu, r):
            for k, th in enumerate(theta):
                res = integrate_interval(lambda d: comp.weight(d) * poisson_radial(d, th), lo, hi,
                                         (comp.beta if lo == 0.0 else 0.0, 0.0), tol, rtol=tol)
                out[k] += res.value
    return out if out.size > 1 else float(out[0])


def weak_star_gap(nu: RieszMeasure, h: HarmonicFunction, phi: TestDensity, r: float, tol: float = 1e-10) -> float:
    """``|μ_{u,r}(φ h) - μ_u(φ h*)|``: Lelong-Jensen side against the boundary side."""
    test = ProductDensity(phi, HarmonicDensity(h))
    left = demailly_functional(nu, r, test, tol=tol)
    right = boundary_integral(test, nu, tol=min(tol, 1e-11))
    return abs(left.value - right.value)


# ------------------------------------------------------------------ membership

@dataclass(frozen=True)
class MembershipReport:
    verdict: str
    exponent: float
    exponents: tuple[tuple[float, float], ...]
    classical_member: bool
    classical_exponent: float
    predicted_slope: float | None = None
    fitted_slope: float | None = None
    boundary_fitted_slope: float | None = None
    notes: tuple[str, ...] = field(default_factory=tuple)


def combined_exponents(f: AnalyticFunction, p: float, nu: RieszMeasure):
    out: dict[float, float] = {}
    for t, e in f.singularities():
        out[_canon(t)] = out.get(_canon(t), 0.0) + p * e
    for t, e in BoundaryDensity(nu).singular_angles:
        out[_canon(t)] = out.get(_canon(t), 0.0) + e
    return tuple(sorted(out.items()))


def truncated_mass_increments(f: AnalyticFunction, p: float, nu: RieszMeasure, decades=range(2, 9),
                              tol: float = 1e-12):
    """Interior masses ``∫ |f|^p dν`` over the shells ``10^{-k-1} < 1 - |w| < 10^{-k}``."""
    out = []
    for k in decades:
        lo, hi = 10.0 ** (-k - 1), 10.0 ** (-k)
        total = 0.0
        for comp in nu.radial:
            a, b = max(lo, comp.d_lo), hi
            if b > a:
                total += integrate_interval(lambda d, c=comp: c.weight(d) * np.abs(f.eval(1.0 - d)) ** p, a, b,
                                            tol=tol, rtol=tol).value
        out.append(total)
    return np.array(out)


def boundary_mass_increments(f: AnalyticFunction, p: float, nu: RieszMeasure, decades=range(2, 9),
                             tol: float = 1e-12):
    """Boundary masses ``∫ |f*|^p α dλ`` over the angular shells ``10^{-k-1} < |θ| < 10^{-k}``."""
    out = []
    for k in decades:
        lo, hi = 10.0 ** (-k - 1), 10.0 ** (-k)
        g = lambda th: np.abs(f.boundary(th)) ** p * BoundaryDensity(nu)(th)
        r = integrate_interval(g, lo, hi, tol=tol, rtol=tol, peaks=[(lo, lo)])
        out.append(2.0 * r.value / (2.0 * math.pi))
    return np.array(out)


def divergence_slope(increments, decades=range(2, 9)) -> float:
    """Slope of ``log(increment)`` against ``log(1 - ρ)``: the exponent of the truncated mass."""
    x = np.log(10.0 ** -np.array(list(decades), dtype=float))
    return float(np.polyfit(x, np.log(increments), 1)[0])


def membership(f: AnalyticFunction, p: float, nu: RieszMeasure, diagnostics: bool = True) -> MembershipReport:
    """Decide ``f ∈ H^p_u`` from boundary exponents (``f* ∈ L^p(α λ)``).

    Diagnostics fit the growth of truncated masses near the singular
    angle 0 and compare with the predicted exponent ``1 - (p e_f + β)``.
    """
    exps = combined_exponents(f, p, nu)
    total = max((e for _, e in exps), default=0.0)
    cls = max((p * e for _, e in f.singularities()), default=0.0)
    classical = cls < 1.0
    verdict = "member" if classical and total < 1.0 else "non_member"
    notes = []
    if not classical:
        notes.append("not in classical H^p")
    pred = fit = bfit = None
    at0 = dict(exps).get(0.0, 0.0)
    if diagnostics and nu.radial and at0 > 0 and any(c.reaches_boundary for c in nu.radial):
        pred = 1.0 - at0
        fit = divergence_slope(truncated_mass_increments(f, p, nu))
        bfit = divergence_slope(boundary_mass_increments(f, p, nu))
    return MembershipReport(verdict, total, exps, classical, cls, pred, fit, bfit, tuple(notes))
