"""Riesz measures of exhaustion functions and the objects derived from them.

An exhaustion ``u`` of the disk is described by its Riesz measure
``ν = Δ̃u``: finitely many atoms plus radial components with density
``κ (1 - s)**-β`` on ``0 <= s <= s_max``.  From ``ν`` one recovers

* the potential ``u(z) = ∫ G(z, w) dν(w)``,
* the boundary density ``α(θ) = ∫ P(w, θ) dν(w)`` (so that ``μ_u = α λ``).

Radial integrals are written in the variable ``d = 1 - s``, which keeps
full relative accuracy near the boundary point 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, InfiniteMassError, QuadratureError
from .kernels import green_unchecked, poisson_unchecked
from .quadrature import (DEFAULT_BUDGET, QuadratureResult, integrate_circle, integrate_pieces, power_q)

TINY = 1e-300


@dataclass(frozen=True)
class RadialComponent:
    """Density ``kappa * (1 - s)**-beta`` on the radius ``[0, s_max]``."""

    beta: float
    kappa: float = 1.0
    s_max: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.beta:
            raise DomainError("radial exponent must be nonnegative")
        if not self.kappa > 0.0:
            raise DomainError("radial scale must be positive")
        if not 0.0 < self.s_max <= 1.0:
            raise DomainError("radial support must end in (0, 1]")
        if self.beta >= 1.0 and self.s_max == 1.0:
            raise InfiniteMassError(f"radial exponent {self.beta} >= 1 reaching the boundary has infinite mass")

    @property
    def d_lo(self) -> float:
        return 1.0 - self.s_max

    @property
    def reaches_boundary(self) -> bool:
        return self.s_max == 1.0

    def mass(self) -> float:
        b = self.beta
        if b == 1.0:
            return self.kappa * -math.log(self.d_lo)
        return self.kappa * (1.0 - self.d_lo ** (1.0 - b)) / (1.0 - b)

    def weight(self, d):
        return self.kappa * np.asarray(d, dtype=float) ** -self.beta


@dataclass(frozen=True)
class RieszMeasure:
    """Finite positive measure on the open disk: atoms plus radial parts.

    Instances are immutable; combine them with ``+`` and scalar ``*``.
    """

    atoms: tuple[tuple[complex, float], ...] = ()
    radial: tuple[RadialComponent, ...] = ()

    def __post_init__(self):
        atoms = tuple((complex(a), float(c)) for a, c in self.atoms)
        for a, c in atoms:
            if not abs(a) < 1.0:
                raise DomainError(f"atom location {a} is not inside the disk")
            if not c > 0.0:
                raise DomainError("atom masses must be positive")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "radial", tuple(self.radial))
        if not atoms and not self.radial:
            raise DomainError("a Riesz measure needs at least one atom or radial component")

    @classmethod
    def atom(cls, location=0.0, mass=1.0) -> "RieszMeasure":
        return cls(atoms=((location, mass),))

    @classmethod
    def radial_power(cls, beta, kappa=1.0, s_max=1.0) -> "RieszMeasure":
        return cls(radial=(RadialComponent(beta, kappa, s_max),))

    def __add__(self, other: "RieszMeasure") -> "RieszMeasure":
        return RieszMeasure(self.atoms + other.atoms, self.radial + other.radial)

    def __mul__(self, c: float) -> "RieszMeasure":
        c = float(c)
        if not c > 0:
            raise DomainError("measures can only be scaled by positive numbers")
        return RieszMeasure(tuple((a, c * m) for a, m in self.atoms),
                            tuple(RadialComponent(r.beta, c * r.kappa, r.s_max) for r in self.radial))

    __rmul__ = __mul__

    @property
    def is_atomic(self) -> bool:
        return not self.radial

    def boundary_exponent(self) -> float:
        """Exponent ``e`` with ``α(θ) ~ |θ|**-e`` at ``θ = 0`` (0 if bounded)."""
        return max((r.beta for r in self.radial if r.reaches_boundary), default=0.0)

    def has_log_boundary_singularity(self) -> bool:
        return any(r.beta == 0.0 and r.reaches_boundary for r in self.radial) and self.boundary_exponent() == 0.0

    def density(self) -> "BoundaryDensity":
        return BoundaryDensity(self)


def total_mass(nu: RieszMeasure) -> float:
    """``ν(D)``: atom masses plus closed-form radial masses."""
    return math.fsum([c for _, c in nu.atoms] + [r.mass() for r in nu.radial])


# ---------------------------------------------------------------- radial pieces

def _radial_pieces(comp: RadialComponent, mid, width, log_mid):
    """Piece arrays covering ``d in [d_lo, 1]`` for one problem per ``mid``.

    ``mid`` is the location of the integrand's near-singularity (clipped into
    the interval), ``width`` its scale; ``log_mid`` requests a logarithmic
    grading at ``mid`` instead of a sinh spread.
    """
    n = mid.size
    lo = comp.d_lo
    m = np.clip(mid, lo, 1.0)
    q_lo = float(power_q(comp.beta)) if lo == 0.0 else 1.0
    left = 0.5 * (m - lo)
    right = 0.5 * (1.0 - m)
    w = np.where(log_mid, 0.0, np.maximum(width, TINY))
    qm = np.where(log_mid, 2.0, 1.0)
    anchor = np.stack([np.full(n, lo), m, m, np.ones(n)], axis=1).ravel()
    direction = np.tile([1.0, -1.0, 1.0, -1.0], n)
    length = np.stack([left, left, right, right], axis=1).ravel()
    q = np.stack([np.full(n, q_lo), qm, qm, np.ones(n)], axis=1).ravel()
    wid = np.stack([np.zeros(n), w, w, np.zeros(n)], axis=1).ravel()
    owner = np.repeat(np.arange(n), 4)
    return anchor, direction, length, q, wid, owner


def green_radial(z, d):
    """``G(z, 1 - d)`` evaluated without forming ``1 - d`` in the hard places."""
    z = np.asarray(z, dtype=complex)
    d = np.asarray(d, dtype=float)
    one_minus_z = 1.0 - z
    den = np.abs(one_minus_z + d * z)
    az = np.abs(z)
    q = d * (2.0 - d) * (1.0 - az) * (1.0 + az) / (den * den)
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = np.log(np.abs(d - one_minus_z)) - np.log(den)
        safe = 0.5 * np.log1p(-np.minimum(q, 1.0))
    return np.where(q < 0.5, safe, direct)


def poisson_radial(d, theta):
    """``P(1 - d, θ) = d(2 - d) / (d^2 + 4(1 - d) sin^2(θ/2))``."""
    s = np.sin(0.5 * np.asarray(theta, dtype=float))
    d = np.asarray(d, dtype=float)
    return d * (2.0 - d) / (d * d + 4.0 * (1.0 - d) * s * s)


def radial_integral(comp: RadialComponent, integrand: Callable, n: int, mid, width, log_mid, *,
                    tol=1e-13, rtol=1e-12, budget=DEFAULT_BUDGET, is_complex=False):
    """``κ ∫ integrand(d, k) d**-β dd`` over ``[d_lo, 1]`` for ``k < n``."""
    pieces = _radial_pieces(comp, np.asarray(mid, dtype=float), np.asarray(width, dtype=float),
                            np.asarray(log_mid, dtype=bool))
    anchor, direction, length, q, wid, owner = pieces

    def g(d, k):
        with np.errstate(divide="ignore"):
            return integrand(d, k) * comp.weight(np.maximum(d, 0.0))

    return integrate_pieces(g, anchor, direction, length, owner, n, q=q, width=wid, tol=tol, rtol=rtol,
                            budget=budget, is_complex=is_complex)


# ------------------------------------------------------------------ potentials

def evaluate_u(nu: RieszMeasure, z, *, tol=1e-13, rtol=1e-11, strict=True):
    """Potential ``u(z) = ∫ G(z, w) dν(w)`` (negative inside the disk).

    Returns ``-inf`` at atom locations.  Accepts arrays.  With ``strict``
    a nonconverged radial integral raises :class:`QuadratureError`.
    """
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) >= 1.0):
        raise DomainError("u is evaluated inside the open disk")
    flat = z.ravel()
    out = np.zeros(flat.size)
    for a, c in nu.atoms:
        out += c * green_unchecked(flat, a)
    for comp in nu.radial:
        val, err, _, ok = radial_integral(
            comp, lambda d, k: green_radial(flat[k], d), flat.size,
            1.0 - flat.real, np.abs(flat.imag), flat.imag == 0.0, tol=tol, rtol=rtol)
        if strict and not ok.all():
            raise QuadratureError(f"potential did not converge (worst error {err.max():.3e})")
        out += val
    return out.reshape(z.shape) if z.ndim else float(out[0])


# ------------------------------------------------------------ boundary density

@dataclass(frozen=True)
class BoundaryDensity:
    """The density ``α = dμ_u / dλ`` of a Riesz measure, with singularity metadata.

    Call it with an array of angles.  ``singular_angles`` lists ``(θ, e)``
    where ``α ~ |θ - θ_k|**-e``; ``log_angles`` lists angles of logarithmic
    blow-up; ``peaks`` lists ``(θ, width)`` of bounded but sharp features
    caused by atoms near the circle.
    """

    source: RieszMeasure
    singular_angles: tuple[tuple[float, float], ...] = field(init=False)
    log_angles: tuple[float, ...] = field(init=False)
    peaks: tuple[tuple[float, float], ...] = field(init=False)

    def __post_init__(self):
        e = self.source.boundary_exponent()
        object.__setattr__(self, "singular_angles", ((0.0, e),) if e > 0 else ())
        object.__setattr__(self, "log_angles", (0.0,) if self.source.has_log_boundary_singularity() else ())
        peaks = tuple((math.atan2(a.imag, a.real), 1.0 - abs(a)) for a, _ in self.source.atoms if abs(a) > 0.5)
        object.__setattr__(self, "peaks", peaks)

    @property
    def unbounded(self) -> bool:
        return bool(self.singular_angles or self.log_angles)

    def exponent_at(self, theta: float) -> float:
        for t, e in self.singular_angles:
            if _angle_eq(theta, t):
                return e
        return 0.0

    def __call__(self, theta, *, rtol=1e-12):
        return boundary_density(self.source, theta, rtol=rtol)

    def asymptotic_constant(self) -> float:
        """Leading constant ``C`` in ``α(θ) ≈ C |θ|**-β`` for the dominant radial part."""
        comps = [r for r in self.source.radial if r.reaches_boundary and r.beta == self.source.boundary_exponent()]
        if not comps or comps[0].beta == 0.0:
            return 0.0
        b = comps[0].beta
        return sum(r.kappa for r in comps) * math.pi / math.sin(0.5 * math.pi * b)


def _angle_eq(a, b, eps=1e-15):
    return abs(math.remainder(a - b, 2.0 * math.pi)) <= eps


def boundary_density(nu: RieszMeasure, theta, *, rtol=1e-12, tol=1e-14, strict=True):
    """``α(θ) = ∫ P(w, θ) dν(w)``; ``+inf`` where a radial part makes it unbounded."""
    theta = np.asarray(theta, dtype=float)
    flat = theta.ravel()
    out = np.zeros(flat.size)
    for a, c in nu.atoms:
        out += c * poisson_unchecked(a, flat)
    for comp in nu.radial:
        c = 2.0 * np.abs(np.sin(0.5 * flat))
        hit = c == 0.0
        work = np.nonzero(~hit | (comp.d_lo > 0))[0]
        if work.size:
            cw = c[work]
            tw = flat[work]
            width = np.maximum(cw, comp.d_lo)
            val, err, _, ok = radial_integral(
                comp, lambda d, k: poisson_radial(d, tw[k]), work.size, cw, width,
                np.zeros(work.size, dtype=bool), tol=tol, rtol=rtol)
            if strict and not ok.all():
                raise QuadratureError(f"boundary density did not converge (worst error {err.max():.3e})")
            out[work] += val
        if comp.reaches_boundary:
            out[hit] = np.inf
    return out.reshape(theta.shape) if theta.ndim else float(out[0])


def density_lower_bound(nu: RieszMeasure, grid_size: int = 4096) -> float:
    """Minimum of ``α`` over the uniform grid ``2πk/grid_size``."""
    if grid_size < 16:
        raise DomainError("grid_size must be at least 16")
    theta = 2.0 * math.pi * np.arange(grid_size) / grid_size
    return float(np.min(boundary_density(nu, theta)))


def fit_density_asymptotics(nu: RieszMeasure, thetas: Sequence[float] = (1e-4, 1e-5, 1e-6, 1e-7)):
    """Least-squares fit of ``log α = log C - e log θ`` at small angles.

    Returns ``(slope, constant)``; the slope estimates ``-e``.
    """
    th = np.asarray(thetas, dtype=float)
    vals = boundary_density(nu, th)
    slope, icpt = np.polyfit(np.log(th), np.log(vals), 1)
    return float(slope), float(math.exp(icpt))


def mu_u(nu: RieszMeasure, phi: Callable, singular_angles: Sequence[tuple[float, float]] = (), *,
         tol: float = 1e-10, rtol: float = 1e-10, log_angles: Sequence[float] = (), peaks=(),
         budget: int = DEFAULT_BUDGET) -> QuadratureResult:
    """``μ_u(φ) = ∫ φ α dλ`` for a boundary function ``φ(θ)``.

    ``singular_angles`` are the exponents of ``φ``; they are added to those of
    ``α`` angle by angle, and a combined exponent of 1 or more is reported as
    divergent without integrating.
    """
    dens = BoundaryDensity(nu)
    combined: dict[float, float] = {}
    for t, e in list(singular_angles) + list(dens.singular_angles):
        key = _canonical_angle(t)
        combined[key] = combined.get(key, 0.0) + float(e)
    if combined and max(combined.values()) >= 1.0:
        return QuadratureResult.diverges(max(combined.values()))
    logs = list(log_angles) + list(dens.log_angles)
    pk = list(peaks) + list(dens.peaks)

    def g(th):
        with np.errstate(invalid="ignore"):
            return phi(th) * boundary_density(nu, th, rtol=min(1e-12, 1e-2 * rtol))

    return integrate_circle(g, list(combined.items()), tol, rtol=rtol, peaks=pk, log_angles=logs, budget=budget)


def _canonical_angle(t):
    t = math.remainder(float(t), 2.0 * math.pi)
    return 0.0 if t == 0.0 else t
