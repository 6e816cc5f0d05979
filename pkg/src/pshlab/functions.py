"""Expression trees for analytic and harmonic test functions on the disk.

Every analytic node knows its value, its exact derivative, its zeros inside
the disk (when these are structurally known) and its boundary singularities
``(θ_k, e_k)``, meaning ``|f(e^{iθ})| ~ |θ - θ_k|**-e_k``.  Nodes that are
structurally nonvanishing also provide a continuous branch of ``log f``,
which is what makes real powers ``f**q`` single valued.

The module also holds the *test densities* used by the Lelong-Jensen
functional: real functions ``φ`` with value, gradient and normalised
Laplacian ``Δ̃φ = Δφ / 2π``.

Gradients of real functions are encoded as the complex number
``φ_x + i φ_y``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, NotNonvanishingError
from .kernels import blaschke_factor, blaschke_factor_deriv

ZERO_TOL = 1e-13
CINF = complex(np.inf, 0.0)


def _z(z):
    return np.asarray(z, dtype=complex)


def fmt_number(x) -> str:
    """Shortest round-trip text for a real or complex number."""
    x = complex(x)
    if x.imag == 0.0:
        return repr(x.real)
    sign = "+" if x.imag >= 0 or math.isnan(x.imag) else "-"
    return f"{x.real!r}{sign}{abs(x.imag)!r}j"


def _merge_singularities(items, combine):
    out: dict[float, float] = {}
    for theta, e in items:
        key = _canon(theta)
        out[key] = combine(out[key], e) if key in out else e
    return tuple(sorted((t, e) for t, e in out.items() if e > 0))


def _canon(theta):
    t = math.remainder(float(theta), 2.0 * math.pi)
    return 0.0 if t == 0.0 else t


def _on_singular_ray(z, sings):
    """Mask of points on the unit circle at a singular angle."""
    mask = np.zeros(z.shape, dtype=bool)
    if not sings:
        return mask
    onc = np.abs(np.abs(z) - 1.0) <= 1e-15
    if not onc.any():
        return mask
    ang = np.angle(z)
    for theta, _ in sings:
        slack = 4.0 * np.finfo(float).eps * abs(theta)
        diff = ang - theta
        diff = np.where(np.abs(diff) > math.pi, np.remainder(diff + math.pi, 2 * math.pi) - math.pi, diff)
        mask |= onc & (np.abs(diff) <= slack)
    return mask


class AnalyticFunction:
    """Base class of the expression tree.

    Subclasses implement ``_eval``, ``_deriv``, ``zeros``, ``singularities``
    and ``to_expr``; nonvanishing nodes also implement ``_log``.
    """

    def eval(self, z):
        """Value at ``z``; ``inf`` at boundary singularities."""
        z = _z(z)
        sings = self.singularities()
        with np.errstate(all="ignore"):
            out = np.asarray(self._eval(z), dtype=complex)
        out = np.broadcast_to(out, z.shape).copy()
        bad = _on_singular_ray(z, sings)
        if bad.any():
            out[bad] = CINF
        return out if out.ndim else complex(out)

    __call__ = eval

    def deriv(self, z):
        z = _z(z)
        with np.errstate(all="ignore"):
            out = np.broadcast_to(np.asarray(self._deriv(z), dtype=complex), z.shape).copy()
        bad = _on_singular_ray(z, self.singularities())
        if bad.any():
            out[bad] = CINF
        return out if out.ndim else complex(out)

    def log(self, z):
        """Continuous branch of ``log f`` on the disk (nonvanishing trees only)."""
        with np.errstate(all="ignore"):
            out = np.asarray(self._log(_z(z)), dtype=complex)
        return out if out.ndim else complex(out)

    def _log(self, z):
        raise NotNonvanishingError(f"{self.to_expr()} is not structurally nonvanishing")

    def zeros(self) -> list[complex] | None:
        """Zeros in the open disk with multiplicity, or ``None`` if unknown."""
        return None

    def singularities(self) -> tuple[tuple[float, float], ...]:
        return ()

    def peaks(self) -> tuple[tuple[float, float], ...]:
        """``(angle, width)`` of sharp but bounded boundary features.

        These come from zeros or poles at distance ``width`` from the circle;
        ``width = 0`` marks a zero on the circle itself.
        """
        return ()

    def is_nonvanishing(self) -> bool:
        zs = self.zeros()
        if zs is None or zs:
            return False
        try:
            self.log(np.array([0.0]))
        except NotNonvanishingError:
            return False
        return True

    def boundary(self, theta):
        """Boundary trace ``f(e^{iθ})``."""
        return self.eval(np.exp(1j * np.asarray(theta, dtype=float)))

    def to_expr(self) -> str:
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} {self.to_expr()}>"

    def __mul__(self, other):
        if isinstance(other, AnalyticFunction):
            return Product((self, other))
        return Scale(other, self)

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, AnalyticFunction):
            other = Constant(other)
        return Sum((self, other))

    __radd__ = __add__

    def __pow__(self, q):
        return Power(self, q)


@dataclass(frozen=True, repr=False)
class Constant(AnalyticFunction):
    c: complex

    def _eval(self, z):
        return np.full(z.shape, complex(self.c))

    def _deriv(self, z):
        return np.zeros(z.shape, dtype=complex)

    def _log(self, z):
        if self.c == 0:
            return super()._log(z)
        return np.full(z.shape, np.log(complex(self.c)))

    def zeros(self):
        return [] if self.c != 0 else None

    def to_expr(self):
        return f"const {fmt_number(self.c)}"


@dataclass(frozen=True, repr=False)
class Monomial(AnalyticFunction):
    """``z**m`` for an integer ``m >= 0``."""

    m: int = 1

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 0:
            raise DomainError("monomial degree must be a nonnegative integer")

    def _eval(self, z):
        return z ** self.m

    def _deriv(self, z):
        return self.m * z ** (self.m - 1) if self.m else np.zeros(z.shape, dtype=complex)

    def _log(self, z):
        if self.m:
            return super()._log(z)
        return np.zeros(z.shape, dtype=complex)

    def zeros(self):
        return [0j] * self.m

    def to_expr(self):
        return "z" if self.m == 1 else f"mono {self.m}"


def identity() -> Monomial:
    return Monomial(1)


def _inside(r):
    return abs(r) < 1.0 - ZERO_TOL


@dataclass(frozen=True, repr=False)
class Affine(AnalyticFunction):
    """``c1 * z + c0``."""

    c1: complex
    c0: complex

    def __post_init__(self):
        if self.c1 == 0:
            raise DomainError("affine map needs a nonzero slope; use const")

    def _eval(self, z):
        return complex(self.c1) * z + complex(self.c0)

    def _deriv(self, z):
        return np.full(z.shape, complex(self.c1))

    def root(self) -> complex:
        return -complex(self.c0) / complex(self.c1)

    def _log(self, z):
        c0, c1 = complex(self.c0), complex(self.c1)
        if abs(c0) < abs(c1):
            return super()._log(z)
        return np.log(c0) + np.log1p(c1 / c0 * z)

    def zeros(self):
        r = self.root()
        return [r] if _inside(r) else []

    def peaks(self):
        return _near_circle([self.root()])

    def to_expr(self):
        return f"affine {fmt_number(self.c1)} {fmt_number(self.c0)}"


@dataclass(frozen=True, repr=False)
class Polynomial(AnalyticFunction):
    """``sum_k coeffs[k] * z**k``."""

    coeffs: tuple[complex, ...]

    def __post_init__(self):
        c = tuple(complex(x) for x in self.coeffs)
        while len(c) > 1 and c[-1] == 0:
            c = c[:-1]
        if not c or all(x == 0 for x in c):
            raise DomainError("polynomial must not vanish identically")
        object.__setattr__(self, "coeffs", c)

    def _eval(self, z):
        return np.polyval(np.array(self.coeffs[::-1]), z)

    def _deriv(self, z):
        c = np.array(self.coeffs)
        if c.size == 1:
            return np.zeros(z.shape, dtype=complex)
        d = c[1:] * np.arange(1, c.size)
        return np.polyval(d[::-1], z)

    def roots(self) -> np.ndarray:
        if len(self.coeffs) == 1:
            return np.zeros(0, dtype=complex)
        return np.roots(np.array(self.coeffs[::-1]))

    def _log(self, z):
        r = self.roots()
        if any(abs(x) < 1.0 for x in r):
            return super()._log(z)
        out = np.full(z.shape, np.log(self.coeffs[-1]))
        for x in r:
            out = out + np.log(-x) + np.log1p(-z / x)
        return out

    def zeros(self):
        return sorted((complex(x) for x in self.roots() if _inside(x)), key=lambda w: (w.real, w.imag))

    def peaks(self):
        return _near_circle(self.roots())

    def to_expr(self):
        return "poly " + " ".join(fmt_number(c) for c in self.coeffs)


def taylor_partial_sum(a_pow: float, n_terms: int) -> Polynomial:
    """Partial sum of degree ``n_terms`` of the Taylor series of ``(1 - z)**-a_pow``."""
    c = [1.0]
    for k in range(1, int(n_terms) + 1):
        c.append(c[-1] * (k - 1 + a_pow) / k)
    return Polynomial(tuple(c))


@dataclass(frozen=True, repr=False)
class Mobius(AnalyticFunction):
    """``(a z + b) / (c z + d)`` with its pole off the open disk."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        a, b, c, d = (complex(x) for x in (self.a, self.b, self.c, self.d))
        if a * d - b * c == 0:
            raise DomainError("degenerate Mobius map")
        if abs(d) < abs(c):
            raise DomainError("Mobius pole lies inside the disk")

    def _eval(self, z):
        return (complex(self.a) * z + complex(self.b)) / (complex(self.c) * z + complex(self.d))

    def _deriv(self, z):
        a, b, c, d = (complex(x) for x in (self.a, self.b, self.c, self.d))
        return (a * d - b * c) / (c * z + d) ** 2

    def _log(self, z):
        a, b, c, d = (complex(x) for x in (self.a, self.b, self.c, self.d))
        if a == 0:
            num = np.full(z.shape, np.log(b))
        else:
            num = Affine(a, b)._log(z)
        den = np.full(z.shape, np.log(d)) if c == 0 else Affine(c, d)._log(z)
        return num - den

    def zeros(self):
        a, b = complex(self.a), complex(self.b)
        if a == 0:
            return []
        r = -b / a
        return [r] if _inside(r) else []

    def peaks(self):
        a, b, c, d = (complex(x) for x in (self.a, self.b, self.c, self.d))
        pts = ([-b / a] if a != 0 else []) + ([-d / c] if c != 0 else [])
        return _near_circle(pts)

    def singularities(self):
        c, d = complex(self.c), complex(self.d)
        if c != 0 and abs(d) == abs(c):
            pole = -d / c
            return ((_canon(math.atan2(pole.imag, pole.real)), 1.0),)
        return ()

    def to_expr(self):
        return "mobius " + " ".join(fmt_number(x) for x in (self.a, self.b, self.c, self.d))


@dataclass(frozen=True, repr=False)
class PowerBranch(AnalyticFunction):
    """``(1 - e^{-iθ0} z)**-a_pow`` on the principal branch (``Re(1 - e^{-iθ0}z) > 0``)."""

    a_pow: float
    angle: float = 0.0

    def _w(self):
        return complex(math.cos(self.angle), -math.sin(self.angle))

    def _log(self, z):
        return -self.a_pow * np.log1p(-self._w() * z)

    def _eval(self, z):
        return np.exp(self._log(z))

    def _deriv(self, z):
        w = self._w()
        return self.a_pow * w * np.exp(-(self.a_pow + 1.0) * np.log1p(-w * z))

    def zeros(self):
        return []

    def singularities(self):
        return ((_canon(self.angle), float(self.a_pow)),) if self.a_pow > 0 else ()

    def to_expr(self):
        if self.angle == 0.0:
            return f"pow {fmt_number(self.a_pow)}"
        return f"pow {fmt_number(self.a_pow)} {fmt_number(self.angle)}"


@dataclass(frozen=True, repr=False)
class Blaschke(AnalyticFunction):
    """Finite Blaschke product ``z**origin_order * prod_j b_{a_j}(z)``."""

    zero_list: tuple[complex, ...] = ()
    origin_order: int = 0

    def __post_init__(self):
        zs = tuple(complex(a) for a in self.zero_list)
        for a in zs:
            if a == 0:
                raise DomainError("zeros at the origin go into origin_order")
            if abs(a) >= 1.0:
                raise DomainError(f"Blaschke zero {a} is not inside the disk")
        if int(self.origin_order) != self.origin_order or self.origin_order < 0:
            raise DomainError("origin order must be a nonnegative integer")
        object.__setattr__(self, "zero_list", zs)

    def _eval(self, z):
        out = z ** self.origin_order
        for a in self.zero_list:
            out = out * blaschke_factor(z, a)
        return out

    def _deriv(self, z):
        m = self.origin_order
        factors = [z ** m] + [blaschke_factor(z, a) for a in self.zero_list]
        derivs = [m * z ** (m - 1) if m else np.zeros(z.shape, dtype=complex)]
        derivs += [blaschke_factor_deriv(z, a) for a in self.zero_list]
        return _product_rule(factors, derivs)

    def _log(self, z):
        if self.zero_list or self.origin_order:
            return super()._log(z)
        return np.zeros(z.shape, dtype=complex)

    def zeros(self):
        return [0j] * self.origin_order + list(self.zero_list)

    def to_expr(self):
        parts = ["blaschke", str(self.origin_order)] + [fmt_number(a) for a in self.zero_list]
        return " ".join(parts)


def _near_circle(points, reach=0.5):
    out = []
    for r in points:
        r = complex(r)
        gap = abs(abs(r) - 1.0)
        if gap < reach:
            out.append((math.atan2(r.imag, r.real), gap))
    return tuple(out)


def _product_rule(values, derivs):
    total = np.zeros(np.shape(values[0]), dtype=complex)
    for i in range(len(values)):
        term = derivs[i]
        for j, v in enumerate(values):
            if j != i:
                term = term * v
        total = total + term
    return total


@dataclass(frozen=True, repr=False)
class Outer(AnalyticFunction):
    """An outer function supplied by an object with ``eval``, ``deriv``, ``log``
    and ``singularities`` methods (see :mod:`pshlab.factorize`)."""

    outer: object

    def _eval(self, z):
        return self.outer.eval(z)

    def _deriv(self, z):
        return self.outer.deriv(z)

    def _log(self, z):
        return self.outer.log(z)

    def zeros(self):
        return []

    def singularities(self):
        return tuple(self.outer.singularities())

    def peaks(self):
        return tuple(self.outer.peaks())

    def to_expr(self):
        return "outer"


@dataclass(frozen=True, repr=False)
class Product(AnalyticFunction):
    factors: tuple[AnalyticFunction, ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))

    def _eval(self, z):
        out = np.ones(z.shape, dtype=complex)
        for f in self.factors:
            out = out * f._eval(z)
        return out

    def _deriv(self, z):
        return _product_rule([f._eval(z) for f in self.factors], [f._deriv(z) for f in self.factors])

    def _log(self, z):
        out = np.zeros(z.shape, dtype=complex)
        for f in self.factors:
            out = out + f._log(z)
        return out

    def zeros(self):
        out = []
        for f in self.factors:
            zs = f.zeros()
            if zs is None:
                return None
            out += zs
        return out

    def singularities(self):
        return _merge_singularities([s for f in self.factors for s in f.singularities()], lambda a, b: a + b)

    def peaks(self):
        return tuple(pk for f in self.factors for pk in f.peaks())

    def to_expr(self):
        return "mul " + " ".join(f"({f.to_expr()})" for f in self.factors)


@dataclass(frozen=True, repr=False)
class Sum(AnalyticFunction):
    terms: tuple[AnalyticFunction, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    def _eval(self, z):
        out = np.zeros(z.shape, dtype=complex)
        for f in self.terms:
            out = out + f._eval(z)
        return out

    def _deriv(self, z):
        out = np.zeros(z.shape, dtype=complex)
        for f in self.terms:
            out = out + f._deriv(z)
        return out

    def singularities(self):
        return _merge_singularities([s for f in self.terms for s in f.singularities()], max)

    def peaks(self):
        return tuple(pk for f in self.terms for pk in f.peaks())

    def to_expr(self):
        return "add " + " ".join(f"({f.to_expr()})" for f in self.terms)


@dataclass(frozen=True, repr=False)
class Scale(AnalyticFunction):
    c: complex
    base: AnalyticFunction

    def __post_init__(self):
        if self.c == 0:
            raise DomainError("scale factor must be nonzero")

    def _eval(self, z):
        return complex(self.c) * self.base._eval(z)

    def _deriv(self, z):
        return complex(self.c) * self.base._deriv(z)

    def _log(self, z):
        return np.log(complex(self.c)) + self.base._log(z)

    def zeros(self):
        return self.base.zeros()

    def singularities(self):
        return self.base.singularities()

    def peaks(self):
        return self.base.peaks()

    def to_expr(self):
        return f"scale {fmt_number(self.c)} ({self.base.to_expr()})"


@dataclass(frozen=True, repr=False)
class Power(AnalyticFunction):
    """``exp(q log f)`` for a structurally nonvanishing ``f`` and real ``q``."""

    base: AnalyticFunction
    q: float

    def __post_init__(self):
        if not self.base.is_nonvanishing():
            raise NotNonvanishingError(f"real powers need a nonvanishing base, got {self.base.to_expr()}")

    def _log(self, z):
        return self.q * self.base._log(z)

    def _eval(self, z):
        return np.exp(self._log(z))

    def _deriv(self, z):
        return self.q * self.base._deriv(z) * np.exp((self.q - 1.0) * self.base._log(z))

    def zeros(self):
        return []

    def singularities(self):
        if self.q <= 0:
            return ()
        return tuple((t, self.q * e) for t, e in self.base.singularities())

    def peaks(self):
        return self.base.peaks()

    def to_expr(self):
        return f"rpow {fmt_number(self.q)} ({self.base.to_expr()})"


def laplacian_abs_p(f: AnalyticFunction, p: float, z):
    """Normalised Laplacian ``Δ̃|f|^p = (p^2 / 2π) |f|^{p-2} |f'|^2``.

    Returns 0 at zeros of ``f`` when ``p < 2`` (the weak-density convention).
    """
    z = _z(z)
    fv = np.abs(np.asarray(f.eval(z)))
    dv = np.abs(np.asarray(f.deriv(z)))
    with np.errstate(divide="ignore", invalid="ignore"):
        out = p * p / (2.0 * math.pi) * fv ** (p - 2.0) * dv * dv
    out = np.where(fv == 0.0, 0.0 if p != 2 else p * p / (2.0 * math.pi) * dv * dv, out)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------- harmonic

class HarmonicFunction:
    """Real harmonic function with value, gradient ``h_x + i h_y`` and boundary trace."""

    def eval(self, z):
        raise NotImplementedError

    __call__ = lambda self, z: self.eval(z)

    def gradient(self, z):
        raise NotImplementedError

    def boundary(self, theta):
        return self.eval(np.exp(1j * np.asarray(theta, dtype=float)))

    def singularities(self):
        return ()

    def peaks(self):
        return ()


@dataclass(frozen=True)
class RealPart(HarmonicFunction):
    f: AnalyticFunction

    def eval(self, z):
        return np.real(self.f.eval(z))

    def gradient(self, z):
        return np.conj(self.f.deriv(z))

    def singularities(self):
        return self.f.singularities()

    def peaks(self):
        return self.f.peaks()


@dataclass(frozen=True)
class ImagPart(HarmonicFunction):
    f: AnalyticFunction

    def eval(self, z):
        return np.imag(self.f.eval(z))

    def gradient(self, z):
        return 1j * np.conj(self.f.deriv(z))

    def singularities(self):
        return self.f.singularities()

    def peaks(self):
        return self.f.peaks()


class PoissonExtension(RealPart):
    """Harmonic extension of real samples on the uniform grid ``2πk/n``.

    The samples are expanded by FFT; the extension is the real part of the
    analytic polynomial ``ĥ_0 + 2 sum_{n>0} ĥ_n z^n``.
    """

    def __init__(self, samples: Sequence[float]):
        h = np.asarray(samples, dtype=float)
        c = np.fft.fft(h) / h.size
        half = h.size // 2
        coeffs = np.concatenate([[c[0].real], 2.0 * c[1:half]])
        if h.size % 2 == 0:
            coeffs = np.concatenate([coeffs, [c[half].real]])
        super().__init__(Polynomial(tuple(coeffs)))


# ---------------------------------------------------------------- test densities

class TestDensity:
    """Real test function ``φ`` on the closed disk for the Lelong-Jensen functional."""

    __test__ = False  # not a pytest class

    def value(self, z):
        raise NotImplementedError

    def gradient(self, z):
        raise NotImplementedError

    def laplacian(self, z):
        """Normalised Laplacian ``Δφ / 2π``."""
        raise NotImplementedError

    def boundary(self, theta):
        return self.value(np.exp(1j * np.asarray(theta, dtype=float)))

    def singularities(self):
        return ()

    def peaks(self):
        """``(angle, width)`` of sharp but bounded boundary features."""
        return ()

    def zero_points(self):
        """Interior points where ``Δ̃φ`` is singular (zeros of ``f`` for ``|f|^p``)."""
        return []


@dataclass(frozen=True)
class ConstantDensity(TestDensity):
    c: float = 1.0

    def value(self, z):
        return np.full(np.shape(z), float(self.c))

    def gradient(self, z):
        return np.zeros(np.shape(z), dtype=complex)

    def laplacian(self, z):
        return np.zeros(np.shape(z))


@dataclass(frozen=True)
class AbsPower(TestDensity):
    """``|f|^p`` for an analytic tree ``f``."""

    f: AnalyticFunction
    p: float

    def value(self, z):
        return np.abs(self.f.eval(z)) ** self.p

    def gradient(self, z):
        fv = np.asarray(self.f.eval(z))
        a = np.abs(fv)
        with np.errstate(divide="ignore", invalid="ignore"):
            g = self.p * a ** (self.p - 2.0) * fv * np.conj(self.f.deriv(z))
        return np.where(a == 0.0, 0.0, g)

    def laplacian(self, z):
        return laplacian_abs_p(self.f, self.p, z)

    def singularities(self):
        return tuple((t, self.p * e) for t, e in self.f.singularities())

    def peaks(self):
        return self.f.peaks()

    def zero_points(self):
        return list(self.f.zeros() or [])


@dataclass(frozen=True)
class AbsHarmonicPower(TestDensity):
    """``|h|^p`` for a harmonic ``h``; ``Δ̃|h|^p = (p(p-1)/2π)|h|^{p-2}|∇h|^2`` off the zero set."""

    h: HarmonicFunction
    p: float

    def value(self, z):
        return np.abs(self.h.eval(z)) ** self.p

    def gradient(self, z):
        hv = self.h.eval(z)
        with np.errstate(divide="ignore", invalid="ignore"):
            g = self.p * np.abs(hv) ** (self.p - 2.0) * hv * self.h.gradient(z)
        return np.where(hv == 0.0, 0.0, g)

    def laplacian(self, z):
        hv = np.abs(self.h.eval(z))
        gv = np.abs(self.h.gradient(z))
        with np.errstate(divide="ignore", invalid="ignore"):
            out = self.p * (self.p - 1.0) / (2.0 * math.pi) * hv ** (self.p - 2.0) * gv * gv
        return np.where(hv == 0.0, 0.0 if self.p != 2 else gv * gv / math.pi, out)

    def singularities(self):
        return tuple((t, self.p * e) for t, e in self.h.singularities())

    def peaks(self):
        return self.h.peaks()


@dataclass(frozen=True)
class HarmonicDensity(TestDensity):
    h: HarmonicFunction

    def value(self, z):
        return self.h.eval(z)

    def gradient(self, z):
        return self.h.gradient(z)

    def laplacian(self, z):
        return np.zeros(np.shape(z))

    def singularities(self):
        return self.h.singularities()

    def peaks(self):
        return self.h.peaks()


@dataclass(frozen=True)
class RadialPolynomialDensity(TestDensity):
    """``sum_k c_k |z|^{2k}``."""

    coeffs: tuple[float, ...]

    def value(self, z):
        r2 = np.abs(_z(z)) ** 2
        return np.polyval(np.array(self.coeffs[::-1], dtype=float), r2)

    def gradient(self, z):
        z = _z(z)
        r2 = np.abs(z) ** 2
        c = np.array(self.coeffs, dtype=float)
        d = np.polyval((c[1:] * np.arange(1, c.size))[::-1], r2) if c.size > 1 else 0.0 * r2
        return 2.0 * z * d

    def laplacian(self, z):
        r2 = np.abs(_z(z)) ** 2
        c = np.array(self.coeffs, dtype=float)
        if c.size == 1:
            return np.zeros(np.shape(z))
        k = np.arange(1, c.size)
        return np.polyval((4.0 * k * k * c[1:])[::-1], r2) / (2.0 * math.pi)


@dataclass(frozen=True)
class ProductDensity(TestDensity):
    """``φ · ψ``; Laplacian by the product rule."""

    first: TestDensity
    second: TestDensity

    def value(self, z):
        return self.first.value(z) * self.second.value(z)

    def gradient(self, z):
        return self.first.value(z) * self.second.gradient(z) + self.second.value(z) * self.first.gradient(z)

    def laplacian(self, z):
        ga, gb = self.first.gradient(z), self.second.gradient(z)
        dot = np.real(np.conj(ga) * gb)
        return (self.first.value(z) * self.second.laplacian(z) + self.second.value(z) * self.first.laplacian(z)
                + dot / math.pi)

    def singularities(self):
        return _merge_singularities(list(self.first.singularities()) + list(self.second.singularities()),
                                    lambda a, b: a + b)

    def peaks(self):
        return tuple(self.first.peaks()) + tuple(self.second.peaks())

    def zero_points(self):
        return self.first.zero_points() + self.second.zero_points()
