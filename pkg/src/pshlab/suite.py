"""Verification suites run by ``pshlab verify``.

Each check computes one quantity, compares it with a threshold and carries
a short tag naming the property it exercises.  The ``core`` suite covers
Lelong-Jensen monotonicity, norm-route agreement, the isometry and
deflation; ``full`` adds the remaining properties.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .factorize import OuterFunction, ball_probe, deflate, isometry_report
from .functions import (AbsPower, Affine, Constant, ConstantDensity, HarmonicDensity, Mobius, Monomial, PowerBranch,
                        Product, RealPart, taylor_partial_sum)
from .hardy import (DEFAULT_R_GRID, boundary_integral, classical_norm, demailly_functional, membership,
                    weak_star_gap, weighted_norm_boundary, weighted_norm_interior)
from .measures import (RieszMeasure, boundary_density, density_lower_bound, evaluate_u, fit_density_asymptotics,
                       mu_u, total_mass)

TAGS = {
    "classical": "classical-anchor",
    "routes": "norm-route-agreement",
    "lj": "lelong-jensen-monotonicity",
    "lj_limit": "lelong-jensen-limit",
    "counterexample": "weighted-counterexample",
    "potential": "radial-potential-decay",
    "density": "boundary-density-bounds",
    "weak_star": "weak-star-convergence",
    "deflation": "deflation-invariance",
    "isometry": "outer-isometry",
    "probe": "green-witness-probe",
    "closedness": "partial-sum-closedness",
}


@dataclass(frozen=True)
class Check:
    tag: str
    name: str
    value: float
    threshold: float
    passed: bool


def _rel(a, b):
    return abs(a - b) / abs(b)


def _atomic_weights():
    return [("atom 0.5 1", RieszMeasure.atom(0.5)),
            ("atom 0.3 1 + atom 0 -0.4 1", RieszMeasure.atom(0.3) + RieszMeasure.atom(-0.4j))]


def check_lj_monotonicity(tol):
    out = []
    for wname, nu in _atomic_weights():
        for f in (Affine(1, 1), Affine(1, -0.5)):
            res = [demailly_functional(nu, r, AbsPower(f, 2.0), tol=1e-9) for r in DEFAULT_R_GRID]
            v = np.array([x.value for x in res])
            e = np.array([x.error_estimate for x in res])
            worst = float(np.max(np.concatenate([[0.0], v[:-1] - v[1:] - 2.0 * (e[:-1] + e[1:])])))
            out.append(Check(TAGS["lj"], f"{wname}; {f.to_expr()}; p=2", worst, 0.0, worst <= 0.0))
    return out


def check_route_agreement(tol, radial=False):
    out = []
    weights = _atomic_weights() + ([("radial 0.5", RieszMeasure.radial_power(0.5))] if radial else [])
    fleet = [Monomial(1), Affine(1, 1), PowerBranch(0.2), Affine(1, -0.5)]
    for wname, nu in weights:
        for f in fleet:
            b = weighted_norm_boundary(f, 2.0, nu)
            i = weighted_norm_interior(f, 2.0, nu, tol=1e-9)
            gap = _rel(i.value, b.value)
            out.append(Check(TAGS["routes"], f"{wname}; {f.to_expr()}; p=2", gap, tol, gap <= tol))
    return out


def check_isometry(tol, full=False):
    out = []
    weights = _atomic_weights() if full else _atomic_weights()[:1]
    fleet = [Constant(1.0), Affine(1, 1), Affine(1, -0.5)] if full else [Constant(1.0), Affine(1, 1)]
    for wname, nu in weights:
        A = OuterFunction(nu)
        for f in fleet:
            for p in ((1.5, 2.0) if full else (2.0,)):
                rep = isometry_report(f, p, nu, outer=A)
                ok = rep.relative_gap <= tol and rep.round_trip_error <= 1e-10
                out.append(Check(TAGS["isometry"], f"{wname}; {f.to_expr()}; p={p:g}", rep.relative_gap, tol, ok))
    return out


def check_deflation(tol, full=False):
    out = []
    nu = RieszMeasure.atom(0.3)
    fleet = [Affine(1, -0.5), Product((Affine(1, -0.5), Affine(1, 0.5j)))]
    for f in fleet if full else fleet[:1]:
        for p in ((0.5, 1.0, 2.0) if full else (1.0, 2.0)):
            _, _, rep = deflate(f, p, nu)
            ok = rep.relative_gap <= tol and rep.min_abs_g > 0
            out.append(Check(TAGS["deflation"], f"atom 0.3 1; {f.to_expr()}; p={p:g}", rep.relative_gap, tol, ok))
    return out


def check_classical(tol):
    out = []
    nu = RieszMeasure.atom(0.0)
    for f in (Monomial(1), Affine(1, 1), PowerBranch(0.2), Affine(1, -0.5)):
        b = weighted_norm_boundary(f, 2.0, nu).value
        i = weighted_norm_interior(f, 2.0, nu).value
        c = classical_norm(f, 2.0).value
        worst = max(_rel(b, c), _rel(i, c), _rel(b, i))
        out.append(Check(TAGS["classical"], f"atom 0 1; {f.to_expr()}; p=2", worst, 1e-6, worst <= 1e-6))
    return out


def check_lj_limit(tol):
    out = []
    for wname, nu in _atomic_weights():
        for f in (Monomial(1), Affine(1, 1), PowerBranch(0.2), Affine(1, -0.5)):
            phi = AbsPower(f, 2.0)
            gap = abs(demailly_functional(nu, DEFAULT_R_GRID[-1], phi).value - boundary_integral(phi, nu).value)
            out.append(Check(TAGS["lj_limit"], f"{wname}; {f.to_expr()}; r=-0.001", gap, 1e-3, gap <= 1e-3))
    return out


def check_counterexample(tol):
    nu = RieszMeasure.radial_power(0.5)
    f = PowerBranch(0.3)
    rep = membership(f, 2.0, nu)
    slope_err = abs(rep.fitted_slope - rep.predicted_slope) / abs(rep.predicted_slope)
    return [
        Check(TAGS["counterexample"], "pow 0.3; radial 0.5; verdict is non_member",
              rep.exponent, 1.0, rep.verdict == "non_member"),
        Check(TAGS["counterexample"], "pow 0.3; classical norm is finite",
              classical_norm(f, 2.0).value, math.inf, rep.classical_member),
        Check(TAGS["counterexample"], "pow 0.3; radial 0.5; truncated-mass slope, relative error",
              slope_err, 0.1, slope_err <= 0.1),
    ]


def check_potential(tol):
    nu = RieszMeasure.radial_power(0.5)
    t = 1.0 - 10.0 ** -np.arange(1, 5)
    u = np.real(evaluate_u(nu, t.astype(complex)))
    slope = float(np.polyfit(np.log(1.0 - t), np.log(-u), 1)[0])
    err = abs(slope - 0.5) / 0.5
    ok = bool(np.all(u < 0) and np.all(np.diff(u) > 0))
    return [Check(TAGS["potential"], "radial 0.5; u negative and increasing", float(u[-1]), 0.0, ok),
            Check(TAGS["potential"], "radial 0.5; decay exponent, relative error", err, 0.15, err <= 0.15)]


def check_density(tol):
    nu = RieszMeasure.radial_power(0.5)
    lo1, lo2 = density_lower_bound(nu, 4096), density_lower_bound(nu, 8192)
    stable = _rel(lo2, lo1)
    fub = abs(mu_u(nu, lambda th: np.ones_like(th)).value - total_mass(nu))
    slope, _ = fit_density_asymptotics(nu)
    serr = abs(slope + 0.5) / 0.5
    a0 = float(boundary_density(nu, np.array([0.0]))[0])
    return [Check(TAGS["density"], "radial 0.5; lower bound positive", lo1, 0.0, lo1 > 0),
            Check(TAGS["density"], "radial 0.5; lower bound under grid doubling", stable, 5e-4, stable <= 5e-4),
            Check(TAGS["density"], "radial 0.5; density at the singular angle is inf", a0, math.inf, a0 == math.inf),
            Check(TAGS["density"], "radial 0.5; total boundary mass", fub, 1e-8, fub <= 1e-8),
            Check(TAGS["density"], "radial 0.5; log-log slope, relative error", serr, 0.05, serr <= 0.05)]


def check_weak_star(tol):
    nu = RieszMeasure.atom(0.5)
    h = RealPart(Mobius(1, 0, -0.8, 1))
    out = []
    for name, phi in (("phi=1", ConstantDensity(1.0)), ("phi=re z", HarmonicDensity(RealPart(Monomial(1))))):
        g = np.array([weak_star_gap(nu, h, phi, r) for r in DEFAULT_R_GRID])
        out.append(Check(TAGS["weak_star"], f"atom 0.5 1; {name}; strictly decreasing",
                         float(np.max(np.diff(g))), 0.0, bool(np.all(np.diff(g) < 0))))
        out.append(Check(TAGS["weak_star"], f"atom 0.5 1; {name}; gap at r=-0.001", float(g[-1]), 1e-2,
                         g[-1] <= 1e-2))
    return out


def check_probe(tol):
    grid = [0.9, 0.99, 0.999, 0.9999]
    a = ball_probe(Affine(1, 0.5), 2.0, grid)
    b = ball_probe(Affine(0.9, 0.0), 2.0, grid)
    inc = bool(np.all(np.diff(a.values) > 0)) and a.values[-1] <= 2.25
    return [Check(TAGS["probe"], "affine 1 0.5; values increase toward 2.25", abs(a.values[-1] - 2.25), 0.0, inc),
            Check(TAGS["probe"], "affine 1 0.5; a witness exceeds 1", a.maximum, 1.0, a.witness is not None),
            Check(TAGS["probe"], "affine 0.9 0; all values at most 1", b.maximum, 1.0 + 1e-10,
                  b.maximum <= 1.0 + 1e-10)]


def check_closedness(tol):
    nu = RieszMeasure.radial_power(0.5)
    norms = [weighted_norm_boundary(taylor_partial_sum(0.2, n), 2.0, nu).value for n in (8, 32, 128)]
    full = weighted_norm_boundary(PowerBranch(0.2), 2.0, nu).value
    excess = full - max(norms)
    return [Check(TAGS["closedness"], "taylor 0.2 N; radial 0.5; partial sums bounded", max(norms), math.inf,
                  all(math.isfinite(v) for v in norms)),
            Check(TAGS["closedness"], "taylor 0.2 N; radial 0.5; norm minus sup of partial sums", excess, 1e-3,
                  excess <= 1e-3)]


CORE: list[Callable] = [check_lj_monotonicity, check_route_agreement, check_isometry, check_deflation]


def run_suite(name: str, tol: float = 1e-3) -> list[Check]:
    """All checks of a suite, in a fixed order."""
    if name == "core":
        return [c for fn in CORE for c in fn(tol)]
    if name == "full":
        steps = [check_classical, lambda t: check_route_agreement(t, radial=True), check_lj_monotonicity,
                 check_lj_limit, check_counterexample, check_potential, check_density, check_weak_star,
                 lambda t: check_deflation(t, full=True), lambda t: check_isometry(t, full=True), check_probe,
                 check_closedness]
        return [c for fn in steps for c in fn(tol)]
    raise ValueError(f"unknown suite {name!r}")
