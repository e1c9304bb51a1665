"""Structural and numerical modularity checks for q-expansions.

The half-integral multiplier is never written down: a weight m/2 form is compared
against the m-th power of the standard theta quotient theta(g tau)/theta(tau).
Numerical agreement is evidence, not proof, and reports say so.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .qseries import FourierSeries, compare, tail_bound

DEFAULT_KAPPAS = (0.5j, (1 + 1j) / 3, 2j)
NOTE = "numerical evidence of modularity on sampled group elements, not a proof"


@dataclass
class SupportVerdict:
    passed: bool
    negative_exponents: list = field(default_factory=list)


def check_support(series: FourierSeries) -> SupportVerdict:
    """PASS iff no stored exponent is negative (exact)."""
    neg = [e for e in series.exponents() if e < 0]
    return SupportVerdict(not neg, neg)


def compare_series(a: FourierSeries, b: FourierSeries, window=None):
    """None when the two agree below the window, else the first differing exponent."""
    return compare(a, b, window)


def theta_std(prec) -> FourierSeries:
    """sum over k in Z of q^(k^2)."""
    prec = Fraction(prec)
    terms = {}
    k = 0
    while k * k < prec:
        terms[Fraction(k * k)] = 1 if k == 0 else 2
        k += 1
    return FourierSeries.from_exponents(terms, prec)


def test_elements(level):
    """Deterministic elements of the principal congruence subgroup of the given level.

    The translation, its transpose, and products whose lower-left entry is +-level;
    together they generate a finite-index subgroup and exercise every shape of cocycle.
    """
    M = level
    return [((1, M), (0, 1)),
            ((1, 0), (M, 1)),
            ((1, 0), (-M, 1)),
            ((1 + M, M), (-M, 1 - M)),
            ((1 - M, M), (-M, 1 + M)),
            ((1 + M, -M), (M, 1 - M))]


def normalized_points(g, kappas=DEFAULT_KAPPAS):
    """tau = -d/c + kappa/|c| (or kappa for c = 0): keeps tau and g tau comparably far from the real line."""
    (a, b), (c, d) = g
    if c == 0:
        return [complex(k) for k in kappas]
    return [complex(-d / c) + complex(k) / abs(c) for k in kappas]


def moebius_c(g, tau):
    (a, b), (c, d) = g
    return (a * tau + b) / (c * tau + d)


def _growth(series: FourierSeries, weight):
    """(C, g) with |a(e)| <= C (1 + e)^g fitted on the stored coefficients, doubled for safety."""
    g = float(weight)
    C = 0.0
    for e, v in series.exponents().items():
        C = max(C, abs(float(v)) / (1 + float(e)) ** g)
    return (2 * C if C else 1.0, g)


def required_precision(level, kappas=DEFAULT_KAPPAS, digits=70):
    """Exponent bound making exp(-2 pi prec y) < 10^-digits at every normalized point for level."""
    ys = []
    for k in kappas:
        k = complex(k)
        ys.append(k.imag / level)
        ys.append(k.imag / abs(k) ** 2 / level)
    y = min(ys)
    return math.ceil(digits * math.log(10) / (2 * math.pi * y)) + 1


def _mp_eval(series: FourierSeries, tau):
    z = 2j * mpmath.pi * tau / series.denom
    return mpmath.fsum(mpmath.mpf(v.numerator) / v.denominator * mpmath.exp(z * k)
                       for k, v in series.coeffs.items())


@dataclass
class ModularityReport:
    group_level: int
    weight: Fraction
    generators: list
    test_points: list
    residuals: dict
    tail_bounds: dict
    tol: float
    passed: bool
    note: str = NOTE

    def to_json(self):
        return {
            "group_level": self.group_level,
            "weight": str(self.weight),
            "generators": [list(map(list, g)) for g in self.generators],
            "test_points": [[[p.real, p.imag] for p in pts] for pts in self.test_points],
            "residuals": [{"generator": i, "point": j, "residual": r}
                          for (i, j), r in sorted(self.residuals.items())],
            "tail_bounds": [{"generator": i, "point": j, "tail": t}
                            for (i, j), t in sorted(self.tail_bounds.items())],
            "tol": self.tol,
            "verdict": "PASS" if self.passed else "FAIL",
            "note": self.note,
        }

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)

    @property
    def max_residual(self):
        return max(self.residuals.values(), default=0.0)


def check_transformation(series: FourierSeries, weight, level, points=None, tol=1e-6,
                         lattice_level=1, generators=None, dps=100):
    """Compare f(g tau) with f(tau) (theta(g tau)/theta(tau))^(2 weight) for test elements g.

    Residuals are relative to the larger side.  A cusp form can be exponentially small at
    the normalized points, so dps and the series precision must cover those magnitudes;
    a relative truncation tail above tol/10 raises.  PASS needs every residual below tol
    plus the relative truncation allowance.
    """
    weight = Fraction(weight)
    m = 2 * weight
    if m.denominator != 1:
        raise ValueError("weight must be a half-integer")
    m = int(m)
    if level % (4 * lattice_level) != 0 or level % series.denom != 0:
        raise ValueError("insufficient level")
    gens = list(generators) if generators is not None else test_elements(level)
    for (a, b), (c, d) in gens:
        if a * d - b * c != 1 or (a - 1) % level or b % level or c % level or (d - 1) % level:
            raise ValueError("test element is not in the principal congruence subgroup")
    th = theta_std(series.prec)
    gf = _growth(series, weight)
    gt = (2.0, 0.0)
    residuals, tails, pts_all = {}, {}, []
    passed = True
    with mpmath.workdps(dps):
        for i, g in enumerate(gens):
            pts = normalized_points(g) if points is None else [complex(p) for p in points]
            pts_all.append(pts)
            for j, p in enumerate(pts):
                tau = mpmath.mpc(p)
                gt_ = moebius_c(g, tau)
                y0, y1 = float(tau.imag), float(gt_.imag)
                lhs = _mp_eval(series, gt_)
                t0, t1 = _mp_eval(th, tau), _mp_eval(th, gt_)
                rhs = _mp_eval(series, tau) * (t1 / t0) ** m
                scale = max(abs(lhs), abs(rhs), mpmath.mpf(10) ** (-dps // 2))
                # omitted terms of f and theta at both points, relative to scale
                tf = (tail_bound(series.prec, y0, *gf, denom=series.denom)
                      + tail_bound(series.prec, y1, *gf, denom=series.denom))
                tt = tail_bound(th.prec, y0, *gt) / float(abs(t0)) + tail_bound(th.prec, y1, *gt) / float(abs(t1))
                tail = (tf + m * tt * float(abs(rhs))) / float(scale)
                if tail >= tol / 10:
                    raise ValueError("insufficient precision: truncation tail %.3g exceeds tol/10" % tail)
                res = float(abs(lhs - rhs) / scale)
                residuals[(i, j)] = res
                tails[(i, j)] = tail
                if not res < tol + tail:
                    passed = False
    return ModularityReport(level, weight, gens, pts_all, residuals, tails, tol, passed)


def word_product(gens, word):
    """Product of generators (index, +-1) in the word, left to right."""
    out = ((1, 0), (0, 1))
    for i, s in word:
        (a, b), (c, d) = gens[i]
        g = ((a, b), (c, d)) if s > 0 else ((d, -b), (-c, a))
        out = tuple(tuple(sum(out[r][k] * g[k][col] for k in range(2)) for col in range(2))
                    for r in range(2))
    return out
