"""Exact truncated q-expansions sum a_k q^(k/d), complete below a precision bound."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np


def _lcm(a, b):
    return a * b // math.gcd(a, b)


@dataclass(frozen=True)
class FourierSeries:
    denom: int
    coeffs: dict
    prec: Fraction

    def __post_init__(self):
        prec = Fraction(self.prec)
        d = int(self.denom)
        c = {int(k): Fraction(v) for k, v in self.coeffs.items() if v != 0}
        if any(Fraction(k, d) >= prec for k in c):
            raise ValueError("stored exponent at or above prec")
        # minimal denominator
        g = d
        for k in c:
            g = math.gcd(g, k)
        if c and g > 1:
            d //= g
            c = {k // g: v for k, v in c.items()}
        elif not c:
            d = 1
        object.__setattr__(self, "denom", d)
        object.__setattr__(self, "coeffs", dict(sorted(c.items())))
        object.__setattr__(self, "prec", prec)

    @classmethod
    def from_exponents(cls, terms: dict, prec):
        """Build from a map exponent (rational) -> coefficient, dropping terms >= prec."""
        prec = Fraction(prec)
        terms = {Fraction(e): Fraction(v) for e, v in terms.items() if Fraction(e) < prec and v != 0}
        d = 1
        for e in terms:
            d = _lcm(d, e.denominator)
        return cls(d, {int(e * d): v for e, v in terms.items()}, prec)

    @classmethod
    def zero(cls, prec):
        return cls(1, {}, prec)

    @classmethod
    def one(cls, prec):
        return cls.from_exponents({0: 1}, prec)

    def exponents(self):
        return {Fraction(k, self.denom): v for k, v in self.coeffs.items()}

    def coeff(self, e):
        e = Fraction(e)
        if e >= self.prec:
            raise ValueError("exponent beyond precision")
        k = e * self.denom
        if k.denominator != 1:
            return Fraction(0)
        return self.coeffs.get(int(k), Fraction(0))

    def min_exponent(self):
        if not self.coeffs:
            return self.prec
        return Fraction(next(iter(self.coeffs)), self.denom)

    def truncate(self, prec):
        prec = min(Fraction(prec), self.prec)
        return FourierSeries.from_exponents(self.exponents(), prec)

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        return (isinstance(other, FourierSeries) and self.prec == other.prec
                and self.exponents() == other.exponents())

    def __hash__(self):
        return hash((self.prec, tuple(self.exponents().items())))

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, scale(other, -1))

    def __mul__(self, other):
        if isinstance(other, FourierSeries):
            return mul(self, other)
        return scale(self, other)

    __rmul__ = __mul__

    def __neg__(self):
        return scale(self, -1)

    def to_json(self):
        return {"denom": self.denom, "prec": str(self.prec),
                "coeffs": [[k, v.numerator, v.denominator] for k, v in self.coeffs.items()]}

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, doc):
        if isinstance(doc, str):
            doc = json.loads(doc)
        return cls(doc["denom"], {k: Fraction(n, d) for k, n, d in doc["coeffs"]}, Fraction(doc["prec"]))


def add(a: FourierSeries, b: FourierSeries) -> FourierSeries:
    prec = min(a.prec, b.prec)
    terms = {}
    for s in (a, b):
        for e, v in s.exponents().items():
            if e < prec:
                terms[e] = terms.get(e, 0) + v
    return FourierSeries.from_exponents(terms, prec)


def scale(a: FourierSeries, c) -> FourierSeries:
    c = Fraction(c)
    return FourierSeries(a.denom, {k: v * c for k, v in a.coeffs.items()}, a.prec)


def mul(a: FourierSeries, b: FourierSeries) -> FourierSeries:
    """Cauchy product, complete below min(prec_a + min_b, prec_b + min_a)."""
    prec = min(a.prec + b.min_exponent(), b.prec + a.min_exponent())
    d = _lcm(a.denom, b.denom)
    fa, fb = d // a.denom, d // b.denom
    kmax = prec * d
    out = {}
    bitems = [(k * fb, v) for k, v in b.coeffs.items()]
    for ka, va in a.coeffs.items():
        ka *= fa
        for kb, vb in bitems:
            k = ka + kb
            if k >= kmax:
                break
            out[k] = out.get(k, 0) + va * vb
    return FourierSeries(d, out, prec)


def eval_at(series: FourierSeries, tau, dps=30, growth=None):
    """Value at tau (Im tau > 0) and an optional tail estimate.

    growth = (C, g) asserts |a(e)| <= C (1+e)^g for e >= prec; the tail estimate is
    then a bound for the omitted terms.
    """
    tau = mpmath.mpc(tau)
    if tau.imag <= 0:
        raise ValueError("tau must lie in the upper half plane")
    with mpmath.workdps(dps):
        z = 2j * mpmath.pi * tau / series.denom
        total = mpmath.mpc(0)
        for k, v in series.coeffs.items():
            total += mpmath.mpf(v.numerator) / v.denominator * mpmath.exp(z * k)
        tail = None
        if growth is not None:
            tail = tail_bound(series.prec, float(tau.imag), *growth, denom=series.denom)
    return complex(total), tail


def eval_many(series: FourierSeries, taus):
    """Vectorized double-precision evaluation at an array of points."""
    taus = np.atleast_1d(np.asarray(taus, dtype=complex))
    if np.any(taus.imag <= 0):
        raise ValueError("tau must lie in the upper half plane")
    ks = np.array(list(series.coeffs.keys()), dtype=float)
    vs = np.array([float(v) for v in series.coeffs.values()])
    if len(ks) == 0:
        return np.zeros(len(taus), dtype=complex)
    out = np.empty(len(taus), dtype=complex)
    for i, t in enumerate(taus):
        terms = vs * np.exp(2j * np.pi * t * ks / series.denom)
        out[i] = math.fsum(terms.real) + 1j * math.fsum(terms.imag)
    return out


def tail_bound(prec, y, C, g, denom=1):
    """Bound for sum over exponents e >= prec in (1/denom)Z of C (1+e)^g exp(-2 pi e y)."""
    step = 1.0 / denom
    e = float(prec)
    r = math.exp(-2 * math.pi * y * step)
    total = 0.0
    for _ in range(1_000_000):
        term = C * (1 + e) ** g * math.exp(-2 * math.pi * e * y)
        ratio = ((1 + e + step) / (1 + e)) ** g * r
        if ratio < 1:
            # term ratios decrease in e, so a geometric series dominates the rest
            return total + term / (1 - ratio)
        total += term
        e += step
    return math.inf


def compare(a: FourierSeries, b: FourierSeries, window=None):
    """First exponent below the common window where the coefficients differ, or None."""
    w = min(a.prec, b.prec) if window is None else min(Fraction(window), a.prec, b.prec)
    ea, eb = a.exponents(), b.exponents()
    for e in sorted(set(ea) | set(eb)):
        if e >= w:
            break
        if ea.get(e, 0) != eb.get(e, 0):
            return e
    return None


def eval_mp(series: FourierSeries, tau, dps=50):
    """Value at tau as an mpmath number at the working precision dps."""
    with mpmath.workdps(dps):
        tau = mpmath.mpc(tau)
        if tau.imag <= 0:
            raise ValueError("tau must lie in the upper half plane")
        z = 2j * mpmath.pi * tau / series.denom
        return mpmath.fsum(mpmath.mpf(v.numerator) / v.denominator * mpmath.exp(z * k)
                           for k, v in series.coeffs.items())
