"""Composite cycles for positive norm and Bernoulli-weighted boundary cycles for norm zero (n = 1)."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .quadspace import vec, det, transpose
from .lattice import LatticeData, reduce_mod_lattice
from .binarymodel import (GroupSpec, Geodesic, Cusp, cusp_classes, geodesic_of,
                          orbit_representatives, orbit_reduce, check_group_action)


def bernoulli1(alpha) -> Fraction:
    """First periodic Bernoulli function; the argument is reduced mod 1."""
    a = Fraction(alpha)
    a -= a.numerator // a.denominator
    return Fraction(0) if a == 0 else a - Fraction(1, 2)


@dataclass(frozen=True)
class Frame:
    X: tuple
    beta: tuple
    cusp_tag: int | None = None


@dataclass(frozen=True)
class ReducedFrame:
    frame: Frame
    a: tuple
    nu: Fraction
    eps: int

    @property
    def weight(self):
        return Fraction(1, 2) * bernoulli1(self.nu) * self.eps


@dataclass
class SpecialCycle:
    kind: str  # "interior" or "singular"
    beta: Fraction
    components: list = field(default_factory=list)  # (descriptor, weight)

    def total_weight(self):
        return sum((w for _, w in self.components), Fraction(0))

    def to_json(self):
        comps = []
        for d, w in self.components:
            if isinstance(d, Geodesic):
                desc = {"type": "geodesic", "root_data": d.root_data(), "closed": d.closed,
                        "stabilizer": d.stabilizer_gen}
            else:
                desc = {"type": "boundary", "cusp": d}
            comps.append({"component": desc, "weight": str(w)})
        return {"kind": self.kind, "beta": str(self.beta), "components": comps}

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)


def composite_cycle(L: LatticeData, h, beta, group: GroupSpec, verify=None):
    """One oriented closed (or cusp-to-cusp) geodesic per group orbit of norm-beta vectors in L + h.

    verify = (frames) re-checks the orbit list against an enumeration and raises
    "bound too small" when the enumeration misses an orbit.
    """
    beta = Fraction(beta)
    if beta <= 0:
        raise ValueError("composite_cycle needs beta > 0")
    check_group_action(L, h, group)
    reps = orbit_representatives(L, h, beta, group)
    if verify is not None:
        orbit_reduce(verify, L, group, expected=list(reps))
    cyc = SpecialCycle("interior", beta)
    for lab in sorted(reps, key=repr):
        x = reps[lab]
        cyc.components.append((geodesic_of(x, L, group), 1))
    cyc.reps = [reps[lab] for lab in sorted(reps, key=repr)]
    return cyc


def line_offset(u, h):
    """nu in [0,1) with nu u in L + h, or None if the line through u misses L + h."""
    u = tuple(int(c) for c in u)
    h = reduce_mod_lattice(h)
    coeffs = _bezout(u)
    lam = sum((c * x for c, x in zip(coeffs, h)), Fraction(0))
    lam -= lam.numerator // lam.denominator
    if all((lam * a - b).denominator == 1 for a, b in zip(u, h)):
        return lam
    return None


def _bezout(u):
    """Integers c with sum c_i u_i = 1 for a primitive vector u."""
    g, coeffs = 0, [0] * len(u)
    for i, a in enumerate(u):
        if a == 0:
            continue
        if g == 0:
            g, coeffs = a, [0] * len(u)
            coeffs[i] = 1
            continue
        x, y, g2 = _xgcd(g, a)
        coeffs = [c * x for c in coeffs]
        coeffs[i] += y
        g = g2
    if g < 0:
        coeffs = [-c for c in coeffs]
        g = -g
    if g != 1:
        raise ValueError("vector is not primitive")
    return coeffs


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return x0, y0, a


def frame_sign(L: LatticeData, cusp: Cusp, x):
    """Orientation sign of a frame on the cusp line against the stored Witt partner."""
    w = cusp.witt
    d = L.space.det_basis((vec(x),) + tuple(w.W_basis) + (w.u0p,))
    return 1 if d >= 0 else -1


def reduced_frames(L: LatticeData, h, beta, group: GroupSpec, cusps=None):
    """Reduced frames with Gram beta = 0 (n = 1), grouped per cusp.

    On the line through the forward primitive u the frames in L + h are (nu0 + k) u.
    The reduced ones are nu0 u (a = 1) and (nu0 - 1) u (a = -1, nu = 1 - nu0);
    for nu0 = 0 the zero vector is the only one.
    """
    beta = Fraction(beta) if not isinstance(beta, tuple) else beta
    if isinstance(beta, tuple):
        if len(beta) != 1 or Fraction(beta[0][0]) != 0:
            raise ValueError("reduced_frames needs beta of rank n - 1 (for n = 1: beta = 0)")
        beta = Fraction(0)
    if beta != 0:
        raise ValueError("reduced_frames needs beta of rank n - 1 (for n = 1: beta = 0)")
    if cusps is None:
        cusps = cusp_classes(L, group)
    out = []
    for j, c in enumerate(cusps):
        nu0 = line_offset(c.u, h)
        if nu0 is None:
            continue
        if nu0 == 0:
            zero = tuple(Fraction(0) for _ in c.u)
            out.append(ReducedFrame(Frame((zero,), ((Fraction(0),),), j), (1,), Fraction(0), 1))
            continue
        for a, lam in ((1, nu0), (-1, nu0 - 1)):
            x = tuple(lam * Fraction(k) for k in c.u)
            nu = lam * a
            out.append(ReducedFrame(Frame((x,), ((Fraction(0),),), j), (a,), nu,
                                    frame_sign(L, c, x)))
    return out


def z_classes(reduced):
    """Group reduced frames into their Z-classes (same cusp line)."""
    classes = {}
    for r in reduced:
        classes.setdefault(r.frame.cusp_tag, []).append(r)
    return list(classes.values())


def singular_cycle(L: LatticeData, h, beta, group: GroupSpec, cusps=None):
    """Boundary circles weighted by the sum of B1(nu) eps / 2 over the reduced frames at each cusp."""
    red = reduced_frames(L, h, beta, group, cusps)
    cyc = SpecialCycle("singular", Fraction(0))
    for cls in z_classes(red):
        w = sum((r.weight for r in cls), Fraction(0))
        cyc.components.append((cls[0].frame.cusp_tag, w))
    return cyc
