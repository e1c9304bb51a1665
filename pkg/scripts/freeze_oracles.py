"""Compute brute-force reference values and freeze them into tests/data/oracles.json.

Each oracle avoids the library routine it checks: orbit counts by union-find over a box,
cusp counts by union-find on isotropic vectors, Pell solutions by search, theta
coefficients and boundary thetas by direct summation, Hurwitz values by partial sums
with an integral tail.  Counts are only frozen when two box sizes agree.
"""
import json
import math
import os
import sys
import warnings
from fractions import Fraction as F
from itertools import product

from thetacycles.quadspace import QuadSpace, mat, matvec
from thetacycles.lattice import LatticeData
from thetacycles.binarymodel import model_for, sl2_inv

OUT = os.path.join(os.path.dirname(__file__), "..", "tests", "data", "oracles.json")

GAMMA3 = [((1, 3), (0, 1)), ((1, 0), (-3, 1)), ((-2, 3), (-3, 4)), ((4, 3), (-3, -2))]


def _union_find(points, maps):
    par = {p: p for p in points}

    def find(p):
        while par[p] != p:
            par[p] = par[par[p]]
            p = par[p]
        return p

    for p in points:
        for m in maps:
            y = tuple(matvec(m, p))
            if y in par:
                par[find(p)] = find(y)
    return len({find(p) for p in points})


def _ambient_maps(space, gens, length=1):
    """Ambient matrices of all words of the given maximal length in the generators and inverses."""
    model = model_for(space)
    base = [model.act(g) for g in gens] + [model.act(sl2_inv(g)) for g in gens]
    words, layer = list(base), list(base)
    for _ in range(length - 1):
        layer = [tuple(tuple(sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3)) for i in range(3))
                 for a in layer for b in base]
        words += layer
    return words


def corpus_a_orbits(beta, B):
    """Gamma(3)-orbits on norm-beta vectors (a, k + 1/6, c) of the corpus lattice inside a box."""
    space = QuadSpace(mat([[0, 0, -1], [0, 6, 0], [-1, 0, 0]]))
    pts = set()
    for k in range(-B, B + 1):
        b = k + F(1, 6)
        ac = 3 * b * b - beta
        if ac.denominator != 1:
            continue
        ac = int(ac)
        for a in range(-B, B + 1):
            if a == 0:
                if ac == 0:
                    pts.update((F(0), b, F(c)) for c in range(-B, B + 1))
            elif ac % a == 0 and abs(ac // a) <= B:
                pts.add((F(a), b, F(ac // a)))
    return _union_find(pts, _ambient_maps(space, GAMMA3))


def _primitive_forward(v):
    den = 1
    for c in v:
        den = den * c.denominator // math.gcd(den, c.denominator)
    w = [int(c * den) for c in v]
    g = 0
    for c in w:
        g = math.gcd(g, c)
    w = [c // g for c in w]
    if w[2] < 0:  # forward means positive time coordinate for x^2 + y^2 - z^2
        w = [-c for c in w]
    return tuple(F(c) for c in w)


def diag_cusps(gens, H):
    """Orbits of rational isotropic lines of x^2 + y^2 - z^2, each line met through its
    primitive forward vector with |coords| <= H."""
    space = QuadSpace(mat([[1, 0, 0], [0, 1, 0], [0, 0, -1]]))
    pts = set()
    for x, y in product(range(-H, H + 1), repeat=2):
        z2 = x * x + y * y
        z = math.isqrt(z2)
        if z * z == z2 and z > 0 and math.gcd(math.gcd(x, y), z) == 1:
            pts.add((F(x), F(y), F(z)))
    maps = _ambient_maps(space, gens, length=1)
    par = {p: p for p in pts}

    def find(p):
        while par[p] != p:
            par[p] = par[par[p]]
            p = par[p]
        return p

    # words of length <= 4 may leave the box in between
    for p in pts:
        layer = {p}
        for _ in range(4):
            layer = {_primitive_forward(matvec(m, y)) for y in layer for m in maps}
            for y in layer:
                if y in par:
                    par[find(p)] = find(y)
    return len({find(p) for p in pts})


def _reflection(v):
    """Integral reflection x -> x - 2 (x,v)/(v,v) v for x^2 + y^2 - z^2."""
    G = (1, 1, -1)
    vv = sum(g * c * c for g, c in zip(G, v))
    return tuple(tuple(F(int(i == j)) - F(2 * v[i] * G[j] * v[j], vv) for j in range(3)) for i in range(3))


def diag_cusps_reflections(H):
    """Orbits of the integral reflection group of x^2 + y^2 - z^2 on primitive forward
    isotropic vectors with |coords| <= H (the Pythagorean-triple descent)."""
    pts = set()
    for x, y in product(range(-H, H + 1), repeat=2):
        z2 = x * x + y * y
        z = math.isqrt(z2)
        if z * z == z2 and z > 0 and math.gcd(math.gcd(x, y), z) == 1:
            pts.add((F(x), F(y), F(z)))
    maps = [_reflection(v) for v in [(1, 0, 0), (0, 1, 0), (1, -1, 0), (1, 1, 1)]]
    return _union_find(pts, maps)


def pell_search(D):
    u = 1
    while True:
        t2 = D * u * u + 4
        t = math.isqrt(t2)
        if t * t == t2:
            return [t, u]
        u += 1


def unary_theta_direct(prec):
    out = {}
    for k in range(-prec, prec + 1):
        if k * k < prec:
            out[str(F(k * k))] = out.get(str(F(k * k)), 0) + 1
    return out


def boundary_direct(prec, shift):
    out = {}
    for k in range(-prec - 2, prec + 3):
        x = k + shift
        if x * x < prec and x != 0:
            e = str(x * x)
            out[e] = str(F(out.get(e, "0")) + x)
    return {e: v for e, v in out.items() if F(v) != 0}


def hurwitz_partial(x, s, N=200_000):
    """Partial sum plus Euler-Maclaurin tail at N (error far below 1e-13 for s = 2)."""
    head = math.fsum((n + x) ** -s for n in range(N))
    a = N + x
    tail = a ** (1 - s) / (s - 1) + a ** -s / 2 + s * a ** (-s - 1) / 12
    return head + tail


def norm_box(m, R):
    """x in Z^3 with x1^2 + x2^2 - x3^2 = 2m, x != 0, x1^2 + x2^2 + x3^2 <= R, from a box."""
    out = []
    for x in product(range(-2, 3), repeat=3):
        if x == (0, 0, 0):
            continue
        if x[0] ** 2 + x[1] ** 2 - x[2] ** 2 == 2 * m and sum(c * c for c in x) <= R:
            out.append(list(x))
    return sorted(out)


def main():
    warnings.simplefilter("ignore")
    data = {}
    orbit = {}
    for beta in [F(1, 12), F(13, 12), F(25, 12), F(37, 12)]:
        a, b = corpus_a_orbits(beta, 40), corpus_a_orbits(beta, 100)
        if a != b:
            sys.exit(f"orbit count for {beta} not stable: {a} vs {b}")
        orbit[str(beta)] = a
    data["corpus_a_orbit_counts"] = orbit
    cusps = {}
    a, b = diag_cusps_reflections(25), diag_cusps_reflections(50)
    if a != b:
        sys.exit(f"reflection cusp count not stable: {a} vs {b}")
    cusps["reflections"] = a
    a, b = diag_cusps(GAMMA3, 25), diag_cusps(GAMMA3, 50)
    if a != b:
        sys.exit(f"cusp count gamma3 not stable: {a} vs {b}")
    cusps["gamma3"] = a
    data["diag_cusp_counts"] = cusps
    data["pell"] = {str(D): pell_search(D) for D in [5, 8, 12, 13, 21, 24, 28, 33, 61]}
    data["unary_theta_prec10"] = unary_theta_direct(10)
    data["boundary_third_prec10"] = boundary_direct(10, F(1, 3))
    data["hurwitz"] = {"1,2": hurwitz_partial(1.0, 2.0), "1/2,2": hurwitz_partial(0.5, 2.0)}
    data["norm_box"] = {"1": norm_box(1, 4), "0": norm_box(0, 4)}
    # r_2(2): pairs (j, k) with j^2 + k^2 = 2
    data["r2_of_2"] = sum(1 for j, k in product(range(-2, 3), repeat=2) if j * j + k * k == 2)
    os.makedirs(os.path.dirname(OUT), exist_ok=True)
    with open(OUT, "w") as f:
        json.dump(data, f, indent=1, sort_keys=True)
    print(json.dumps(data, sort_keys=True))


if __name__ == "__main__":
    main()
