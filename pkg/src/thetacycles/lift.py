"""The weight 3/2 lift over a closed geodesic C_U, assembled two ways, plus boundary
thetas and the Hurwitz zeta layer for the singular coefficients.

For a positive vector u the lattice splits up to finite index as L_U + L_{U-perp},
and L + h is a finite disjoint union of (L_U + h'_i) + (L_{U-perp} + h''_i).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import mpmath
import numpy as np

from .quadspace import (QuadSpace, vec, det, inverse, transpose, matvec, matmul, primitive,
                        diagonalize)
from .lattice import LatticeData, ellipsoid_points, reduce_mod_lattice
from .qseries import FourierSeries, mul, add
from .binarymodel import GroupSpec, model_for, stabilizer_in_group, check_group_action, Cusp
from .cycles import bernoulli1, line_offset, singular_cycle, z_classes


def _lcm(a, b):
    return a * b // math.gcd(a, b)


def _frac_part(x):
    x = Fraction(x)
    return x - (x.numerator // x.denominator)


def integer_kernel(row):
    """Z-basis of {x in Z^m : row . x = 0} for a rational row."""
    den = 1
    for r in row:
        den = _lcm(den, Fraction(r).denominator)
    r = [int(Fraction(c) * den) for c in row]
    m = len(r)
    M = [[int(i == j) for j in range(m)] for i in range(m)]  # columns track the transform
    # column operations bringing r to (g, 0, ..., 0)
    while sum(1 for c in r if c) > 1 or (r[0] == 0 and any(r)):
        nz = [j for j in range(m) if r[j]]
        j0 = min(nz, key=lambda j: abs(r[j]))
        if j0 != 0:
            r[0], r[j0] = r[j0], r[0]
            for row_ in M:
                row_[0], row_[j0] = row_[j0], row_[0]
        for j in range(1, m):
            if r[j]:
                q = r[j] // r[0]
                r[j] -= q * r[0]
                for row_ in M:
                    row_[j] -= q * row_[0]
    return [tuple(M[i][j] for i in range(m)) for j in range(1, m)]


# spec ------------------------------------------------------------------------------

@dataclass
class PerpPart:
    """The (1,1) lattice L_{U-perp} in a Z-basis, with the restriction of the stabilizer."""
    basis: tuple           # ambient vectors
    gram: tuple            # 2x2 rational
    gen: tuple | None      # 2x2 integer matrix of the generator of Gamma_U (None if trivial)
    trace: Fraction | None
    anisotropic: bool
    unit: tuple | None = None       # fundamental proper automorph of the perp form (positive trace)
    unit_power: int | None = None   # gen = unit ** unit_power


@dataclass
class CompactCycleSpec:
    L: LatticeData
    h: tuple
    u_vec: tuple
    group: GroupSpec
    u_prim: tuple = field(init=False)
    perp: PerpPart = field(init=False)
    cosets: list = field(init=False)   # (t, c) with h' = t u_prim, h'' = basis . c
    ambient_gen: tuple = field(init=False)
    stabilizer_sl2: tuple = field(init=False)

    def __post_init__(self):
        L = self.L
        self.h = reduce_mod_lattice(self.h)
        u = vec(self.u_vec)
        if L.space.q(u) <= 0:
            raise ValueError("u must have positive norm")
        self.u_prim = primitive(u)
        up = self.u_prim
        row = matvec(L.gram, up)
        kb = integer_kernel(row)
        gram2 = tuple(tuple(L.space.pair(a, b) for b in kb) for a in kb)
        d = -det(gram2)  # positive for a (1,1) plane
        dnum = d.numerator * d.denominator
        aniso = math.isqrt(dnum) ** 2 != dnum
        check_group_action(L, self.h, self.group)
        model = model_for(L.space)
        M, _ = stabilizer_in_group(model.form(up), self.group) if aniso else (None, None)
        self.stabilizer_sl2 = M
        if M is not None:
            A = model.act(M)
            self.ambient_gen = A
            # restriction to the perp lattice, in its basis
            B = transpose(kb)
            img = [matvec(A, b) for b in kb]
            g2 = tuple(tuple(x) for x in transpose([_solve_in_basis(kb, y) for y in img]))
            if any(x.denominator != 1 for r in g2 for x in r):
                raise ValueError("stabilizer does not preserve L cap U-perp")
            tr = g2[0][0] + g2[1][1]
        else:
            self.ambient_gen, g2, tr = None, None, None
        self.perp = PerpPart(tuple(kb), gram2, g2, tr, aniso)
        if aniso:
            self.perp.unit, self.perp.unit_power = _perp_unit(gram2, g2)
        self.cosets = self._split()

    def _split(self):
        up, kb = self.u_prim, self.perp.basis
        B = transpose((up,) + tuple(kb))
        d = abs(det(B))
        if d.denominator != 1:
            raise AssertionError
        d = int(d)
        Binv = inverse(B)
        reps, seen = [], set()
        for x in product(range(d), repeat=self.L.dim):
            key = tuple(_frac_part(c) for c in matvec(Binv, vec(x)))
            if key not in seen:
                seen.add(key)
                reps.append(vec(x))
            if len(reps) == d:
                break
        if len(reps) != d:
            raise AssertionError("coset split incomplete")
        uu = self.L.space.pair(up, up)
        out = []
        for r in reps:
            v = tuple(a + b for a, b in zip(self.h, r))
            t = self.L.space.pair(v, up) / uu
            y = tuple(a - t * b for a, b in zip(v, up))
            c = _solve_in_basis(kb, y)
            out.append((_frac_part(t), tuple(_frac_part(x) for x in c)))
        out.sort()
        return out

    @property
    def compact(self):
        return self.perp.anisotropic

    def hash(self):
        import hashlib
        payload = repr((self.L.hash(), [str(c) for c in self.h], [str(c) for c in self.u_prim],
                        self.group.kind, self.group.N))
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


def _solve_in_basis(basis, y):
    """Coordinates of y in the span of the given vectors (exact, must exist)."""
    m = len(y)
    k = len(basis)
    # least-squares free: pick k independent rows
    for rows in _row_choices(m, k):
        A = tuple(tuple(basis[j][i] for j in range(k)) for i in rows)
        if det(A) != 0:
            c = matvec(inverse(A), tuple(y[i] for i in rows))
            if all(sum(c[j] * basis[j][i] for j in range(k)) == y[i] for i in range(m)):
                return c
            raise ValueError("vector not in the span")
    raise ValueError("degenerate basis")


def _row_choices(m, k):
    from itertools import combinations
    return combinations(range(m), k)


def _perp_unit(gram2, g2):
    from .binarymodel import BQF, automorph, sl2_mul
    f = BQF(gram2[0][0] / 2, gram2[0][1], gram2[1][1] / 2)
    e = automorph(f)
    # automorph() keeps F o M = F; on coordinate vectors this is y -> M y
    target = tuple(tuple(int(x) for x in r) for r in g2)
    for sgn in (1, -1):
        M = e if sgn == 1 else ((e[1][1], -e[0][1]), (-e[1][0], e[0][0]))
        P = M
        for k in range(1, 10_000):
            if P == target:
                return M, k
            if abs(P[0][0] + P[1][1]) > abs(target[0][0] + target[1][1]):
                break
            P = sl2_mul(P, M)
    raise AssertionError("stabilizer is not a power of the fundamental automorph")


def cycle_spec(L, h, u_vec, group) -> CompactCycleSpec:
    return CompactCycleSpec(L, vec(h), vec(u_vec), group)


def require_compact(spec: CompactCycleSpec):
    if not spec.compact:
        raise ValueError("non-compact cycle: U-perp is isotropic, the lift over C_U is not defined here")


# definite part ---------------------------------------------------------------------

def repnum(alpha, q_gen, t) -> int:
    """#{x in Z g + t g : q(x) = alpha} where q(g) = q_gen."""
    alpha, q_gen, t = Fraction(alpha), Fraction(q_gen), _frac_part(t)
    if alpha < 0:
        return 0
    if alpha == 0:
        return int(t == 0)
    r2 = alpha / q_gen
    n, d = r2.numerator, r2.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn != n or rd * rd != d:
        return 0
    r = Fraction(rn, rd)
    return sum(1 for s in {r, -r} if _frac_part(s - t) == 0)


def positive_definite_theta(q_gen, t, prec) -> FourierSeries:
    """Sum over x in Z g + t g of q^{q(x)}, complete below prec."""
    q_gen, t, prec = Fraction(q_gen), _frac_part(t), Fraction(prec)
    terms = {}
    kmax = math.isqrt(int(prec / q_gen) + 1) + 2
    for k in range(-kmax, kmax + 1):
        e = (k + t) ** 2 * q_gen
        if e < prec:
            terms[e] = terms.get(e, 0) + 1
    return FourierSeries.from_exponents(terms, prec)


# the (1,1) part --------------------------------------------------------------------

def _perp_majorant(perp: PerpPart):
    G = perp.gram
    d, vs = diagonalize(G)
    z = next(v for x, v in zip(d, vs) if x < 0)
    Gz = matvec(G, z)
    zz = sum(a * b for a, b in zip(z, Gz))
    return tuple(tuple(G[i][j] - 2 * Gz[i] * Gz[j] / zz for j in range(2)) for i in range(2))


def _qform2(G, y):
    return sum(y[i] * G[i][j] * y[j] for i in range(2) for j in range(2))


def perp_sign(spec: CompactCycleSpec, y):
    """Orientation sign of the 0-cycle point of y (coordinates in the perp basis)."""
    sp = spec.L.space
    kb = spec.perp.basis
    x = tuple(sum(y[j] * kb[j][i] for j in range(2)) for i in range(sp.dim))
    Gy = matvec(spec.perp.gram, y)
    zc = (Gy[1], -Gy[0])
    z = tuple(sum(zc[j] * kb[j][i] for j in range(2)) for i in range(sp.dim))
    if not sp.is_forward(z):
        z = tuple(-c for c in z)
    d = sp.det_basis((x, spec.u_prim, z))
    return 1 if d > 0 else -1


def _canonical(y, g, ginv, Q):
    n0 = _qform2(Q, y)
    return _qform2(Q, matvec(ginv, y)) > n0 and n0 <= _qform2(Q, matvec(g, y))


def _rational_sqrt(x: Fraction):
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn != n or rd * rd != d:
        return None
    return Fraction(rn, rd)


def _solve_last(coeffs_quad, lin, const):
    """Rational roots y of a y^2 + b y + c = 0."""
    a, b, c = coeffs_quad, lin, const
    if a == 0:
        return [] if b == 0 else [-c / b]
    r = _rational_sqrt(b * b - 4 * a * c)
    if r is None:
        return []
    return sorted({(-b + r) / (2 * a), (-b - r) / (2 * a)})


def hyperbola_points(G, Q, c, alpha2, R):
    """All y in Z^2 + c with y.G.y = 2 alpha2 and y.Q.y <= R (G indefinite, Q positive)."""
    Qi = inverse(Q)
    span = math.isqrt(int(R * Qi[0][0]) + 1) + 2
    out = []
    c0, c1 = c
    base = math.floor(c0)
    for k in range(-span - 1, span + 2):
        y0 = k + c0 - base
        # G00 y0^2 + 2 G01 y0 y1 + G11 y1^2 = 2 alpha2
        for y1 in _solve_last(G[1][1], 2 * G[0][1] * y0, G[0][0] * y0 * y0 - 2 * alpha2):
            if _frac_part(y1 - c1) == 0:
                y = (y0, y1)
                if _qform2(Q, y) <= R:
                    out.append(y)
    return out


def degree_0cycle(alpha2, spec: CompactCycleSpec, c) -> int:
    """Sum of orientation signs over Gamma_U-classes of y in L_{U-perp} + c with q(y) = alpha2.

    Gamma_U acts on U-perp as e^k with e the fundamental automorph.  Each e-orbit is
    enumerated once through its canonical member (majorant norm at most alpha2 tr(e)) and
    counted once per residue n mod k with e^n y in the coset.
    """
    require_compact(spec)
    alpha2 = Fraction(alpha2)
    if alpha2 <= 0:
        raise ValueError("alpha2 must be positive")
    perp = spec.perp
    e, k = perp.unit, perp.unit_power
    einv = inverse(e)
    Q = _perp_majorant(perp)
    R = alpha2 * (e[0][0] + e[1][1])
    mult = {}
    cn = tuple(Fraction(x) for x in c)
    for _ in range(k):
        key = tuple(_frac_part(x) for x in cn)
        mult[key] = mult.get(key, 0) + 1
        cn = matvec(einv, cn)
    tot = 0
    for cc, m in mult.items():
        for y in hyperbola_points(perp.gram, Q, cc, alpha2, R):
            if _canonical(y, e, einv, Q):
                tot += m * perp_sign(spec, y)
    return tot


def _perp_value_denominator(perp: PerpPart, c):
    G = perp.gram
    den = (_qform2(G, c) / 2).denominator
    for i in range(2):
        den = _lcm(den, (G[i][i] / 2).denominator)
        den = _lcm(den, (G[i][0] * c[0] + G[i][1] * c[1]).denominator)
    return _lcm(den, G[0][1].denominator)


def degree_table(spec: CompactCycleSpec, c, prec):
    """alpha2 -> degree for all 0 < alpha2 < prec.

    One sweep over the ellipse of majorant norm prec tr(e) replaces a hyperbola search
    per alpha2; the per-point rules are those of degree_0cycle.
    """
    require_compact(spec)
    prec = Fraction(prec)
    perp = spec.perp
    e, k = perp.unit, perp.unit_power
    einv = inverse(e)
    G, Q = perp.gram, _perp_majorant(perp)
    trace = e[0][0] + e[1][1]
    mult = {}
    cn = tuple(Fraction(x) for x in c)
    for _ in range(k):
        key = tuple(_frac_part(x) for x in cn)
        mult[key] = mult.get(key, 0) + 1
        cn = matvec(einv, cn)
    Gf = np.array([[float(x) for x in r] for r in G])
    Qf = np.array([[float(x) for x in r] for r in Q])
    out = {}
    for cc, m in mult.items():
        pts = ellipsoid_points(Qf, cc, float(prec * trace), cap=50_000_000)
        if not pts:
            continue
        arr = np.array(pts, dtype=float) + np.array([float(x) for x in cc])
        qf = 0.5 * np.einsum("ij,jk,ik->i", arr, Gf, arr)
        nf = np.einsum("ij,jk,ik->i", arr, Qf, arr)
        tol = 1e-9 * (1 + float(prec * trace))
        keep = (qf > -tol) & (qf < float(prec) + tol) & (nf <= qf * float(trace) + tol)
        for p_, ok in zip(pts, keep):
            if not ok:
                continue
            y = (Fraction(p_[0]) + cc[0], Fraction(p_[1]) + cc[1])
            a2 = _qform2(G, y) / 2
            if a2 <= 0 or a2 >= prec or _qform2(Q, y) > a2 * trace:
                continue
            if _canonical(y, e, einv, Q):
                out[a2] = out.get(a2, 0) + m * perp_sign(spec, y)
    return {a: d for a, d in sorted(out.items()) if d}


def topdegree_constant(spec: CompactCycleSpec, c) -> Fraction:
    """Constant term of the (1,1) lift: minus the B1-weighted count over the isotropic ends."""
    if spec.perp.anisotropic:
        return Fraction(0)
    # isotropic lines of the binary form on the perp basis
    G = spec.perp.gram
    a, b, cc = G[0][0], 2 * G[0][1], G[1][1]
    lines = []
    if a == 0:
        lines.append((1, 0))
    D = b * b - 4 * a * cc
    sD = Fraction(math.isqrt(D.numerator), math.isqrt(D.denominator))
    for s in (1, -1):
        if a != 0:
            r = (-b + s * sD) / (2 * a)
            lines.append((r.numerator, r.denominator))
        elif s == 1:
            r = -cc / b
            lines.append((r.numerator, r.denominator))
    total = Fraction(0)
    for ln in set(lines):
        ln = primitive(ln)
        nu = line_offset(tuple(int(x) for x in ln), tuple(c))
        if nu is not None:
            total += bernoulli1(nu)
    return -total


def topdegree_lift(spec: CompactCycleSpec, c, prec) -> FourierSeries:
    table = degree_table(spec, c, prec)
    table[Fraction(0)] = topdegree_constant(spec, c)
    return FourierSeries.from_exponents(table, prec)


# two assemblies --------------------------------------------------------------------

def _q_gen(spec):
    return spec.L.space.q(spec.u_prim)


def transversal_intersection(spec: CompactCycleSpec, beta, group=None) -> int:
    """Sum over cosets and alpha1 + alpha2 = beta (alpha2 > 0) of r(alpha1) deg(alpha2)."""
    require_compact(spec)
    beta = Fraction(beta)
    if beta <= 0:
        raise ValueError("beta must be positive")
    qg = _q_gen(spec)
    total = 0
    for t, c in spec.cosets:
        kmax = math.isqrt(int(beta / qg) + 1) + 2
        alphas = sorted({(k + t) ** 2 * qg for k in range(-kmax, kmax + 1)})
        for a1 in alphas:
            if a1 >= beta:
                break
            r = repnum(a1, qg, t)
            if r:
                total += r * degree_0cycle(beta - a1, spec, c)
    return total


def value_denominator(L: LatticeData, h):
    """A common denominator for q on L + h."""
    h = vec(h)
    den = 2 * L.space.q(h).denominator
    for i in range(L.dim):
        e = tuple(Fraction(int(i == j)) for j in range(L.dim))
        den = _lcm(den, L.space.pair(h, e).denominator)
        den = _lcm(den, L.space.q(e).denominator)
        for j in range(i + 1, L.dim):
            f = tuple(Fraction(int(k == j)) for k in range(L.dim))
            den = _lcm(den, L.space.pair(e, f).denominator)
    return den


def singular_intersection(spec: CompactCycleSpec) -> Fraction:
    """Intersection of C_U with the singular boundary cycle of norm 0.

    Each boundary circle is met once per end of C_U at that cusp; a closed geodesic has none.
    """
    if spec.compact:
        return Fraction(0)
    raise ValueError("non-compact cycle: U-perp is isotropic, the lift over C_U is not defined here")


def lift_over_cycle(spec: CompactCycleSpec, prec, group=None) -> FourierSeries:
    """Coefficients from transversal intersection numbers; constant term from the boundary route."""
    require_compact(spec)
    prec = Fraction(prec)
    D = value_denominator(spec.L, spec.h)
    terms = {Fraction(0): -singular_intersection(spec)}
    for j in range(1, int(prec * D) + (0 if (prec * D).denominator == 1 else 1)):
        beta = Fraction(j, D)
        if beta >= prec:
            break
        v = transversal_intersection(spec, beta)
        if v:
            terms[beta] = v
    return FourierSeries.from_exponents(terms, prec)


def product_factorization(spec: CompactCycleSpec, prec, group=None) -> FourierSeries:
    """Sum over cosets of (unary theta of L_U + h'_i) times (lift of L_{U-perp} + h''_i)."""
    require_compact(spec)
    prec = Fraction(prec)
    qg = _q_gen(spec)
    total = FourierSeries.zero(prec)
    for t, c in spec.cosets:
        th = positive_definite_theta(qg, t, prec)
        total = add(total, mul(th, topdegree_lift(spec, c, prec)))
    return total.truncate(prec)


def direct_intersection(spec: CompactCycleSpec, beta) -> int:
    """Intersection number counted in V directly: Gamma_U-classes of x in L + h with q(x) = beta
    whose U-perp part is positive, each with the sign of that part.  Independent of the split."""
    require_compact(spec)
    beta = Fraction(beta)
    L, up = spec.L, spec.u_prim
    sp = L.space
    G = sp.gram
    uu = sp.pair(up, up)
    perp = spec.perp
    Q2 = _perp_majorant(perp)
    gen, geninv = perp.gen, inverse(perp.gen)
    kb = perp.basis
    B = transpose((up,) + tuple(kb))
    Binv = inverse(B)
    P2 = tuple(Binv[1:])
    Mperp = matmul(transpose(P2), matmul(Q2, P2))
    Gu = matvec(G, up)
    Qamb = tuple(tuple(Gu[i] * Gu[j] / uu + Mperp[i][j] for j in range(3)) for i in range(3))
    # |t|^2 (u,u) <= 2 beta and the canonical perp norm is at most beta * trace
    R = 2 * beta + beta * perp.trace
    Qi = inverse(Qamb)
    h = spec.h
    spans = [math.isqrt(int(R * Qi[i][i]) + 1) + 2 for i in range(3)]
    total = 0
    for k0 in range(-spans[0], spans[0] + 1):
        for k1 in range(-spans[1], spans[1] + 1):
            x0, x1 = k0 + h[0], k1 + h[1]
            # q(x) = beta as a quadratic in the last coordinate
            a = G[2][2] / 2
            b = G[0][2] * x0 + G[1][2] * x1
            c = (G[0][0] * x0 * x0 + 2 * G[0][1] * x0 * x1 + G[1][1] * x1 * x1) / 2 - beta
            if a == 0 and b == 0:
                # q does not involve the last coordinate: scan its range
                roots = [k2 + h[2] for k2 in range(-spans[2], spans[2] + 1)] if c == 0 else []
            else:
                roots = _solve_last(a, b, c)
            for x2 in roots:
                if _frac_part(x2 - h[2]) != 0:
                    continue
                x = (x0, x1, x2)
                y = tuple(matvec(P2, x))
                if _qform2(perp.gram, y) <= 0:
                    continue
                if _qform2(Q2, y) > _qform2(perp.gram, y) / 2 * perp.trace:
                    continue
                if _canonical(y, gen, geninv, Q2):
                    total += perp_sign(spec, y)
    return total


# boundary theta --------------------------------------------------------------------

def cusp_split(L: LatticeData, cusp: Cusp):
    """Z-basis (u, w, u') of L adapted to the cusp, or an error if L does not split there."""
    w = cusp.witt
    u = primitive(w.u0)
    wv = primitive(w.W_basis[0])
    up = primitive(w.u0p)
    d = det(transpose((u, wv, up)))
    if abs(d) != 1:
        raise ValueError("apply splitting reduction first")
    return u, wv, up


def boundary_theta(L: LatticeData, h, cusp: Cusp, prec, strict=True) -> FourierSeries:
    """Weighted unary theta sum over x in L cap W + h_W of b(x) q^{q(x)}, b the W-coordinate."""
    prec = Fraction(prec)
    h = vec(h)
    if strict and not L.in_dual(h):
        raise ValueError("coset vector is not in the dual lattice")
    u, wv, up = cusp_split(L, cusp)
    sp = L.space
    coords = matvec(inverse(transpose((u, wv, up))), h)
    if _frac_part(coords[2]) != 0:
        return FourierSeries.zero(prec)  # h not in the perp of the cusp line
    bW = _frac_part(coords[1])
    w = cusp.witt.W_basis[0]
    scale = _solve_in_basis((w,), wv)[0]  # wv = scale * w
    qw = sp.q(wv)
    terms = {}
    kmax = math.isqrt(int(prec / qw) + 1) + 2
    for k in range(-kmax, kmax + 1):
        x = k + bW
        e = x * x * qw
        if e < prec and x != 0:
            terms[e] = terms.get(e, 0) + x * scale
    return FourierSeries.from_exponents(terms, prec)


# Hurwitz zeta ------------------------------------------------------------------------

def bernoulli_numbers(n):
    """B_0..B_n exactly (B_1 = -1/2)."""
    B = [Fraction(0)] * (n + 1)
    B[0] = Fraction(1)
    for m in range(1, n + 1):
        B[m] = -sum(math.comb(m + 1, k) * B[k] for k in range(m)) / (m + 1)
    return B


_BERN = bernoulli_numbers(200)


def hurwitz_zeta(x, s, tol=1e-30, dps=50):
    """Sum_{n>=0} (x+n)^{-s}, continued in s by Euler-Maclaurin; returns (value, error bound)."""
    with mpmath.workdps(dps):
        x = mpmath.mpf(x) if not isinstance(x, Fraction) else mpmath.mpf(x.numerator) / x.denominator
        s = mpmath.mpf(s) if not isinstance(s, Fraction) else mpmath.mpf(s.numerator) / s.denominator
        if s == 1:
            raise ValueError("pole at s = 1")
        if not 0 < x <= 1:
            raise ValueError("x must lie in (0, 1]")
        N = max(10, int(abs(s)) + 10)
        while True:
            a = x + N
            total = mpmath.fsum((x + n) ** (-s) for n in range(N))
            total += a ** (1 - s) / (s - 1) + a ** (-s) / 2
            rising = s  # s (s+1) ... (s+2k-2)
            fact = mpmath.mpf(2)
            err = None
            for k in range(1, 90):
                term = mpmath.mpf(_BERN[2 * k].numerator) / _BERN[2 * k].denominator / fact * rising \
                    * a ** (-s - 2 * k + 1)
                total += term
                rising *= (s + 2 * k - 1) * (s + 2 * k)
                fact *= (2 * k + 1) * (2 * k + 2)
                nxt = abs(mpmath.mpf(_BERN[2 * k + 2].numerator) / _BERN[2 * k + 2].denominator
                          / fact * rising * a ** (-s - 2 * k - 1))
                if nxt < tol:
                    # for real s > -2k-1 the remainder is bounded by a fixed multiple of the next term
                    err = nxt * (1 + abs(s + 2 * k + 1) / (s + 2 * k + 1))
                    break
            if err is not None:
                return total, err
            N *= 2


def omega_at_zero(reduced) -> Fraction:
    """Exact value at s = 0: minus the sum of B1(nu) eps over reduced frames."""
    return -sum((bernoulli1(r.nu) * r.eps for r in reduced), Fraction(0))


def omega_numeric(reduced, s):
    """Sum over Z-classes of eps * (H(nu, s) - H(1 - nu, s)) at s, with eps of the nu-member."""
    total = mpmath.mpf(0)
    with mpmath.workdps(50):
        for cls in z_classes(reduced):
            r = next(r for r in cls if r.a == (1,))
            if r.nu == 0:
                continue
            h1, _ = hurwitz_zeta(r.nu, s)
            h2, _ = hurwitz_zeta(1 - r.nu, s)
            total += r.eps * (h1 - h2)
    return total


def _mpf(x):
    return mpmath.mpf(x.numerator) / x.denominator if isinstance(x, Fraction) else mpmath.mpf(x)


def richardson_zero(f, nodes):
    """Polynomial extrapolation to 0 from values at geometric nodes s_k = s_0 / 2^k (Neville)."""
    with mpmath.workdps(50):
        xs = [_mpf(n) for n in nodes]
        ys = [_mpf(f(n)) for n in nodes]
        n = len(xs)
        T = list(ys)
        for j in range(1, n):
            for i in range(n - 1, j - 1, -1):
                T[i] = (xs[i - j] * T[i] - xs[i] * T[i - 1]) / (xs[i - j] - xs[i])
        return T[-1]


DEFAULT_NODES = tuple(Fraction(1, 2 ** k) for k in range(3, 13))


def omega_extrapolated(reduced, nodes=DEFAULT_NODES):
    return richardson_zero(lambda s: omega_numeric(reduced, s), nodes)
