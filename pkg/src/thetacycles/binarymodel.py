"""The p = 2 case through binary quadratic forms.

A ternary space of signature (2,1) with an isotropic vector is identified with a
rescaled space of binary forms A x^2 + B xy + C y^2.  With Witt coordinates
x = a u0 + b w + c u0' and s = (w, w) the dictionary is

    x  ->  (A, B, C) = (c, -2 s b, s a),     disc = B^2 - 4AC = 8 s q(x).

SL2 acts on forms by F -> F o g^{-1}; on vectors this is an element of SO_0(2,1)
and the roots of A z^2 + B z + C (the geodesic endpoints) move by Moebius maps.
The vector 2a u0 + b w goes to the form with roots infinity and a/b.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .quadspace import (QuadSpace, WittData, find_isotropic, witt_decompose, matvec,
                        matmul, inverse, transpose, vec, primitive)
from .lattice import LatticeData, FrameSet, reduce_mod_lattice, dual_basis
import warnings


# binary forms ------------------------------------------------------------------

@dataclass(frozen=True)
class BQF:
    a: Fraction
    b: Fraction
    c: Fraction

    def __post_init__(self):
        for k in "abc":
            object.__setattr__(self, k, Fraction(getattr(self, k)))

    @property
    def disc(self):
        return self.b * self.b - 4 * self.a * self.c

    def tuple(self):
        return (self.a, self.b, self.c)

    def __neg__(self):
        return BQF(-self.a, -self.b, -self.c)

    def compose(self, g):
        """The form F o g, i.e. F(p x + q y, r x + t y) for g = [[p, q], [r, t]]."""
        (p, q), (r, t) = g
        a, b, c = self.a, self.b, self.c
        return BQF(a * p * p + b * p * r + c * r * r,
                   2 * a * p * q + b * (p * t + q * r) + 2 * c * r * t,
                   a * q * q + b * q * t + c * t * t)

    def content(self):
        """Positive rational g with F/g primitive integral."""
        den = 1
        for x in self.tuple():
            den = den * x.denominator // math.gcd(den, x.denominator)
        g = 0
        for x in self.tuple():
            g = math.gcd(g, int(x * den))
        return Fraction(g, den)

    def primitive(self):
        g = self.content()
        return BQF(self.a / g, self.b / g, self.c / g)

    def __call__(self, x, y):
        return self.a * x * x + self.b * x * y + self.c * y * y


def compose_matrix(g):
    """3x3 matrix of (A,B,C) -> coefficients of F o g."""
    (p, q), (r, t) = g
    return ((p * p, p * r, r * r),
            (2 * p * q, p * t + q * r, 2 * r * t),
            (q * q, q * t, t * t))


def sl2_mul(x, y):
    return ((x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]),
            (x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]))


def sl2_inv(x):
    return ((x[1][1], -x[0][1]), (-x[1][0], x[0][0]))


def sl2_neg(x):
    return ((-x[0][0], -x[0][1]), (-x[1][0], -x[1][1]))


def sl2_pow(x, k):
    if k < 0:
        x, k = sl2_inv(x), -k
    r = ((1, 0), (0, 1))
    while k:
        if k & 1:
            r = sl2_mul(r, x)
        x = sl2_mul(x, x)
        k >>= 1
    return r


def sl2_mod(x, N):
    return tuple(tuple(int(e) % N for e in row) for row in x)


def is_identity_mod(x, N):
    return sl2_mod(x, N) == sl2_mod(((1, 0), (0, 1)), N)


def moebius(g, z):
    (p, q), (r, t) = g
    if z == math.inf or z is None:
        return math.inf if r == 0 else p / r
    den = r * z + t
    if den == 0:
        return math.inf
    return (p * z + q) / den


# group -------------------------------------------------------------------------

@dataclass(frozen=True)
class GroupSpec:
    """kind 'full' is SL2(Z); kind 'congruence' is the principal congruence subgroup Gamma(N)."""
    kind: str = "congruence"
    N: int = 3

    def __post_init__(self):
        if self.kind == "full":
            object.__setattr__(self, "N", 1)
        elif self.kind == "congruence":
            if self.N < 3:
                raise ValueError("congruence level N must be at least 3")
        else:
            raise ValueError(f"unknown group kind {self.kind!r}")

    def contains(self, g):
        return self.N == 1 or is_identity_mod(g, self.N)

    def contains_up_to_sign(self, g):
        return self.contains(g) or self.contains(sl2_neg(g))

    def sample_elements(self, height=3):
        """Elements of the group with small entries (used to span rho(g) - 1)."""
        N = self.N
        out = []
        rng = range(-height, height + 1)
        for a, b, c in product(rng, repeat=3):
            p, q, r = 1 + N * a, N * b, N * c
            num = 1 + q * r
            if num % p:
                continue
            t = num // p
            if (t - 1) % N == 0:
                out.append(((p, q), (r, t)))
        return out


# Pell and automorphs -----------------------------------------------------------

def _is_square(n):
    return n >= 0 and math.isqrt(n) ** 2 == n


@lru_cache(maxsize=None)
def pell4(D):
    """Fundamental solution (t, u), u > 0, of t^2 - D u^2 = 4 by continued fractions."""
    if D <= 0 or _is_square(D) or D % 4 not in (0, 1):
        raise ValueError("Pell equation needs a nonsquare discriminant D > 0")
    # expand omega = (P + sqrt(D)) / Q with P = D mod 2, Q = 2 (the maximal-order generator)
    P, Q = D % 2, 2
    sD = math.isqrt(D)
    h0, h1 = 0, 1
    k0, k1 = 1, 0
    for _ in range(10_000_000):
        a = (P + sD) // Q
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        # convergent h1/k1 of omega; h1 - k1*omega has norm (h1 - k1*(D%2)/2)^2 - D k1^2/4
        t = 2 * h1 - (D % 2) * k1
        if t * t - D * k1 * k1 == 4:
            return t, k1
        P = a * Q - P
        Q = (D - P * P) // Q
    raise RuntimeError("Pell solver did not terminate")


def automorph(f: BQF):
    """Generator with positive trace of the proper automorphs of an indefinite form (mod +-1)."""
    D = f.disc
    if D <= 0:
        raise ValueError("automorph needs an indefinite form")
    g = f.primitive()
    D0 = int(g.disc)
    if _is_square(D0):
        raise ValueError("split form: infinite geodesic, trivial stabilizer")
    t, u = pell4(D0)
    a, b, c = (int(x) for x in g.tuple())
    M = (((t - b * u) // 2, -c * u), (a * u, (t + b * u) // 2))
    assert g.compose(M) == g and M[0][0] * M[1][1] - M[0][1] * M[1][0] == 1
    return M


def stabilizer_in_group(f: BQF, group: GroupSpec):
    """Smallest positive power of the automorph lying in the group (sign adjusted), and the exponent."""
    A = automorph(f)
    M = A
    for k in range(1, 100_000):
        if group.contains(M):
            return M, k
        if group.contains(sl2_neg(M)):
            return sl2_neg(M), k
        M = sl2_mul(M, A)
    raise RuntimeError("automorph order modulo N not found")


# reduction of indefinite forms ---------------------------------------------------

def _rho_step(f):
    """One Gauss reduction step: returns (rho(f), M) with rho(f) = f o M."""
    a, b, c = (int(x) for x in f)
    D = b * b - 4 * a * c
    sD = math.isqrt(D)
    ac = abs(c)
    # r = -b mod 2|c| chosen in the normalizing window
    if ac > sD:
        lo = -ac + 1  # -|c| < r <= |c|
    else:
        lo = sD - 2 * ac + 1  # sqrt(D) - 2|c| < r < sqrt(D)
    r = lo + ((-b - lo) % (2 * ac))
    s = (r + b) // (2 * c)
    M = ((0, -1), (1, s))
    new = (c, r, (r * r - D) // (4 * c))
    return new, M


def _is_reduced(f):
    a, b, c = (int(x) for x in f)
    D = b * b - 4 * a * c
    sD = math.isqrt(D)
    # 0 < b < sqrt(D) and sqrt(D) - b < 2|a| < sqrt(D) + b
    return 0 < b <= sD and 2 * abs(a) + b > sD and 2 * abs(a) - b <= sD


def reduce_indefinite(f):
    """Reduced cycle data for a primitive integral indefinite nonsquare form.

    Returns (canonical reduced form R, gamma with f o gamma = R, cycle list).
    """
    f = tuple(int(x) for x in f)
    g = ((1, 0), (0, 1))
    for _ in range(10_000):
        if _is_reduced(f):
            break
        f, M = _rho_step(f)
        g = sl2_mul(g, M)
    else:
        raise RuntimeError("reduction did not terminate")
    cycle = [(f, g)]
    h, gg = f, g
    while True:
        h, M = _rho_step(h)
        gg = sl2_mul(gg, M)
        if h == f:
            break
        cycle.append((h, gg))
    R, gR = min(cycle, key=lambda t: t[0])
    return R, gR, [c[0] for c in cycle]


def reduce_split(f):
    """Normal form (0, k, c), 0 <= c < k, for a primitive integral form of square disc k^2."""
    a, b, c = (int(x) for x in f)
    D = b * b - 4 * a * c
    k = math.isqrt(D)
    F = BQF(a, b, c)
    roots = []
    if a == 0:
        roots = [(1, 0), (-c, b)]
    else:
        for sgn in (1, -1):
            num, den = -b + sgn * k, 2 * a
            gg = math.gcd(num, den)
            num, den = num // gg, den // gg
            if den < 0:
                num, den = -num, -den
            roots.append((num, den))
    for p, q in roots:
        gg = math.gcd(p, q)
        p, q = p // gg, q // gg
        # complete (p, q) to an SL2(Z) matrix
        x, y = _ext_gcd(p, q)
        gam = ((p, -y), (q, x))
        G = F.compose(gam)
        if G.a == 0 and G.b == k:
            cc = int(G.c)
            t = -(cc // k)
            gam = sl2_mul(gam, ((1, t), (0, 1)))
            R = F.compose(gam)
            return tuple(int(v) for v in R.tuple()), gam
    raise AssertionError("no root gives the normalized orientation")


def _ext_gcd(p, q):
    """x, y with p x + q y = 1."""
    old_r, r = p, q
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        qq = old_r // r
        old_r, r = r, old_r - qq * r
        old_s, s = s, old_s - qq * s
        old_t, t = t, old_t - qq * t
    if old_r < 0:
        old_s, old_t = -old_s, -old_t
    return old_s, old_t


def canonical_form(F: BQF):
    """(content, reduced primitive form R, gamma with F/content o gamma = R, automorph of R or None)."""
    g = F.content()
    f0 = F.primitive()
    D = int(f0.disc)
    if D <= 0:
        raise ValueError("canonical_form expects an indefinite form")
    if _is_square(D):
        R, gam = reduce_split(f0.tuple())
        return g, R, gam, None
    R, gam, _ = reduce_indefinite(f0.tuple())
    return g, R, gam, automorph(BQF(*R))


def orbit_label(F: BQF, group: GroupSpec):
    """Exact invariant of the group orbit of F."""
    g, R, gam, A = canonical_form(F)
    N = group.N
    if N == 1:
        return (g, R)
    cands = []
    M = gam
    powers = [((1, 0), (0, 1))]
    if A is not None:
        P = A
        while not (is_identity_mod(P, N) or is_identity_mod(sl2_neg(P), N)):
            powers.append(P)
            P = sl2_mul(P, A)
    for P in powers:
        for s in (1, -1):
            m = sl2_mul(gam, P)
            if s < 0:
                m = sl2_neg(m)
            cands.append(sl2_mod(m, N))
    return (g, R, min(cands))


# dictionary ----------------------------------------------------------------------

@dataclass(frozen=True)
class BinaryModel:
    space: QuadSpace
    witt: WittData
    s: Fraction
    P: tuple
    Pinv: tuple

    def form(self, x) -> BQF:
        return BQF(*matvec(self.P, vec(x)))

    def vector(self, f: BQF):
        return matvec(self.Pinv, f.tuple())

    def act(self, g):
        """Ambient matrix of g in SL2 acting on V (F -> F o g^{-1})."""
        C = compose_matrix(sl2_inv(g))
        C = tuple(tuple(Fraction(x) for x in r) for r in C)
        return matmul(self.Pinv, matmul(C, self.P))

    def act_vec(self, g, x):
        return self.vector(self.form(x).compose(sl2_inv(g)))

    def point(self, Z):
        """Upper half plane point of a forward timelike (float) vector Z."""
        A, B, C = (sum(float(p) * z for p, z in zip(row, Z)) for row in self.P)
        disc = B * B - 4 * A * C
        return complex(-B / (2 * A), math.sqrt(-disc) / (2 * abs(A)))


@lru_cache(maxsize=None)
def model_for(space: QuadSpace, height_bound=30) -> BinaryModel:
    if space.p != 2:
        raise ValueError("binary model requires signature (2,1)")
    u0 = find_isotropic(space, height_bound)
    if u0 is None:
        raise ValueError("no isotropic vector within the search bound; the binary model needs one")
    w = witt_decompose(space, u0)
    if not space.is_forward(w.Z0):
        w = witt_decompose(space, tuple(-c for c in u0))
    s = w.S[0][0]
    C = inverse(transpose(w.basis()))
    T = ((0, 0, 1), (0, -2 * s, 0), (s, 0, 0))
    T = tuple(tuple(Fraction(x) for x in r) for r in T)
    P = matmul(T, C)
    return BinaryModel(space, w, s, P, inverse(P))


def vec_to_bqf(x, L: LatticeData) -> BQF:
    return model_for(L.space).form(x)


def bqf_to_vec(f: BQF, L: LatticeData):
    return model_for(L.space).vector(f)


# group action on the lattice --------------------------------------------------------

def ambient_span(model: BinaryModel, group: GroupSpec):
    """Matrices rho(g) - 1 for sampled g; their Z-span contains every rho(g) - 1."""
    out = []
    for g in group.sample_elements():
        M = model.act(g)
        out.append(tuple(tuple(M[i][j] - int(i == j) for j in range(3)) for i in range(3)))
    return out


def check_group_action(L: LatticeData, h, group: GroupSpec, strict=True):
    """Verify that the group preserves L + h.  Warns when it does not fix L#/L pointwise
    or when N is not divisible by the level."""
    model = model_for(L.space)
    if group.N == 1:
        gens = [((1, 1), (0, 1)), ((0, -1), (1, 0))]
        mats = [tuple(tuple(model.act(g)[i][j] - int(i == j) for j in range(3)) for i in range(3))
                for g in gens]
    else:
        mats = ambient_span(model, group)
    basis = [tuple(Fraction(int(i == j)) for j in range(3)) for i in range(3)]
    h = vec(h)
    ok = True
    for E in mats:
        for x in basis + [h]:
            if any(c.denominator != 1 for c in matvec(E, x)):
                ok = False
    if not ok:
        if strict:
            raise ValueError("the group does not preserve the coset L + h")
        return False
    dual = transpose(dual_basis(L))
    trivial = all(all(c.denominator == 1 for c in matvec(E, d)) for E in mats for d in dual)
    if not trivial:
        warnings.warn("group does not act trivially on L#/L", stacklevel=2)
    if group.N != 1 and group.N % L.level:
        warnings.warn(f"N = {group.N} is not divisible by the level {L.level}", stacklevel=2)
    return True


# geodesics ------------------------------------------------------------------------

@dataclass(frozen=True)
class Geodesic:
    """Oriented geodesic with endpoints the roots of A z^2 + B z + C (start, end)."""
    form: BQF
    closed: bool
    stabilizer_gen: tuple | None
    exponent: int | None = None

    @property
    def disc(self):
        return self.form.disc

    def endpoints(self):
        A, B, C = (float(x) for x in self.form.tuple())
        if A == 0:
            other = -C / B
            return (math.inf, other) if B < 0 else (other, math.inf)
        r = math.sqrt(float(self.disc))
        return ((-B - r) / (2 * A), (-B + r) / (2 * A))

    def root_data(self):
        return [str(x) for x in self.form.tuple()]


def geodesic_of(x, L: LatticeData, group: GroupSpec = GroupSpec("full")) -> Geodesic:
    if L.space.q(vec(x)) <= 0:
        raise ValueError("geodesic needs a vector of positive norm")
    f = vec_to_bqf(x, L)
    D0 = int(f.primitive().disc)
    if _is_square(D0):
        return Geodesic(f, False, None)
    M, k = stabilizer_in_group(f, group)
    return Geodesic(f, True, M, k)


# orbits ----------------------------------------------------------------------------

@dataclass
class Orbit:
    rep: tuple
    label: tuple
    members: list
    geodesic: Geodesic


def orbit_reduce(frames: FrameSet, L: LatticeData, group: GroupSpec, expected=None):
    """Partition frames (n = 1, positive norm) into group orbits.

    If `expected` (labels that must occur) is given and some are missing, the
    enumeration bound was too small and an error is raised.
    """
    model = model_for(L.space)
    buckets = {}
    for X in frames.frames:
        if len(X) != 1:
            raise ValueError("orbit_reduce handles n = 1 only")
        x = X[0]
        lab = orbit_label(model.form(x), group)
        buckets.setdefault(lab, []).append(x)
    if expected is not None:
        missing = set(expected) - set(buckets)
        if missing:
            raise ValueError(f"bound too small: {len(missing)} orbit(s) not met by the enumeration")
    out = []
    for lab in sorted(buckets, key=repr):
        members = sorted(buckets[lab])
        rep = min(members, key=lambda v: (sum(c * c for c in v), v))
        out.append(Orbit(rep, lab, members, geodesic_of(rep, L, group)))
    return out


def _sl2_residues(N):
    """One lift in SL2(Z) with small entries for every element of SL2(Z/N)."""
    found = {}
    bound = 1
    total = N ** 3
    for p in _primes(N):
        total = total * (p * p - 1) // (p * p)
    while len(found) < total:
        for p, q, r in product(range(-bound, bound + 1), repeat=3):
            if p == 0:
                continue
            num = 1 + q * r
            if num % p:
                continue
            t = num // p
            g = ((p, q), (r, t))
            key = sl2_mod(g, N)
            if key not in found:
                found[key] = g
        bound += 1
    return found


def _primes(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def reduced_forms(D):
    """Reduced primitive forms of nonsquare discriminant D > 0 (one per cycle class returned
    as canonical representatives)."""
    sD = math.isqrt(D)
    reps = set()
    for b in range(1, sD + 1):
        if (b * b - D) % 4:
            continue
        ac = (b * b - D) // 4
        for a in range(1, abs(ac) + 1):
            if ac % a:
                continue
            for sa in (a, -a):
                c = ac // sa
                f = (sa, b, c)
                if math.gcd(math.gcd(abs(sa), b), abs(c)) != 1 or not _is_reduced(f):
                    continue
                R, _, _ = reduce_indefinite(f)
                reps.add(R)
    return sorted(reps)


def split_forms(k):
    return [(0, k, c) for c in range(k) if math.gcd(k, c) == 1]


def orbit_representatives(L: LatticeData, h, beta, group: GroupSpec):
    """All group orbits on {x in L + h : q(x) = beta} for beta > 0, computed from reduction
    theory rather than enumeration.  Returns a dict label -> representative vector."""
    beta = Fraction(beta)
    if beta <= 0:
        raise ValueError("beta must be positive")
    model = model_for(L.space)
    h = reduce_mod_lattice(h)
    disc = 8 * model.s * beta
    # forms in P(L + h) lie in (1/den) Z^3
    den = 1
    for row in model.P:
        for p in row:
            den = den * p.denominator // math.gcd(den, p.denominator)
    for c in h:
        den = den * c.denominator // math.gcd(den, c.denominator)
    num = disc * den * den
    if num.denominator != 1:
        return {}
    num = int(num)
    residues = list(_sl2_residues(group.N).values()) if group.N > 1 else [((1, 0), (0, 1))]
    out = {}
    for g in range(1, math.isqrt(num) + 1):
        if num % (g * g):
            continue
        D0 = num // (g * g)
        if D0 % 4 not in (0, 1):
            continue
        content = Fraction(g, den)
        forms = split_forms(math.isqrt(D0)) if _is_square(D0) else reduced_forms(D0)
        for R in forms:
            Rf = BQF(*R)
            for delta in residues:
                F = Rf.compose(sl2_inv(delta))
                F = BQF(*(content * v for v in F.tuple()))
                x = model.vector(F)
                if reduce_mod_lattice(x) != h:
                    continue
                lab = orbit_label(F, group)
                if lab not in out:
                    out[lab] = x
    return out


# cusps -----------------------------------------------------------------------------

@dataclass
class Cusp:
    u: tuple
    root: tuple
    witt: WittData
    boundary_lattice: tuple


def cusp_classes(L: LatticeData, group: GroupSpec, height_bound=30):
    """Group orbits of rational isotropic lines, each with a primitive forward vector."""
    if find_isotropic(L.space, height_bound) is None:
        return []
    model = model_for(L.space)
    N = group.N
    labels = {}
    bound = 1
    target = _cusp_count(N)
    while len(labels) < target:
        for p, q in product(range(-bound, bound + 1), repeat=2):
            if math.gcd(p, q) != 1:
                continue
            key = min(((p % N, q % N), ((-p) % N, (-q) % N))) if N > 1 else ()
            if key not in labels:
                labels[key] = (p, q)
        bound += 1
    out = []
    for key in sorted(labels):
        p, q = labels[key]
        # the degenerate form (q x - p y)^2 has double root p/q
        F = BQF(q * q, -2 * p * q, p * p)
        u = primitive(model.vector(F))
        if not _forward_null(L.space, u):
            u = tuple(-c for c in u)
        w = witt_decompose(L.space, u)
        out.append(Cusp(u, (p, q), w, _boundary_lattice(L, w)))
    return out


def _forward_null(space, u):
    return space.pair(u, space.time_vector()) < 0


def _cusp_count(N):
    if N == 1:
        return 1
    c = N * N
    for p in _primes(N):
        c = c * (p * p - 1) // (p * p)
    return c // 2


def _boundary_lattice(L, w: WittData):
    """Basis of the image of L in W along the isotropic line (projection of L cap u^perp)."""
    from .quadspace import kernel_basis
    g = matvec(L.gram, w.u0)
    # integral points of u^perp: the kernel of the row g over Z
    ker = kernel_basis([g], L.dim)
    coords = [w.coords(v)[1:-1] for v in ker]
    return tuple(tuple(c) for c in coords)


def cusp_at(L: LatticeData, u):
    """Cusp record for a given primitive isotropic lattice vector (made forward)."""
    u = primitive(vec(u))
    if L.space.pair(u, u) != 0:
        raise ValueError("cusp vector must be isotropic")
    if not _forward_null(L.space, u):
        u = tuple(-c for c in u)
    w = witt_decompose(L.space, u)
    return Cusp(u, None, w, _boundary_lattice(L, w))
