"""Rational quadratic spaces of signature (p,1).

Vectors are tuples of Fractions in the coordinates of the reference basis.
The bilinear form is (x, y) = x^T G y and the quadratic form is q(x) = (x, x)/2.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd
import math


def frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**12)
    return Fraction(x)


def vec(xs) -> tuple:
    return tuple(frac(x) for x in xs)


def mat(rows) -> tuple:
    return tuple(vec(r) for r in rows)


def matvec(m, x):
    return tuple(sum(a * b for a, b in zip(row, x)) for row in m)


def matmul(a, b):
    bt = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def transpose(m):
    return tuple(tuple(r) for r in zip(*m))


def identity(n):
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def det(m) -> Fraction:
    """Exact determinant by fraction-free elimination over Q."""
    a = [list(map(frac, r)) for r in m]
    n = len(a)
    sign = 1
    d = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        d *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                for k in range(c, n):
                    a[r][k] -= f * a[c][k]
    return sign * d


def inverse(m):
    n = len(m)
    a = [list(map(frac, r)) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            raise ValueError("singular matrix")
        a[c], a[piv] = a[piv], a[c]
        p = a[c][c]
        a[c] = [x / p for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return tuple(tuple(r[n:]) for r in a)


def kernel_basis(rows, n):
    """Basis of {x in Q^n : row . x = 0 for every row}."""
    a = [list(map(frac, r)) for r in rows]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -a[i][fc]
        basis.append(tuple(v))
    return basis


def primitive(v):
    """Scale a rational vector to a primitive integral vector, keeping its direction."""
    v = vec(v)
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector")
    return tuple(Fraction(x // g) for x in ints)


def diagonalize(gram):
    """Congruence diagonalization over Q; returns the diagonal entries and the basis."""
    n = len(gram)
    a = [list(map(frac, r)) for r in gram]
    basis = [list(r) for r in identity(n)]
    for i in range(n):
        if a[i][i] == 0:
            j = next((j for j in range(i + 1, n) if a[j][j] != 0), None)
            if j is not None:
                _swap(a, basis, i, j)
            else:
                j = next((j for j in range(i + 1, n) if a[i][j] != 0), None)
                if j is None:
                    continue
                # e_i <- e_i + e_j makes the diagonal entry 2 a_ij != 0
                _add(a, basis, i, j, Fraction(1))
        for j in range(i + 1, n):
            if a[j][i] != 0 and a[i][i] != 0:
                _add(a, basis, j, i, -a[j][i] / a[i][i])
    return [a[i][i] for i in range(n)], [tuple(b) for b in basis]


def _swap(a, basis, i, j):
    a[i], a[j] = a[j], a[i]
    for r in a:
        r[i], r[j] = r[j], r[i]
    basis[i], basis[j] = basis[j], basis[i]


def _add(a, basis, i, j, f):
    # row/column operation e_i <- e_i + f e_j
    n = len(a)
    for k in range(n):
        a[i][k] += f * a[j][k]
    for k in range(n):
        a[k][i] += f * a[k][j]
    basis[i] = [x + f * y for x, y in zip(basis[i], basis[j])]


def signature(gram):
    g = mat(gram)
    if any(g[i][j] != g[j][i] for i in range(len(g)) for j in range(len(g))):
        raise ValueError("gram matrix is not symmetric")
    if det(g) == 0:
        raise ValueError("degenerate form")
    d, _ = diagonalize(g)
    return sum(1 for x in d if x > 0), sum(1 for x in d if x < 0)


@dataclass(frozen=True)
class QuadSpace:
    gram: tuple
    p: int = field(init=False)
    orientation: int = 1

    def __post_init__(self):
        g = mat(self.gram)
        object.__setattr__(self, "gram", g)
        p, q = signature(g)
        if q != 1:
            raise ValueError(f"signature ({p},{q}) is not of the form (p,1)")
        object.__setattr__(self, "p", p)

    @property
    def dim(self):
        return len(self.gram)

    def pair(self, x, y):
        return sum(xi * gij * yj for xi, row in zip(x, self.gram) for gij, yj in zip(row, y))

    def q(self, x):
        return self.pair(x, x) / 2

    def time_vector(self):
        """A rational vector of negative norm; fixes the forward light cone."""
        d, basis = diagonalize(self.gram)
        return next(b for x, b in zip(d, basis) if x < 0)

    def is_forward(self, x):
        return self.pair(x, self.time_vector()) < 0

    def det_basis(self, vectors):
        return det(transpose(vectors)) * self.orientation


@dataclass(frozen=True)
class Majorant:
    base: QuadSpace
    Z: tuple
    gram_Z: tuple

    def norm(self, x):
        return sum(xi * gij * yj for xi, row in zip(x, self.gram_Z) for gij, yj in zip(row, x))


def majorant(space: QuadSpace, Z, tol=1e-12) -> Majorant:
    exact = all(isinstance(z, (int, Fraction, str)) for z in Z)
    if exact:
        Z = vec(Z)
        zz = space.pair(Z, Z)
        if zz != -1:
            raise ValueError("not on hyperboloid")
        gz = matvec(space.gram, Z)
        gram_Z = tuple(tuple(space.gram[i][j] + 2 * gz[i] * gz[j] for j in range(space.dim))
                       for i in range(space.dim))
    else:
        Z = tuple(float(z) for z in Z)
        g = [[float(x) for x in r] for r in space.gram]
        gz = [sum(g[i][j] * Z[j] for j in range(len(Z))) for i in range(len(Z))]
        zz = sum(a * b for a, b in zip(Z, gz))
        if abs(zz + 1) > tol:
            raise ValueError("not on hyperboloid")
        gram_Z = tuple(tuple(g[i][j] - 2 * gz[i] * gz[j] / zz for j in range(len(Z)))
                       for i in range(len(Z)))
    return Majorant(space, Z, gram_Z)


def find_isotropic(space: QuadSpace, height_bound: int):
    """Primitive integral isotropic vector of smallest height within the box, or None."""
    n = space.dim
    for h in range(1, height_bound + 1):
        for v in product(range(h, -h - 1, -1), repeat=n):
            if max(abs(c) for c in v) != h:
                continue
            first = next(c for c in v if c != 0)
            if first < 0:
                continue
            g = 0
            for c in v:
                g = gcd(g, c)
            if g != 1:
                continue
            if space.pair(v, v) == 0:
                return vec(v)
    return None


@dataclass(frozen=True)
class WittData:
    space: QuadSpace
    u0: tuple
    u0p: tuple
    W_basis: tuple
    S: tuple

    def basis(self):
        return (self.u0,) + tuple(self.W_basis) + (self.u0p,)

    def to_ambient(self, coords):
        """Ambient vector from coordinates (a, b_1..b_{p-1}, c) on (u0, W, u0p)."""
        basis = self.basis()
        return tuple(sum(c * b[i] for c, b in zip(coords, basis)) for i in range(self.space.dim))

    def coords(self, x):
        return matvec(inverse(transpose(self.basis())), vec(x))

    @property
    def Z0(self):
        return tuple(a + b for a, b in zip(self.u0, self.u0p))


def witt_decompose(space: QuadSpace, u0) -> WittData:
    u0 = vec(u0)
    if space.pair(u0, u0) != 0 or not any(u0):
        raise ValueError("u0 is not a nonzero isotropic vector")
    n = space.dim
    e = identity(n)
    y = next(b for b in e if space.pair(u0, b) != 0)
    y = tuple(c * Fraction(-1, 2) / space.pair(u0, y) for c in y)
    yy = space.pair(y, y)
    u0p = tuple(a + yy * b for a, b in zip(y, u0))
    g0 = matvec(space.gram, u0)
    g1 = matvec(space.gram, u0p)
    ker = kernel_basis([g0, g1], n)
    W = _orthogonalize(space, [primitive(k) for k in ker])
    if space.det_basis((u0,) + tuple(W) + (u0p,)) < 0:
        if len(W) == 1:
            W = [tuple(-c for c in W[0])]
        else:
            W[0], W[1] = W[1], W[0]
    S = tuple(tuple(space.pair(a, b) for b in W) for a in W)
    wd = WittData(space, u0, u0p, tuple(W), S)
    _check_witt(wd)
    return wd


def _orthogonalize(space, vs):
    out = []
    for v in vs:
        for w in out:
            v = tuple(a - space.pair(v, w) / space.pair(w, w) * b for a, b in zip(v, w))
        out.append(primitive(v))
    return out


def _check_witt(wd: WittData):
    s = wd.space
    assert s.pair(wd.u0, wd.u0) == 0 and s.pair(wd.u0p, wd.u0p) == 0
    assert s.pair(wd.u0, wd.u0p) == Fraction(-1, 2)
    for w in wd.W_basis:
        assert s.pair(w, wd.u0) == 0 and s.pair(w, wd.u0p) == 0
    d, _ = diagonalize(wd.S) if wd.S else ([], None)
    assert all(x > 0 for x in d)
    assert s.det_basis(wd.basis()) > 0


def horo_embed(witt: WittData, t, b=None):
    """Witt coordinates of Z(t,b) = n(b) a(t) Z0, namely (t + (b,b)/t, b/t, 1/t)."""
    k = len(witt.W_basis)
    if b is None:
        b = (0,) * k
    if t <= 0:
        raise ValueError("t must be positive")
    exact = isinstance(t, (int, Fraction)) and all(isinstance(c, (int, Fraction)) for c in b)
    if exact:
        t = Fraction(t)
        b = vec(b)
    bb = sum(b[i] * witt.S[i][j] * b[j] for i in range(k) for j in range(k))
    return (t + bb / t,) + tuple(c / t for c in b) + (1 / t,)


def witt_gram(S):
    """Gram matrix of the basis (u0, W, u0p) with (u0,u0p) = -1/2 and W-Gram S."""
    S = mat(S)
    k = len(S)
    n = k + 2
    g = [[Fraction(0)] * n for _ in range(n)]
    g[0][n - 1] = g[n - 1][0] = Fraction(-1, 2)
    for i in range(k):
        for j in range(k):
            g[i + 1][j + 1] = S[i][j]
    return tuple(tuple(r) for r in g)


def float_pair(space: QuadSpace, x, y):
    g = space.gram
    return sum(float(g[i][j]) * x[i] * y[j] for i in range(len(x)) for j in range(len(y)) if g[i][j])


def isqrt_exact(x: Fraction):
    """Exact square root of a nonnegative rational, or None."""
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None
