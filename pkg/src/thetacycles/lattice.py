"""Integral lattices L = Z^m inside a quadratic space, their duals, congruence
cosets L + h, and exact enumeration of vectors and frames under a majorant bound.
"""
from __future__ import annotations

import hashlib
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from .quadspace import QuadSpace, Majorant, det, inverse, transpose, vec, frac

DEFAULT_CAP = 2_000_000


def _lcm(a, b):
    return a * b // math.gcd(a, b)


def smith_diagonal(m):
    """Elementary divisors of an integer matrix (Smith normal form diagonal)."""
    a = [[int(x) for x in r] for r in m]
    rows, cols = len(a), len(a[0])
    diag = []
    t = 0
    while t < min(rows, cols):
        nz = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        a[t], a[i] = a[i], a[t]
        for r in a:
            r[t], r[j] = r[j], r[t]
        while True:
            done = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        done = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    for r in a:
                        r[j] -= q * r[t]
                    if a[t][j]:
                        for r in a:
                            r[t], r[j] = r[j], r[t]
                        done = False
            if done:
                bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                            if a[i][j] % a[t][t]), None)
                if bad is None:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


@dataclass(frozen=True)
class LatticeData:
    space: QuadSpace
    level: int = field(init=False)
    disc_group_order: Fraction = field(init=False)

    def __post_init__(self):
        d = dual_basis_of(self.space.gram)
        cols = transpose(d)
        den = 1
        for i, a in enumerate(cols):
            den = _lcm(den, self.space.q(a).denominator)
            for b in cols[i + 1:]:
                den = _lcm(den, self.space.pair(a, b).denominator)
        object.__setattr__(self, "level", den)
        object.__setattr__(self, "disc_group_order", abs(det(self.space.gram)))

    @property
    def gram(self):
        return self.space.gram

    @property
    def dim(self):
        return self.space.dim

    def is_integral(self):
        return all(x.denominator == 1 for r in self.gram for x in r)

    def disc_group(self):
        """Elementary divisors of L#/L (integral Gram matrices only)."""
        if not self.is_integral():
            raise ValueError("L is not contained in its dual")
        return [d for d in smith_diagonal(self.gram) if d != 1]

    def in_dual(self, h):
        return all(self.space.pair(h, e).denominator == 1 for e in _unit_vectors(self.dim))

    def hash(self):
        payload = json.dumps([[str(x) for x in r] for r in self.gram])
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


def _unit_vectors(n):
    return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]


def dual_basis_of(gram):
    return inverse(gram)


def dual_basis(L: LatticeData):
    """Columns generate L#; gram @ dual_basis is the identity."""
    return dual_basis_of(L.gram)


def reduce_mod_lattice(h):
    return tuple(x - (x.numerator // x.denominator) for x in vec(h))


@dataclass(frozen=True)
class CongruenceCoset:
    """The coset L^n + h with every h_i reduced into [0,1)^m."""
    h: tuple
    n: int = field(init=False)

    def __post_init__(self):
        hs = tuple(reduce_mod_lattice(x) for x in self.h)
        object.__setattr__(self, "h", hs)
        object.__setattr__(self, "n", len(hs))

    @classmethod
    def single(cls, h):
        return cls((vec(h),))

    @classmethod
    def zero(cls, m, n=1):
        return cls(tuple((Fraction(0),) * m for _ in range(n)))

    def check_dual(self, L: LatticeData):
        for x in self.h:
            if not L.in_dual(x):
                raise ValueError("coset vector is not in the dual lattice")
        return self

    def negate(self):
        return CongruenceCoset(tuple(tuple(-c for c in x) for x in self.h))

    def is_symmetric(self):
        return self == self.negate()


@dataclass
class FrameSet:
    beta: tuple
    frames: list
    R: float

    def __len__(self):
        return len(self.frames)


def _as_float_matrix(m):
    return np.array([[float(x) for x in r] for r in m])


def ellipsoid_points(Q, h, R, cap=DEFAULT_CAP):
    """All integer k with (k+h)^T Q (k+h) <= R (Q positive definite, float).

    A relative margin is added so that floating error never drops a point; exact
    filters are applied by the callers.
    """
    Q = np.asarray(Q, dtype=float)
    m = Q.shape[0]
    hf = np.array([float(x) for x in h])
    Rm = R * (1 + 1e-9) + 1e-9
    Rc = np.linalg.cholesky(Q).T  # Q = Rc^T Rc, Rc upper triangular
    diag = np.diag(Rc).copy()
    mu = Rc / diag[:, None]
    out = []
    y = np.zeros(m)
    count = 0

    def rec(i, rem):
        nonlocal count
        c = -sum(mu[i, j] * y[j] for j in range(i + 1, m))
        r = math.sqrt(max(rem, 0.0)) / diag[i]
        lo = math.ceil(c - r - hf[i] - 1e-9)
        hi = math.floor(c + r - hf[i] + 1e-9)
        for k in range(lo, hi + 1):
            count += 1
            if count > cap:
                raise RuntimeError("enumeration cap exceeded")
            y[i] = k + hf[i]
            t = diag[i] * (y[i] - c)
            nrem = rem - t * t
            if nrem < -1e-9 * (1 + Rm):
                continue
            if i == 0:
                out.append(tuple(int(v - hh) for v, hh in zip(np.rint(y - hf), np.zeros(m))))
            else:
                rec(i - 1, nrem)
        y[i] = 0.0

    rec(m - 1, Rm)
    return out


def enumerate_norm(L: LatticeData, h, m, Z_ref: Majorant, R, cap=DEFAULT_CAP, exclude_zero=True):
    """Vectors x in L + h with q(x) = m and (x,x)_Z <= R, in lexicographic order."""
    if R <= 0:
        raise ValueError("R must be positive")
    if isinstance(h, CongruenceCoset):
        h = h.h[0]
    h = reduce_mod_lattice(h)
    m = frac(m)
    Q = _as_float_matrix(Z_ref.gram_Z)
    pts = ellipsoid_points(Q, h, float(R), cap)
    if pts:
        # float prefilter on the norm; the exact test below decides
        arr = np.array(pts, dtype=float) + np.array([float(c) for c in h])
        G = _as_float_matrix(L.space.gram)
        qf = 0.5 * np.einsum("ij,jk,ik->i", arr, G, arr)
        keep = np.abs(qf - float(m)) <= 1e-7 * (1.0 + float(R))
        pts = [p for p, k in zip(pts, keep) if k]
    out = []
    for k in pts:
        x = tuple(Fraction(a) + b for a, b in zip(k, h))
        if exclude_zero and not any(x):
            continue
        if L.space.q(x) != m:
            continue
        if _exact_norm_le(Z_ref, x, R):
            out.append(x)
    out.sort()
    return FrameSet(((m,),), [(x,) for x in out], float(R))


def _exact_norm_le(Z_ref, x, R):
    if all(isinstance(z, Fraction) for z in Z_ref.Z):
        return Z_ref.norm(x) <= frac(R)
    xf = [float(c) for c in x]
    return Z_ref.norm(xf) <= float(R) * (1 + 1e-12)


def enumerate_frames(L: LatticeData, h: CongruenceCoset, beta, Z_ref: Majorant, R,
                     cap=DEFAULT_CAP, exclude_zero=True):
    """Frames X in L^n + h with (X,X)/2 = beta and every (x_i,x_i)_Z <= R."""
    beta = tuple(vec(r) for r in beta)
    n = len(beta)
    if any(beta[i][j] != beta[j][i] for i in range(n) for j in range(n)):
        raise ValueError("beta is not symmetric")
    if h.n != n:
        raise ValueError("coset length does not match beta")
    lists = [enumerate_norm(L, h.h[i], beta[i][i], Z_ref, R, cap, exclude_zero).frames
             for i in range(n)]
    frames = []
    for combo in product(*lists):
        X = tuple(c[0] for c in combo)
        if all(L.space.pair(X[i], X[j]) == 2 * beta[i][j] for i in range(n) for j in range(i + 1, n)):
            frames.append(X)
    frames.sort()
    return FrameSet(beta, frames, float(R))


# cache -----------------------------------------------------------------------

def cache_dir(path=None):
    return path or os.environ.get("THETACYCLES_CACHE")


def cache_key(L: LatticeData, h, beta, R):
    payload = json.dumps({"gram": L.hash(), "h": [[str(c) for c in x] for x in h],
                          "beta": [[str(c) for c in r] for r in beta], "R": repr(float(R))},
                         sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()


def _frames_payload(fs: FrameSet):
    return [[[str(c) for c in x] for x in X] for X in fs.frames]


def write_cache(directory, key, fs: FrameSet):
    os.makedirs(directory, exist_ok=True)
    body = _frames_payload(fs)
    digest = hashlib.sha256(json.dumps(body).encode()).hexdigest()
    doc = {"key": key, "sha256": digest, "beta": [[str(c) for c in r] for r in fs.beta],
           "R": fs.R, "frames": body}
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    with os.fdopen(fd, "w") as f:
        json.dump(doc, f)
    os.replace(tmp, os.path.join(directory, key + ".json"))


def read_cache(directory, key):
    """Cached FrameSet, or None when missing or corrupted."""
    path = os.path.join(directory, key + ".json")
    try:
        with open(path) as f:
            doc = json.load(f)
        body = doc["frames"]
        if doc["key"] != key or hashlib.sha256(json.dumps(body).encode()).hexdigest() != doc["sha256"]:
            return None
        frames = [tuple(vec(x) for x in X) for X in body]
        return FrameSet(tuple(vec(r) for r in doc["beta"]), frames, doc["R"])
    except (OSError, ValueError, KeyError, TypeError):
        return None


def cached_enumerate_frames(L, h, beta, Z_ref, R, directory=None, **kw):
    directory = cache_dir(directory)
    if directory is None:
        return enumerate_frames(L, h, beta, Z_ref, R, **kw)
    key = cache_key(L, h.h, tuple(vec(r) for r in beta), R) + "-" + hashlib.sha256(
        repr(Z_ref.Z).encode()).hexdigest()[:8]
    fs = read_cache(directory, key)
    if fs is None:
        fs = enumerate_frames(L, h, beta, Z_ref, R, **kw)
        write_cache(directory, key, fs)
    return fs
