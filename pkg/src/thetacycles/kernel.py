"""Numeric side: the Schwartz form, truncated theta coefficients with tail bounds, geodesic
periods, and the boundary limit of the kernel at a cusp."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np
from scipy import integrate

from .quadspace import (QuadSpace, majorant, horo_embed, diagonalize, vec, matvec)
from .lattice import LatticeData, ellipsoid_points, enumerate_norm, reduce_mod_lattice
from .qseries import eval_mp
from .binarymodel import Geodesic, Cusp, model_for
from . import lift as _lift


@dataclass
class KernelEval:
    tau: complex
    Z: tuple
    value: object
    truncation_radius: float
    tail_bound: float
    count: int = 0


def _gram(space):
    return np.array([[float(x) for x in r] for r in space.gram])


def phi_eval(space: QuadSpace, tau, X, Z, W, tol=1e-9):
    """2^{n/2} det(v)^{1/2} det(X,W) exp(pi i tr (X,X)_{tau,Z}) for an n-frame X and tangent n-tuple W.

    tau is a complex number (n = 1) or an n x n complex symmetric matrix.
    """
    G = _gram(space)
    X = np.atleast_2d(np.array(X, dtype=float))
    W = np.atleast_2d(np.array(W, dtype=float))
    Z = np.array(Z, dtype=float)
    n = X.shape[0]
    Gz = G @ Z
    zz = Z @ Gz
    if abs(zz + 1) > tol:
        raise ValueError("not on hyperboloid")
    if np.any(np.abs(W @ Gz) > tol):
        raise ValueError("W is not tangent at Z")
    T = np.atleast_2d(np.array(tau, dtype=complex))
    u, v = T.real, T.imag
    XX = X @ G @ X.T
    xz = X @ Gz
    XXZ = XX + 2 * np.outer(xz, xz)  # (X,X)_Z for (Z,Z) = -1
    XW = X @ G @ W.T
    expo = np.pi * 1j * np.trace(u @ XX + 1j * v @ XXZ)
    return 2 ** (n / 2) * math.sqrt(np.linalg.det(v)) * np.linalg.det(XW) * np.exp(expo)


def tangent_basis(space: QuadSpace, Z):
    """Orthonormal basis of the tangent space Z^perp (float)."""
    G = _gram(space)
    Z = np.array(Z, dtype=float)
    Gz = G @ Z
    m = len(Z)
    basis = []
    for i in range(m):
        e = np.zeros(m)
        e[i] = 1.0
        w = e + (e @ Gz) * Z  # projection to Z^perp, using (Z,Z) = -1
        for b in basis:
            w = w - (w @ G @ b) * b
        nn = w @ G @ w
        if nn > 1e-9:
            basis.append(w / math.sqrt(nn))
        if len(basis) == m - 1:
            break
    return np.array(basis)


def _lattice_tail(lam, v, beta, R, m=3):
    """Bound for sum over lattice points with majorant norm > R of sqrt(2v N) exp(-pi v (N - 2 beta))."""
    total = 0.0
    r = R
    step = 1.0
    for _ in range(100000):
        cnt = (2 * math.sqrt((r + step) / lam) + 1) ** m
        term = cnt * math.sqrt(2 * v * (r + step)) * math.exp(-math.pi * v * (r - 2 * beta))
        total += term
        if term < 1e-30 * max(total, 1e-300) or term < 1e-300:
            break
        r += step
    return total


def _radius_for(lam, v, beta, tol):
    R = 2 * float(beta) + 1.0
    while _lattice_tail(lam, v, float(beta), R) > tol:
        R *= 1.25
    return R


def theta_coeff_numeric(L: LatticeData, h, beta, v, Z, W=None, tol=1e-12):
    """Normalized beta-coefficient of the theta kernel at Z:

        sum over x in L + h, q(x) = beta, of sqrt(2 v) (x, W) exp(-2 pi v (x, Z)^2)

    (the factor exp(-2 pi beta v) taken out).  Components along an orthonormal tangent
    basis when W is None.
    """
    beta = Fraction(beta)
    Zf = tuple(float(z) for z in Z)
    Zm = majorant(L.space, Zf, tol=1e-9)
    lam = float(min(np.linalg.eigvalsh(np.array(Zm.gram_Z, dtype=float))))
    R = _radius_for(lam, v, float(beta), tol)
    fs = enumerate_norm(L, h, beta, Zm, R)
    G = _gram(L.space)
    Wt = tangent_basis(L.space, Zf) if W is None else np.atleast_2d(np.array(W, dtype=float))
    val = np.zeros(len(Wt))
    if len(fs):
        X = np.array([[float(c) for c in f[0]] for f in fs.frames])
        xz = X @ G @ np.array(Zf)
        xw = X @ G @ Wt.T
        g = np.exp(-2 * math.pi * v * xz ** 2)
        val = math.sqrt(2 * v) * (xw * g[:, None]).sum(axis=0)
    value = val[0] if W is not None else val
    return KernelEval(1j * v, Zf, value, R, _lattice_tail(lam, v, float(beta), R), len(fs))


# geodesic periods -------------------------------------------------------------------------

@dataclass
class GeodesicFrame:
    u: tuple
    z0: np.ndarray
    e0: np.ndarray
    length: float

    def point(self, s):
        return math.cosh(s) * self.z0 + math.sinh(s) * self.e0

    def tangent(self, s):
        return math.sinh(s) * self.z0 + math.cosh(s) * self.e0


def geodesic_frame(L: LatticeData, geodesic: Geodesic) -> GeodesicFrame:
    """Arclength parametrization of the geodesic orthogonal to u, oriented so that
    det(tangent, u, point) > 0, with the length of one stabilizer period."""
    if not geodesic.closed or geodesic.stabilizer_gen is None:
        raise ValueError("geodesic period needs a closed geodesic")
    model = model_for(L.space)
    u = model.vector(geodesic.form)
    A = model.act(geodesic.stabilizer_gen)
    tr = float(sum(A[i][i] for i in range(3)) - 1)
    length = math.acosh(tr / 2)
    kb = _lift.integer_kernel(matvec(L.gram, u))
    g2 = tuple(tuple(L.space.pair(a, b) for b in kb) for a in kb)
    d, vs = diagonalize(g2)
    amb = [tuple(sum(c * k[i] for c, k in zip(vv, kb)) for i in range(3)) for vv in vs]
    pos = next(a for x, a in zip(d, amb) if x > 0)
    neg = next(a for x, a in zip(d, amb) if x < 0)
    if not L.space.is_forward(neg):
        neg = tuple(-c for c in neg)
    if L.space.det_basis((pos, u, neg)) < 0:
        pos = tuple(-c for c in pos)
    z0 = np.array([float(c) for c in neg]) / math.sqrt(-float(L.space.pair(neg, neg)))
    e0 = np.array([float(c) for c in pos]) / math.sqrt(float(L.space.pair(pos, pos)))
    return GeodesicFrame(u, z0, e0, length)


def geodesic_period(L: LatticeData, h, beta, geodesic: Geodesic, v=1.0, quad_tol=1e-8,
                    piece=0.5, start=0.0):
    """Integral over one period of the closed geodesic of the normalized beta-coefficient
    paired with the unit tangent.  Returns (value, error estimate)."""
    beta = Fraction(beta)
    fr = geodesic_frame(L, geodesic)
    G = _gram(L.space)
    npieces = max(1, math.ceil(fr.length / piece))
    edges = np.linspace(start, start + fr.length, npieces + 1)
    total, err = 0.0, 0.0
    tail_tol = quad_tol / (10 * fr.length)
    for a, b in zip(edges[:-1], edges[1:]):
        mid, half = (a + b) / 2, (b - a) / 2
        Zm = fr.point(mid)
        M = majorant(L.space, tuple(Zm), tol=1e-9)
        lam = float(min(np.linalg.eigvalsh(np.array(M.gram_Z, dtype=float))))
        R = _radius_for(lam * math.exp(-2 * half), v, float(beta), tail_tol)
        fs = enumerate_norm(L, h, beta, M, R * math.exp(2 * half))
        if not len(fs):
            err += _lattice_tail(lam * math.exp(-2 * half), v, float(beta), R) * (b - a)
            continue
        X = np.array([[float(c) for c in f[0]] for f in fs.frames])
        XG = X @ G

        def f(s):
            xz = XG @ fr.point(s)
            xw = XG @ fr.tangent(s)
            terms = math.sqrt(2 * v) * xw * np.exp(-2 * math.pi * v * xz ** 2)
            return math.fsum(terms)

        val, e = integrate.quad(f, a, b, epsabs=quad_tol / (4 * npieces), epsrel=0, limit=200)
        total += val
        err += e + _lattice_tail(lam * math.exp(-2 * half), v, float(beta), R) * (b - a)
    return total, err


# boundary limit -------------------------------------------------------------------------

def boundary_component(L: LatticeData, h, cusp: Cusp, tau, t, b=0, dps=250):
    """theta(tau, Z(t,b)) evaluated on d/db Z(t,b) and divided by 2 s, with s = (w, w).

    As t grows this tends to the weighted boundary theta of the cusp.
    """
    w = cusp.witt
    s = w.S[0][0]
    t, b = Fraction(t), Fraction(b)
    Z = w.to_ambient(horo_embed(w, t, (b,)))
    dZ = w.to_ambient((2 * s * b / t, 1 / t, Fraction(0)))
    M = majorant(L.space, Z)
    sp = L.space
    with mpmath.workdps(dps):
        tau = mpmath.mpc(tau)
        u, v = tau.real, tau.imag
        lam = float(min(np.linalg.eigvalsh(np.array(M.gram_Z, dtype=float))))
        R = float(dps * math.log(10) / (math.pi * float(v))) + 20.0
        h = reduce_mod_lattice(h)
        pts = ellipsoid_points(np.array(M.gram_Z, dtype=float), h, R, cap=5_000_000)
        total = mpmath.mpf(0)
        terms = []
        for k in pts:
            x = tuple(Fraction(a) + c for a, c in zip(k, h))
            xx = sp.pair(x, x)
            xxz = M.norm(x)
            xw = sp.pair(x, dZ)
            if xw == 0:
                continue
            terms.append(_mpq(xw) * mpmath.exp(mpmath.pi * 1j * u * _mpq(xx) - mpmath.pi * v * _mpq(xxz)))
        total = mpmath.fsum(terms)
        return mpmath.sqrt(2 * v) * total / (2 * _mpq(s))


def _mpq(x):
    if isinstance(x, float):
        return mpmath.mpf(x)
    x = Fraction(x)
    return mpmath.mpf(x.numerator) / x.denominator


def boundary_limit_check(L: LatticeData, h, cusp: Cusp, v=1.0, t_grid=(2, 4, 8, 16), b=0, u=0,
                         dps=250):
    """Residuals |boundary_component(t) - boundary theta(tau)| for t in t_grid."""
    with mpmath.workdps(dps):
        tau = mpmath.mpc(_mpq(u), _mpq(v))
        prec = Fraction(int(dps * math.log(10) / (2 * math.pi * v)) + 4)
        B = _lift.boundary_theta(L, h, cusp, prec, strict=False)
        target = eval_mp(B, tau, dps)
        rows = []
        for t in t_grid:
            val = boundary_component(L, h, cusp, tau, t, b, dps)
            rows.append((t, abs(val - target)))
    return rows


def gaussian_decay_fit(rows):
    """Least-squares slope of log(residual) against t^2; returns C with residual ~ exp(-C t^2)."""
    rows = [(t, r) for t, r in rows if r > 0]  # exact zeros fall below working precision
    if len(rows) < 2:
        raise ValueError("need two nonzero residuals to fit")
    ts = np.array([float(t) ** 2 for t, r in rows])
    ls = np.array([float(mpmath.log(r)) for t, r in rows])
    slope, _ = np.polyfit(ts, ls, 1)
    return -slope
