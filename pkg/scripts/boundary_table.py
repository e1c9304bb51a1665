"""Residuals of the kernel against its boundary limit for growing t, both cusp cases."""
import warnings
from fractions import Fraction

from thetacycles.quadspace import QuadSpace, mat
from thetacycles.lattice import LatticeData
from thetacycles.binarymodel import cusp_at
from thetacycles import kernel as kn


def main():
    warnings.simplefilter("ignore")
    L = LatticeData(QuadSpace(mat([[0, 0, -1], [0, 2, 0], [-1, 0, 0]])))
    rows = kn.boundary_limit_check(L, (0, Fraction(1, 3), 0), cusp_at(L, (1, 0, 0)), dps=250)
    print("coset in the perp of the cusp line")
    for t, r in rows:
        print(f"  t={t:<3} residual={float(r):.3e}")
    G = LatticeData(QuadSpace(mat([[0, 0, -3], [0, 2, 0], [-3, 0, 0]])))
    rows = kn.boundary_limit_check(G, (0, 0, Fraction(1, 3)), cusp_at(G, (1, 0, 0)), t_grid=(1, 2, 3, 4),
                                   b=Fraction(1, 3), dps=60)
    print("coset off the perp (limit zero)")
    for t, r in rows:
        print(f"  t={t:<3} residual={float(r):.3e}")
    print(f"  fitted exp(-C t^2) with C = {kn.gaussian_decay_fit(rows):.3f}")


if __name__ == "__main__":
    main()
