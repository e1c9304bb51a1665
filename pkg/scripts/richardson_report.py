"""Error of the s -> 0 extrapolation of the Hurwitz-difference form for several node sets."""
import warnings
from fractions import Fraction

from thetacycles.quadspace import QuadSpace, mat
from thetacycles.lattice import LatticeData
from thetacycles.binarymodel import GroupSpec
from thetacycles.cycles import reduced_frames
from thetacycles import lift as lf

NODE_SETS = {
    "3 nodes 1/2..1/8": tuple(Fraction(1, 2 ** k) for k in range(1, 4)),
    "5 nodes 1/8..1/128": tuple(Fraction(1, 2 ** k) for k in range(3, 8)),
    "default": lf.DEFAULT_NODES,
}


def main():
    warnings.simplefilter("ignore")
    L = LatticeData(QuadSpace(mat([[0, 0, -4], [0, 2, 0], [-4, 0, 0]])))
    grp = GroupSpec("congruence", 4)
    for h in [(Fraction(1, 4), 0, 0), (Fraction(3, 4), 0, 0), (0, 0, Fraction(1, 4))]:
        red = reduced_frames(L, h, 0, grp)
        exact = lf.omega_at_zero(red)
        errs = {k: abs(float(lf.omega_extrapolated(red, n)) - float(exact)) for k, n in NODE_SETS.items()}
        print(h, "exact", exact, " ".join(f"[{k}] {e:.1e}" for k, e in errs.items()))


if __name__ == "__main__":
    main()
