"""Assemble the lift of every corpus cycle both ways and print the first terms."""
import argparse
import time
import warnings
from fractions import Fraction

from thetacycles.quadspace import QuadSpace, mat
from thetacycles.lattice import LatticeData
from thetacycles.binarymodel import GroupSpec
from thetacycles import lift as lf

CORPUS = {
    "A": ([[0, 0, -1], [0, 6, 0], [-1, 0, 0]], (0, Fraction(1, 6), 0), (1, 0, -1), 3),
    "B": ([[0, 0, -1], [0, 6, 0], [-1, 0, 0]], (0, Fraction(1, 6), 0), (1, 1, -1), 3),
    "C": ([[0, 0, -1], [0, 6, 0], [-1, 0, 0]], (0, Fraction(1, 6), 0), (1, 0, -2), 3),
    "D": ([[0, 0, -1], [0, 10, 0], [-1, 0, 0]], (0, Fraction(1, 10), 0), (1, 0, -1), 5),
    "E": ([[3, 0, 0], [0, 3, 0], [0, 0, -3]], (0, Fraction(1, 3), 0), (1, 2, 0), 12),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--prec", default="20")
    ap.add_argument("--terms", type=int, default=6)
    args = ap.parse_args()
    warnings.simplefilter("ignore")
    prec = Fraction(args.prec)
    for name, (gram, h, u, N) in CORPUS.items():
        t = time.time()
        spec = lf.cycle_spec(LatticeData(QuadSpace(mat(gram))), h, u, GroupSpec("congruence", N))
        a = lf.lift_over_cycle(spec, prec)
        b = lf.product_factorization(spec, prec)
        head = list(a.exponents().items())[:args.terms]
        body = " + ".join(f"({v}) q^{e}" for e, v in head) or "0"
        print(f"{name}: {'agree' if a == b else 'DISAGREE'} in {time.time() - t:.1f}s  {body}")


if __name__ == "__main__":
    main()
