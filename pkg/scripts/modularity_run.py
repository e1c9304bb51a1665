"""Calibrate the transformation check on theta^3, then run it on the corpus lift."""
import json
import time
import warnings
from fractions import Fraction

from thetacycles.quadspace import QuadSpace, mat
from thetacycles.lattice import LatticeData
from thetacycles.binarymodel import GroupSpec
from thetacycles import lift as lf
from thetacycles import modcheck as mc


def main():
    warnings.simplefilter("ignore")
    th = mc.theta_std(mc.required_precision(4))
    for w in (Fraction(3, 2), Fraction(1, 2)):
        rep = mc.check_transformation(th * th * th, w, 4)
        print(f"theta^3 at weight {w}: {'PASS' if rep.passed else 'FAIL'} max residual {rep.max_residual:.2e}")
    L = LatticeData(QuadSpace(mat([[0, 0, -1], [0, 6, 0], [-1, 0, 0]])))
    spec = lf.cycle_spec(L, (0, Fraction(1, 6), 0), (1, 0, -1), GroupSpec("congruence", 3))
    level = 4 * 9 * L.level
    t = time.time()
    series = lf.product_factorization(spec, mc.required_precision(level))
    rep = mc.check_transformation(series, Fraction(3, 2), level, lattice_level=L.level)
    print(f"corpus lift, level {level}: {'PASS' if rep.passed else 'FAIL'} "
          f"max residual {rep.max_residual:.2e} ({time.time() - t:.0f}s)")
    print(json.dumps({k: rep.to_json()[k] for k in ("verdict", "note")}))


if __name__ == "__main__":
    main()
