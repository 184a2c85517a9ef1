"""Compare engine characters of generic least affinizations with the denominator products."""
import argparse
import time

from qaffine.cartan import parse_algebra
from qaffine.charform import denominator_product, lagpvm_exponents
from qaffine.expand import engine_character
from qaffine.lweights import QExponent, SpectralParam
from qaffine.minaff import HighestWeightSpec, least_affinization

CASES = [("A2", 6, None), ("A3", 5, None), ("B2", 6, None), ("C2", 5, None), ("G2", 5, None), ("B3", 4, None),
         ("C3", 4, None), ("F4", 3, None), ("B2", 5, [1]), ("B2", 5, [2]), ("C3", 4, [1]), ("G2", 5, [1]), ("G2", 5, [2])]


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--extra", type=int, default=0, help="add this to every height")
    args = p.parse_args()
    for name, H, J in CASES:
        H += args.extra
        cd = parse_algebra(name)
        J = J or list(cd.nodes)
        spec = HighestWeightSpec.make(cd, {j: QExponent.symbol(f"m{j}") for j in J})
        t0 = time.perf_counter()
        eng = engine_character(cd, least_affinization(spec, 1, SpectralParam.make("a")), H)
        diff = eng.first_difference(denominator_product(cd, lagpvm_exponents(cd, J), H))
        print(f"{name} J={J} H={H}: {'equal' if diff is None else f'differs {diff}'} ({time.perf_counter() - t0:.2f}s)")


if __name__ == "__main__":
    main()
