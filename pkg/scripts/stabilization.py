"""Stabilization of integer KR families as n grows."""
import argparse

from qaffine.cartan import parse_algebra
from qaffine.charform import denominator_product, lagpvm_exponents
from qaffine.expand import engine_character, stabilization_check
from qaffine.lweights import SpectralParam
from qaffine.minaff import kr_lweight

a = SpectralParam.make("a")


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--algebra", default="B2")
    p.add_argument("--node", type=int, default=1)
    p.add_argument("--height", type=int, default=4)
    args = p.parse_args()
    cd, k, H = parse_algebra(args.algebra), args.node, args.height
    n0, chars = stabilization_check(cd, lambda n: kr_lweight(cd, k, n, a), H, n_max=H + 3)
    for n, ch in chars.items():
        print(f"n={n}: {len(ch.coeffs)} weights, total {sum(ch.as_dict().values())}")
    limit = chars[H + 3]
    print(f"n0={n0}")
    print("limit = lagpvm:", limit == denominator_product(cd, lagpvm_exponents(cd, [k]), H))
    print("limit = symbolic:", limit == engine_character(cd, kr_lweight(cd, k, "mu", a), H))


if __name__ == "__main__":
    main()
