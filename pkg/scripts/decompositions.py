"""Full characters of small least affinizations against sums of Weyl characters."""
from qaffine.cartan import parse_algebra
from qaffine.charform import weyl_sum
from qaffine.expand import engine_character
from qaffine.lweights import SpectralParam
from qaffine.minaff import HighestWeightSpec, kr_lweight, least_affinization

a = SpectralParam.make("a")


def compare(label, cd, f, weights):
    full = weyl_sum(cd, weights)
    eng = engine_character(cd, f, full.height + 1)
    print(f"{label}: height {full.height}, dim {sum(full.as_dict().values())}, equal {eng.as_dict() == full.as_dict()}")


def main():
    B2, G2 = parse_algebra("B2"), parse_algebra("G2")
    for k, l in [(2, 2), (1, 3), (3, 1), (0, 4), (2, 3)]:
        lam = {i: v for i, v in ((1, k), (2, l)) if v}
        f = least_affinization(HighestWeightSpec.make(B2, lam), 1, a)
        compare(f"B2 ({k},{l})", B2, f, [(k, l - 2 * i) for i in range(l // 2 + 1)])
    for k in range(1, 4):
        compare(f"G2 KR({k}w2)", G2, kr_lweight(G2, 2, k, a), [(0, r) for r in range(k, -1, -1)])


if __name__ == "__main__":
    main()
