"""How often random string products admit a general-position factorization."""
import argparse
import random
from collections import Counter

from qaffine.lweights import PointTable, QExponent, SpectralParam
from qaffine.sl2 import StringDesc, factor_points, strings_product


def random_string(rng):
    orbit, off = rng.choice("ab"), rng.randint(-6, 6)
    u = rng.random()
    if u < 0.5:
        return StringDesc.make(rng.randint(1, 4), SpectralParam.make(orbit, off))
    if u < 0.75:
        return StringDesc.make(QExponent.make(rng.randint(-3, 3), {"mu": 1}), SpectralParam.make(orbit, off))
    return StringDesc.from_points(SpectralParam.make(orbit, off), SpectralParam.make(orbit, QExponent.symbol(rng.choice(["nu", "xi"]))))


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--trials", type=int, default=20000)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    rng = random.Random(args.seed)
    counts = Counter()
    for _ in range(args.trials):
        f = strings_product([random_string(rng) for _ in range(rng.randint(1, 5))])
        table = PointTable()
        pts = {table.point(q): m for q, m in f.factors}
        counts[factor_points(pts, 1, lambda c: table.orbit_id[c], strict=False)[1]] += 1
    for status, n in sorted(counts.items()):
        print(f"{status}: {n} ({100 * n / args.trials:.2f}%)")


if __name__ == "__main__":
    main()
