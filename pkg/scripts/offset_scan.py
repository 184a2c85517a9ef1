"""Zero offsets in the worked examples: the pole-path rule against the printed values.

The rule puts a zero at node j at offset r - sum B along the path from a neighbouring
pole at offset r.  ``--uniform`` additionally tries one common zero offset d for all zeros.
"""
import argparse

from qaffine.cartan import parse_algebra
from qaffine.charform import ConjSpec, default_offsets, realize
from qaffine.expand import engine_character

from worked_examples import EXAMPLES

# (poles, zeros) as node -> offset, zeros as node -> (order, offset)
PRINTED = {
    "A4-1": ({1: 0, 3: 0}, {2: (1, 3)}),
    "A4-2": ({2: 0}, {1: (1, 3), 3: (1, 3)}),
    "F4-1": ({3: 0}, {2: (1, 5), 4: (1, 3)}),
    "F4-2": ({3: 0}, {1: (1, 7), 4: (1, 3)}),
    "D5-1": ({2: 1, 4: 1, 5: 1}, {1: (1, 4), 3: (1, 4)}),
    "D5-2": ({2: 1, 4: 1, 5: 1}, {1: (1, 4), 3: (2, 4)}),
    "D5-3": ({2: 1, 4: 1, 5: 1}, {3: (1, 4)}),
}


def verdict(cd, spec, H):
    R = realize(spec)
    diff = engine_character(cd, R.lweight, H).first_difference(R.expected(spec, H, check=False))
    return "equal" if diff is None else f"differs at {list(diff[0])}"


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--height", type=int, default=4)
    p.add_argument("--uniform", type=int, nargs=2, metavar=("LO", "HI"))
    args = p.parse_args()
    H = args.height
    for name, (S, U) in PRINTED.items():
        algebra, orbit = EXAMPLES[name]
        cd = parse_algebra(algebra)
        rule = default_offsets(ConjSpec.make(cd, [dict(orbit, orbit="a")]))
        printed = ConjSpec.make(cd, [{"orbit": "a", "S": S, "U": U}])
        line = f"{name}: rule {dict((j, r) for j, _, r in rule.orbits[0].U)} {verdict(cd, rule, H)}; "
        line += f"printed {dict((j, r) for j, (_, r) in U.items())} {verdict(cd, printed, H)}"
        if args.uniform:
            ok = [d for d in range(args.uniform[0], args.uniform[1] + 1)
                  if verdict(cd, ConjSpec.make(cd, [{"orbit": "a", "S": {i: 0 for i in S}, "U": {j: (n, d) for j, (n, _) in U.items()}}]), H) == "equal"]
            line += f"; uniform offsets that agree: {ok}"
        print(line, flush=True)


if __name__ == "__main__":
    main()
