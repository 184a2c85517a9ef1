"""Engine versus the orbit-wise product for the A4, F4 and D5 examples, at a range of heights."""
import argparse
import time

from qaffine.cartan import parse_algebra
from qaffine.charform import ConjSpec, charconj_validate, default_offsets, realize
from qaffine.expand import engine_character

EXAMPLES = {
    "A4-1": ("A4", {"S": {1: None, 3: None}, "U": {2: (1, None)}}),
    "A4-2": ("A4", {"S": {2: None}, "U": {1: (1, None), 3: (1, None)}}),
    "F4-1": ("F4", {"S": {3: None}, "U": {2: (1, None), 4: (1, None)}}),
    "F4-2": ("F4", {"S": {3: None}, "U": {1: (1, None), 4: (1, None)}}),
    "D5-1": ("D5", {"S": {2: None, 4: None, 5: None}, "U": {1: (1, None), 3: (1, None)}}),
    "D5-2": ("D5", {"S": {2: None, 4: None, 5: None}, "U": {1: (1, None), 3: (2, None)}}),
    "D5-3": ("D5", {"S": {2: None, 4: None, 5: None}, "U": {3: (1, None)}}),
}


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("names", nargs="*", default=sorted(EXAMPLES))
    p.add_argument("--heights", type=int, nargs="+", default=[4, 5])
    args = p.parse_args()
    for name in args.names:
        algebra, orbit = EXAMPLES[name]
        cd = parse_algebra(algebra)
        spec = default_offsets(ConjSpec.make(cd, [dict(orbit, orbit="a")]))
        print(f"{name}: {charconj_validate(spec)}; offsets {spec.orbits[0]}")
        R = realize(spec)
        for H in args.heights:
            t0 = time.perf_counter()
            diff = engine_character(cd, R.lweight, H).first_difference(R.expected(spec, H, check=False))
            print(f"  H={H}: {'equal' if diff is None else f'differs {diff}'} ({time.perf_counter() - t0:.1f}s)", flush=True)


if __name__ == "__main__":
    main()
