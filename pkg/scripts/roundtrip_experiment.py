"""Round-trip normal forms through random coordinate and basis changes.

Each trial takes a normal form, optionally replaces its basis by random
rational combinations, pushes it through a random triangular automorphism
and checks that classify recovers the same tag and parameters.
"""

import argparse
import random
import time
from collections import Counter
from fractions import Fraction

from nilderiv.classifier import ClassificationError, classify
from nilderiv.derivations import Derivation
from nilderiv.lie import k_linear_reduce
from nilderiv.samples import SAMPLE_FORMS, normal_form, random_triangular, transport


def mix(gens, rng):
    while True:
        out = [sum((g * Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for g in gens),
                   Derivation.zero(3)) for _ in gens]
        if k_linear_reduce(out).dim == len(gens):
            return out


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=100)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--degree", type=int, default=2, help="degree of the automorphism")
    parser.add_argument("--mix", action="store_true", help="random rational change of basis")
    args = parser.parse_args()

    rng = random.Random(args.seed)
    hits, misses = Counter(), Counter()
    start = time.perf_counter()
    for _ in range(args.trials):
        form = rng.choice(SAMPLE_FORMS)
        gens = list(normal_form(*form).gens)
        if args.mix:
            gens = mix(gens, rng)
        gens = transport(gens, random_triangular(rng, degree=args.degree), rng)
        try:
            rep = classify(gens)
            got = (rep.tag, rep.n, rep.m)
        except ClassificationError as exc:
            got = type(exc).__name__
        (hits if got == form else misses)[(form, got)] += 1
    elapsed = time.perf_counter() - start
    for (form, _), count in sorted(hits.items(), key=str):
        print(f"ok    {form}: {count}")
    for (form, got), count in sorted(misses.items(), key=str):
        print(f"MISS  {form} -> {got}: {count}")
    print(f"{sum(hits.values())}/{args.trials} recovered in {elapsed:.1f}s")


if __name__ == "__main__":
    main()
