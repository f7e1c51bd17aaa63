"""Classify random subalgebras of normal forms.

Picks random rational combinations of generators of a normal form, closes
them under brackets and classifies the result.  Prints a histogram of the
outcomes; NonRationalConstants is expected whenever the rank drops below
the number of variables.
"""

import argparse
import random
from collections import Counter
from fractions import Fraction

from nilderiv.classifier import ClassificationError, NonRationalConstants, classify
from nilderiv.derivations import Derivation, bracket
from nilderiv.lie import k_linear_reduce, rank_over_R
from nilderiv.samples import normal_form, random_triangular, transport

FORMS = [("L1", 1, None), ("L1", 2, None), ("L2", 0, 1), ("L2", 0, 2), ("L2", 1, 1), ("L2", 1, 2)]


def close(gens):
    gens = list(gens)
    while True:
        L = k_linear_reduce(gens)
        new = next((c for i, u in enumerate(L.gens) for v in L.gens[i + 1:]
                    for c in [bracket(u, v)] if c and L.coords(c) is None), None)
        if new is None:
            return list(L.gens)
        gens.append(new)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=100)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    stats = Counter()
    for _ in range(args.trials):
        full = list(normal_form(*rng.choice(FORMS)).gens)
        sub = rng.sample(full, rng.randint(2, len(full)))
        mixed = [sum((g * Fraction(rng.randint(1, 3) * rng.choice((-1, 1)), rng.randint(1, 3))
                      for g in rng.sample(sub, rng.randint(1, min(3, len(sub))))),
                     Derivation.zero(3)) for _ in sub]
        gens = transport(close(mixed), random_triangular(rng), rng)
        try:
            stats[classify(gens).label] += 1
        except NonRationalConstants:
            stats[f"NonRationalConstants (rank {rank_over_R(gens)})"] += 1
        except ClassificationError as exc:
            stats[type(exc).__name__] += 1
    for key, count in sorted(stats.items()):
        print(f"{count:5d}  {key}")


if __name__ == "__main__":
    main()
