"""Classify the reference fixtures and print tag, parameters and embedding."""

import argparse

from nilderiv.classifier import classify
from nilderiv.parser import parse_vector_field

FIXTURES = {
    "abelian": ["x1*d1", "x2*d2", "x3*d3"],
    "heisenberg": ["d1", "x3*d1 + d2", "d3"],
    "l1": ["d3", "d1", "x3*d1", "d2", "x3*d2"],
    "l2": ["d3", "d2", "d1", "x3*d1", "x2*d1", "x2*x3*d1"],
}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("names", nargs="*", help=f"subset of {', '.join(FIXTURES)}")
    args = parser.parse_args()
    unknown = set(args.names) - set(FIXTURES)
    if unknown:
        parser.error(f"unknown fixtures: {', '.join(sorted(unknown))}")
    for name in args.names or FIXTURES:
        texts = FIXTURES[name]
        rep = classify([parse_vector_field(t, 3) for t in texts])
        print(f"{name}: {rep.label}  a={rep.a}  b={rep.b}")
        for src, img in rep.correspondence:
            print(f"  {src.to_str():>24} -> {img.to_str()}")


if __name__ == "__main__":
    main()
