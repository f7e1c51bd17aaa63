"""Command-line interface.

    nilderiv classify --nvars 3 --field "d1" --field "x3*d1 + d2" --field "d3"
    nilderiv bracket --nvars 3 "d3" "x3*d1"
    nilderiv rank | center | nilpotency --nvars N --field ...

Exit status: 0 success, 2 parse error, 3 not closed, 4 not nilpotent,
5 rank above three, 6 constants larger than Q, 1 anything else.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from .classifier import ClassificationError, NotNilpotent, classify
from .derivations import Derivation, bracket
from .lie import (LieBasis, NotClosed, center, k_linear_reduce, lower_central_series,
                  rank_over_R)
from .parser import ParseError, parse_vector_field

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_PARSE = 2
EXIT_NOT_CLOSED = 3


@dataclass
class Report:
    """Everything ``classify`` prints, in the order of the JSON schema."""

    input: List[str]
    rank: int
    nilpotent: bool
    nilpotency_class: int
    center_dim: int
    normal_form: Dict
    embedding: List[str]
    verified: Dict[str, bool] = field(default_factory=dict)
    basis: List[str] = field(default_factory=list)  # reduced input basis, not serialized

    def to_dict(self) -> Dict:
        return {
            "input": self.input,
            "rank": self.rank,
            "nilpotent": self.nilpotent,
            "class": self.nilpotency_class,
            "center_dim": self.center_dim,
            "normal_form": self.normal_form,
            "embedding": self.embedding,
            "verified": self.verified,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _s(x) -> Optional[str]:
    return None if x is None else x.to_str()


def run_classify(fields: Sequence[Derivation], texts: Optional[Sequence[str]] = None) -> Report:
    """Closure, nilpotency, rank, classification and embedding of ``fields``."""
    texts = list(texts) if texts is not None else [f.to_str() for f in fields]
    rep = classify(list(fields))
    L = rep.source
    series = lower_central_series(L)
    nf = {
        "tag": rep.tag,
        "n": rep.n,
        "m": rep.m,
        "witnesses": {"a": _s(rep.a), "b": _s(rep.b), "D1": _s(rep.D1), "D2": _s(rep.D2),
                      "D3": _s(rep.D3)},
    }
    return Report(input=texts, rank=rep.rank, nilpotent=True,
                  nilpotency_class=series.nilpotency_class, center_dim=center(L).dim,
                  normal_form=nf, embedding=[e.to_str() for e in rep.embedded.gens],
                  verified=dict(rep.verified), basis=[g.to_str() for g in L.gens])


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, ParseError):
        return EXIT_PARSE
    if isinstance(exc, NotClosed):
        return EXIT_NOT_CLOSED
    if isinstance(exc, ClassificationError):
        return exc.exit_code
    return EXIT_ERROR


def _error_json(texts: Sequence[str], exc: BaseException) -> str:
    return json.dumps({"input": list(texts),
                       "error": {"type": type(exc).__name__, "code": _exit_code(exc),
                                 "message": str(exc)}}, indent=2)


def _parse_all(texts: Sequence[str], nvars: int) -> List[Derivation]:
    return [parse_vector_field(t, nvars) for t in texts]


def _basis(args) -> LieBasis:
    return k_linear_reduce(_parse_all(args.field, args.nvars), args.nvars)


def cmd_classify(args) -> int:
    fields = _parse_all(args.field, args.nvars)
    report = run_classify(fields, args.field)
    text = report.to_json()
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(text + "\n")
    nf = report.normal_form
    label = nf["tag"] + ("" if nf["n"] is None else f" n={nf['n']}") + \
        ("" if nf["m"] is None else f" m={nf['m']}")
    print(f"rank {report.rank}, class {report.nilpotency_class}, center dim {report.center_dim}")
    print(f"normal form: {label}")
    for k, v in nf["witnesses"].items():
        if v is not None:
            print(f"  {k} = {v}")
    print("embedding:")
    for src, img in zip(report.basis, report.embedding):
        print(f"  {src}  ->  {img}")
    return EXIT_OK


def cmd_bracket(args) -> int:
    a, b = _parse_all([args.left, args.right], args.nvars)
    print(bracket(a, b).to_str())
    return EXIT_OK


def cmd_rank(args) -> int:
    print(rank_over_R(_parse_all(args.field, args.nvars)))
    return EXIT_OK


def cmd_center(args) -> int:
    L = _basis(args)
    L.structure  # noqa: B018 - raises when not closed
    Z = center(L)
    print(f"dim {Z.dim}")
    for D in Z.elements(L):
        print(f"  {D.to_str()}")
    return EXIT_OK


def cmd_nilpotency(args) -> int:
    L = _basis(args)
    series = lower_central_series(L)
    print("dims " + " ".join(str(d) for d in series.dims))
    if not series.nilpotent:
        print("not nilpotent")
        return NotNilpotent.exit_code
    print(f"nilpotent of class {series.nilpotency_class}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nilderiv",
                                description="Nilpotent Lie algebras of polynomial vector fields.")
    sub = p.add_subparsers(dest="command", required=True)

    def with_fields(name: str, help: str):
        s = sub.add_parser(name, help=help)
        s.add_argument("--nvars", type=int, required=True, help="number of variables")
        s.add_argument("--field", action="append", required=True,
                       help="vector field, e.g. 'x3*d1 + d2' (repeatable)")
        return s

    s = with_fields("classify", "normal form and triangular embedding")
    s.add_argument("--json", metavar="PATH", help="also write the JSON report here")
    s.set_defaults(func=cmd_classify)
    with_fields("rank", "rank over the rational function field").set_defaults(func=cmd_rank)
    with_fields("center", "center of the Q-span").set_defaults(func=cmd_center)
    with_fields("nilpotency", "lower central series").set_defaults(func=cmd_nilpotency)

    s = sub.add_parser("bracket", help="Lie bracket of two fields")
    s.add_argument("--nvars", type=int, required=True)
    s.add_argument("left")
    s.add_argument("right")
    s.set_defaults(func=cmd_bracket)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, NotClosed, ClassificationError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        if getattr(args, "json", None):
            with open(args.json, "w") as fh:
                fh.write(_error_json(args.field, exc) + "\n")
        return _exit_code(exc)


if __name__ == "__main__":
    sys.exit(main())
